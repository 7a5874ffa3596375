// Acceptance run: one suite per criterion at the default bounds, with a
// single pass/fail line per criterion at the end.
//
//   ptcs_acceptance          all nine criteria
//   ptcs_acceptance 3 8      selected criteria

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "ptcs/checks.hpp"

namespace {

struct Criterion {
    int id;
    const char* title;
    const char* suite;
};

const std::vector<Criterion> criteria = {
    {1, "spectrum and eigenbasis", "eigen"},
    {2, "SUSY structure", "susy"},
    {3, "coherent-state properties", "cs"},
    {4, "resolution of identity", "identity"},
    {5, "operator quantization rows", "table1"},
    {6, "lower-symbol rows", "table2"},
    {7, "dynamics", "dynamics"},
    {8, "electron-well configuration", "electron"},
    {9, "normalization reconciliation", "normalization"},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> selected;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::cerr << "unknown criterion '" << argv[i] << "'\n";
            return 2;
        }
        selected.push_back(criteria[id - 1]);
    }
    if (selected.empty()) selected = criteria;

    std::vector<std::string> lines;
    bool all = true;
    for (const auto& c : selected) {
        const auto report = ptcs::run_suite(c.suite);
        std::cout << ptcs::format_report(report) << "\n" << std::flush;
        const auto* worst = report.worst();
        char line[512];
        std::snprintf(line, sizeof line, "criterion %d %-30s %s  (worst: %s = %.3e vs %.1e, %.1f s)", c.id, c.title,
                      report.pass() ? "PASS" : "FAIL", worst ? worst->name.c_str() : "-", worst ? worst->measured : 0.0,
                      worst ? worst->bound : 0.0, report.wall_time);
        lines.emplace_back(line);
        all = all && report.pass();
    }
    for (const auto& l : lines) std::cout << l << "\n";
    return all ? 0 : 1;
}
