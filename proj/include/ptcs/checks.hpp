#pragma once

// Invariant suites: every structural claim of the model as a measured value
// against a bound.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptcs/dynamics.hpp"

namespace ptcs {

struct CheckCase {
    enum class Kind {
        AtMost,   // pass iff measured <= bound
        AtLeast,  // pass iff measured >= bound
        Report,   // informational; always passes
    };

    std::string name;
    std::string key;  // tolerance-override key shared by related cases
    double measured = 0.0;
    double bound = 0.0;
    Kind kind = Kind::AtMost;
    bool pass = true;
};

struct CheckReport {
    std::string suite;
    std::vector<CheckCase> cases;
    std::vector<std::string> notes;
    double wall_time = 0.0;  // seconds

    bool pass() const;
    /// The failing case with the largest measured/bound ratio, else the
    /// tightest passing one.
    const CheckCase* worst() const;
};

struct CheckOptions {
    /// Replaces every numeric bound (not runtime budgets) when set.
    std::optional<double> tol;
    /// Per-key bounds, e.g. {"orthonormality", 1e-9}.
    std::map<std::string, double> overrides;
    std::uint64_t seed = 12345;
    GridSpec phase_grid = default_phase_grid();
    int time_samples = 512;
};

/// eigen, susy, cs, identity, table1, table2, dynamics, electron, normalization.
const std::vector<std::string>& suite_names();

/// Runs one named suite.  Throws ValidationError for an unknown name.
CheckReport run_suite(const std::string& name, const CheckOptions& opts = {});
/// A name from suite_names() or "all".
std::vector<CheckReport> run_suites(const std::string& name, const CheckOptions& opts = {});

/// Parses "1e-6" (global) or "key=value" into opts.  Throws ValidationError.
void apply_tolerance_argument(CheckOptions& opts, const std::string& arg);

/// Human-readable report, one line per case plus notes.
std::string format_report(const CheckReport& report);
/// JSON with the cases in run order; timing omitted unless asked for.
std::string report_to_json(const CheckReport& report, bool include_timing = false);

}  // namespace ptcs
