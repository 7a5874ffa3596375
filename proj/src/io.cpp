#include "ptcs/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ptcs/physical_model.hpp"

namespace ptcs {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    return f;
}

void finish(std::ofstream& f, const std::string& path) {
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

void write_meta(std::ostream& out, const Metadata& meta) {
    for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& what) {
    throw IoError(name + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& field, const std::string& name, int line) {
    if (field.empty()) parse_fail(name, line, "empty field");
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) parse_fail(name, line, "not a number: '" + field + "'");
    return v;
}

// Reads a CSV whose header must equal `header`; returns numeric rows.
std::vector<std::vector<double>> read_table(std::istream& in, const std::string& name,
                                            const std::vector<std::string>& header, Metadata* meta) {
    std::string line;
    int lineno = 0;
    bool have_header = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (meta) {
                const auto eq = t.find('=');
                if (eq != std::string::npos) meta->emplace_back(trim(t.substr(1, eq - 1)), trim(t.substr(eq + 1)));
            }
            continue;
        }
        const auto fields = split_commas(t);
        if (!have_header) {
            if (fields != header) {
                std::string want;
                for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
                parse_fail(name, lineno, "expected header '" + want + "'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header.size())
            parse_fail(name, lineno,
                       "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        for (const auto& f : fields) row.push_back(parse_number(f, name, lineno));
        rows.push_back(std::move(row));
    }
    if (!have_header) parse_fail(name, lineno, "missing header");
    return rows;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_grid_csv(std::ostream& out, const PhaseSpaceDistribution& rho, const Metadata& meta) {
    if (rho.q.empty() || rho.p.empty() || rho.values.size() != rho.q.size() * rho.p.size())
        throw ValidationError("cannot write an empty or inconsistent grid");
    write_meta(out, meta);
    out << "q,p,rho\n";
    for (std::size_t i = 0; i < rho.q.size(); ++i)
        for (std::size_t k = 0; k < rho.p.size(); ++k)
            out << format_double(rho.q[i]) << ',' << format_double(rho.p[k]) << ',' << format_double(rho.at(i, k))
                << '\n';
}

void write_grid_csv(const std::string& path, const PhaseSpaceDistribution& rho, const Metadata& meta) {
    auto f = open_out(path);
    write_grid_csv(f, rho, meta);
    finish(f, path);
}

PhaseSpaceDistribution read_grid_csv(std::istream& in, const std::string& name, Metadata* meta) {
    const auto rows = read_table(in, name, {"q", "p", "rho"}, meta);
    if (rows.empty()) throw IoError(name + ": grid has no rows");
    PhaseSpaceDistribution d;
    for (const auto& r : rows) {
        if (d.q.empty() || r[0] != d.q.back()) d.q.push_back(r[0]);
        if (d.q.size() == 1) d.p.push_back(r[1]);
        d.values.push_back(r[2]);
    }
    if (d.values.size() != d.q.size() * d.p.size())
        throw IoError(name + ": rows do not form a rectangular q-by-p grid");
    for (std::size_t i = 0; i < d.q.size(); ++i)
        for (std::size_t k = 0; k < d.p.size(); ++k)
            if (rows[i * d.p.size() + k][1] != d.p[k])
                throw IoError(name + ": p values differ between q blocks (row " +
                              std::to_string(i * d.p.size() + k + 1) + ")");
    d.grid.q_count = static_cast<int>(d.q.size());
    d.grid.p_count = static_cast<int>(d.p.size());
    d.grid.p_max = std::max(std::abs(d.p.front()), std::abs(d.p.back()));
    d.grid.q_margin = d.q.front();
    return d;
}

PhaseSpaceDistribution read_grid_csv(const std::string& path, Metadata* meta) {
    auto f = open_in(path);
    return read_grid_csv(f, path, meta);
}

void write_trajectory_csv(const std::string& path, const std::vector<PhasePoint>& points, const Metadata& meta) {
    auto f = open_out(path);
    write_meta(f, meta);
    f << "q,p\n";
    for (const auto& pt : points) f << format_double(pt.q) << ',' << format_double(pt.p) << '\n';
    finish(f, path);
}

std::vector<PhasePoint> read_trajectory_csv(const std::string& path) {
    auto f = open_in(path);
    std::vector<PhasePoint> out;
    for (const auto& r : read_table(f, path, {"q", "p"}, nullptr)) out.push_back({r[0], r[1]});
    return out;
}

void write_wavefunction_csv(const std::string& path, const std::vector<double>& x,
                            const std::vector<std::complex<double>>& values, const Metadata& meta) {
    if (x.size() != values.size()) throw ValidationError("wavefunction samples and positions differ in length");
    auto f = open_out(path);
    write_meta(f, meta);
    f << "x,re,im,abs2\n";
    for (std::size_t j = 0; j < x.size(); ++j)
        f << format_double(x[j]) << ',' << format_double(values[j].real()) << ',' << format_double(values[j].imag())
          << ',' << format_double(std::norm(values[j])) << '\n';
    finish(f, path);
}

void write_coefficients_csv(const std::string& path, const SpectralState& state, const Metadata& meta) {
    auto f = open_out(path);
    write_meta(f, meta);
    f << "n,re,im,abs2\n";
    for (int n = 0; n <= state.nmax(); ++n) {
        const auto c = state.coeffs[n];
        f << n << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << ','
          << format_double(std::norm(c)) << '\n';
    }
    finish(f, path);
}

void write_eigenfunctions_csv(const std::string& path, const std::vector<double>& x, double nu, int nmax,
                              double value_scale, const Metadata& meta) {
    auto f = open_out(path);
    write_meta(f, meta);
    f << "x";
    for (int n = 0; n <= nmax; ++n) f << ",phi_" << n;
    f << '\n';
    std::vector<double> phi(nmax + 1);
    const auto norms = norm_constants(nmax, nu);
    for (double xv : x) {
        eigenfunction_values(nmax, nu, xv, phi, norms);
        f << format_double(xv);
        for (double v : phi) f << ',' << format_double(v * value_scale);
        f << '\n';
    }
    finish(f, path);
}

void write_eigen_table_csv(const std::string& path, double nu, int nmax, double energy_scale, double norm_scale,
                           const Metadata& meta) {
    auto f = open_out(path);
    write_meta(f, meta);
    f << "n,E_n,Z_n\n";
    for (int n = 0; n <= nmax; ++n)
        f << n << ',' << format_double(energy(n, nu) * energy_scale) << ','
          << format_double(norm_constant(n, nu) * norm_scale) << '\n';
    finish(f, path);
}

std::string matrix_to_json(const Eigen::MatrixXcd& m) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    nlohmann::json j;
    j["nmax"] = m.rows() - 1;
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j.dump();
}

Eigen::MatrixXcd matrix_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("matrix JSON: ") + e.what());
    }
    if (!j.contains("nmax") || !j.contains("re") || !j.contains("im"))
        throw IoError("matrix JSON needs keys nmax, re, im");
    const int n = j["nmax"].get<int>() + 1;
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = {j["re"].at(r).at(c).get<double>(), j["im"].at(r).at(c).get<double>()};
    return m;
}

void write_matrix_json(const std::string& path, const Eigen::MatrixXcd& m) {
    auto f = open_out(path);
    f << matrix_to_json(m) << '\n';
    finish(f, path);
}

std::array<std::uint8_t, 3> color_ramp(double t) {
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    // Piecewise-linear stops: blue, cyan, green, yellow, red.
    static constexpr double stops[5][3] = {{0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0}};
    const double s = t * 4.0;
    const int i = std::min(3, static_cast<int>(s));
    const double f = s - i;
    std::array<std::uint8_t, 3> c{};
    for (int k = 0; k < 3; ++k)
        c[k] = static_cast<std::uint8_t>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
    return c;
}

namespace {

// 5x7 glyphs, one row per byte, bit 4 = leftmost column.
const std::map<char, std::array<std::uint8_t, 7>>& font() {
    static const std::map<char, std::array<std::uint8_t, 7>> f = {
        {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
        {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
        {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
        {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
        {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
        {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}}, {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
        {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}}, {'e', {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E}},
        {'q', {0x00, 0x00, 0x0F, 0x11, 0x0F, 0x01, 0x01}}, {'p', {0x00, 0x00, 0x1E, 0x11, 0x1E, 0x10, 0x10}},
        {'[', {0x0E, 0x08, 0x08, 0x08, 0x08, 0x08, 0x0E}}, {']', {0x0E, 0x02, 0x02, 0x02, 0x02, 0x02, 0x0E}},
        {'m', {0x00, 0x00, 0x1A, 0x15, 0x15, 0x11, 0x11}}, {'k', {0x10, 0x10, 0x12, 0x14, 0x18, 0x14, 0x12}},
        {'g', {0x00, 0x0F, 0x11, 0x11, 0x0F, 0x01, 0x0E}}, {'/', {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x00}},
        {'s', {0x00, 0x00, 0x0E, 0x10, 0x0E, 0x01, 0x1E}}, {'x', {0x00, 0x00, 0x11, 0x0A, 0x04, 0x0A, 0x11}},
        {'r', {0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10}}, {'h', {0x10, 0x10, 0x16, 0x19, 0x11, 0x11, 0x11}},
        {'o', {0x00, 0x00, 0x0E, 0x11, 0x11, 0x11, 0x0E}}, {' ', {0, 0, 0, 0, 0, 0, 0}},
    };
    return f;
}

struct Canvas {
    int w, h;
    std::vector<std::uint8_t> rgb;

    Canvas(int w_, int h_) : w(w_), h(h_), rgb(static_cast<std::size_t>(w_) * h_ * 3, 255) {}

    void set(int x, int y, std::array<std::uint8_t, 3> c) {
        if (x < 0 || y < 0 || x >= w || y >= h) return;
        auto* px = &rgb[(static_cast<std::size_t>(y) * w + x) * 3];
        px[0] = c[0];
        px[1] = c[1];
        px[2] = c[2];
    }

    void disk(double cx, double cy, double r, std::array<std::uint8_t, 3> c) {
        for (int y = static_cast<int>(std::floor(cy - r)); y <= static_cast<int>(std::ceil(cy + r)); ++y)
            for (int x = static_cast<int>(std::floor(cx - r)); x <= static_cast<int>(std::ceil(cx + r)); ++x)
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) set(x, y, c);
    }

    void text(int x, int y, const std::string& s, int scale, std::array<std::uint8_t, 3> c) {
        for (char ch : s) {
            const auto it = font().find(ch);
            if (it != font().end())
                for (int r = 0; r < 7; ++r)
                    for (int col = 0; col < 5; ++col)
                        if (it->second[r] & (0x10 >> col))
                            for (int dy = 0; dy < scale; ++dy)
                                for (int dx = 0; dx < scale; ++dx) set(x + col * scale + dx, y + r * scale + dy, c);
            x += 6 * scale;
        }
    }

    static int text_width(const std::string& s, int scale) { return static_cast<int>(s.size()) * 6 * scale; }
};

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void write_png(const std::string& path, const Canvas& c) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot open '" + path + "' for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng initialization failed for '" + path + "'");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng failed while writing '" + path + "'");
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, c.w, c.h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < c.h; ++y)
        png_write_row(png, const_cast<png_bytep>(&c.rgb[static_cast<std::size_t>(y) * c.w * 3]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fclose(fp) != 0) throw IoError("write to '" + path + "' failed");
}

}  // namespace

void render_heatmap(const std::string& png_path, const PhaseSpaceDistribution& rho,
                    const std::vector<PhasePoint>* overlay, const RenderOptions& opts) {
    if (rho.q.empty() || rho.p.empty() || rho.values.size() != rho.q.size() * rho.p.size())
        throw ValidationError("cannot render an empty or inconsistent grid");
    if (opts.width < 16 || opts.height < 16) throw ValidationError("render size too small");
    const int left = 140, right = 60, top = 20, bottom = 70;
    Canvas cv(left + opts.width + right, top + opts.height + bottom);
    const auto [lo_it, hi_it] = std::minmax_element(rho.values.begin(), rho.values.end());
    const double lo = *lo_it, hi = *hi_it;
    const bool degenerate = !(hi > lo);
    const double top_value = std::max(hi, 0.0);

    const double q0 = rho.q.front(), q1 = rho.q.back();
    const double p0 = rho.p.front(), p1 = rho.p.back();
    auto nearest = [](const std::vector<double>& axis, double v) {
        if (axis.size() == 1) return std::size_t{0};
        const double t = (v - axis.front()) / (axis.back() - axis.front()) * static_cast<double>(axis.size() - 1);
        return static_cast<std::size_t>(std::clamp<double>(std::lround(t), 0.0, static_cast<double>(axis.size() - 1)));
    };
    for (int py = 0; py < opts.height; ++py) {
        const double p = p1 - (py + 0.5) / opts.height * (p1 - p0);
        const std::size_t k = nearest(rho.p, p);
        for (int px = 0; px < opts.width; ++px) {
            const double q = q0 + (px + 0.5) / opts.width * (q1 - q0);
            const double v = rho.at(nearest(rho.q, q), k);
            const double t = degenerate ? 0.5 : (top_value > 0.0 ? v / top_value : 0.5);
            cv.set(left + px, top + py, color_ramp(t));
        }
    }

    const std::array<std::uint8_t, 3> black{0, 0, 0};
    if (overlay && overlay->size() >= 2 && q1 > q0 && p1 > p0) {
        auto to_px = [&](const PhasePoint& pt) {
            return std::pair<double, double>{left + (pt.q - q0) / (q1 - q0) * opts.width,
                                             top + (p1 - pt.p) / (p1 - p0) * opts.height};
        };
        const double r = 0.5 * opts.line_width;
        for (std::size_t s = 0; s + 1 < overlay->size(); ++s) {
            const auto [xa, ya] = to_px((*overlay)[s]);
            const auto [xb, yb] = to_px((*overlay)[s + 1]);
            const int steps = std::max(1, static_cast<int>(std::ceil(std::hypot(xb - xa, yb - ya))));
            for (int i = 0; i <= steps; ++i) {
                const double f = static_cast<double>(i) / steps;
                const double x = xa + f * (xb - xa), y = ya + f * (yb - ya);
                if (x >= left && x < left + opts.width && y >= top && y < top + opts.height) cv.disk(x, y, r, black);
            }
        }
    }

    // Frame, colour bar, ticks and labels.
    for (int x = left - 1; x <= left + opts.width; ++x) {
        cv.set(x, top - 1, black);
        cv.set(x, top + opts.height, black);
    }
    for (int y = top - 1; y <= top + opts.height; ++y) {
        cv.set(left - 1, y, black);
        cv.set(left + opts.width, y, black);
    }
    const int bar_x = left + opts.width + 20;
    for (int py = 0; py < opts.height; ++py)
        for (int dx = 0; dx < 16; ++dx) cv.set(bar_x + dx, top + py, color_ramp(1.0 - (py + 0.5) / opts.height));
    cv.text(bar_x + 5, top + opts.height + 4, "0", 1, black);
    const std::string hs = tick(top_value);
    cv.text(bar_x + 8 - Canvas::text_width(hs, 1) / 2, top - 10, hs, 1, black);

    const int scale = 2;
    cv.text(left, top + opts.height + 8, tick(q0), scale, black);
    const std::string q1s = tick(q1);
    cv.text(left + opts.width - Canvas::text_width(q1s, scale), top + opts.height + 8, q1s, scale, black);
    cv.text(left + (opts.width - Canvas::text_width(opts.q_label, scale)) / 2, top + opts.height + 34, opts.q_label,
            scale, black);
    const std::string p1s = tick(p1), p0s = tick(p0);
    cv.text(left - 8 - Canvas::text_width(p1s, scale), top, p1s, scale, black);
    cv.text(left - 8 - Canvas::text_width(p0s, scale), top + opts.height - 14, p0s, scale, black);
    cv.text(std::max(0, left - 8 - Canvas::text_width(opts.p_label, scale)), top + opts.height / 2 - 7, opts.p_label,
            scale, black);
    write_png(png_path, cv);
}

void render_heatmap_files(const std::string& grid_csv, const std::string& overlay_csv, const std::string& png_path) {
    Metadata meta;
    const auto rho = read_grid_csv(grid_csv, &meta);
    RenderOptions opts;
    for (const auto& [k, v] : meta) {
        if (k == "units" && v == "SI") {
            opts.q_label = "q [m]";
            opts.p_label = "p [kg m/s]";
        }
    }
    std::vector<PhasePoint> traj;
    if (!overlay_csv.empty()) traj = read_trajectory_csv(overlay_csv);
    render_heatmap(png_path, rho, overlay_csv.empty() ? nullptr : &traj, opts);
}

}  // namespace ptcs
