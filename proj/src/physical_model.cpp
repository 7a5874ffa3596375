#include "ptcs/physical_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ptcs {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
        std::ostringstream os;
        os << name << " must be finite and > 0 (got " << v << ")";
        throw ValidationError(os.str());
    }
}

}  // namespace

std::string to_string(UnitSystem u) { return u == UnitSystem::SI ? "SI" : "natural"; }

UnitSystem unit_system_from_string(const std::string& s) {
    if (s == "SI" || s == "si") return UnitSystem::SI;
    if (s == "natural") return UnitSystem::Natural;
    throw ValidationError("unknown unit system '" + s + "' (expected SI or natural)");
}

PhysicalConfig make_config(double L, double mass, double hbar, double nu, UnitSystem units) {
    require_positive(L, "L");
    require_positive(mass, "mass");
    require_positive(hbar, "hbar");
    if (!std::isfinite(nu) || nu < 0.0) {
        std::ostringstream os;
        os << "nu must be finite and >= 0 (got " << nu << ")";
        throw ValidationError(os.str());
    }
    PhysicalConfig c;
    c.L_ = L;
    c.m_ = mass;
    c.hbar_ = hbar;
    c.nu_ = nu;
    c.units_ = units;
    c.E0_ = hbar * hbar * pi * pi / (2.0 * mass * L * L);
    return c;
}

PhysicalConfig dimensionless_config(double nu) { return make_config(pi, 0.5, 1.0, nu); }

PhysicalConfig PhysicalConfig::with_nu(double nu) const { return make_config(L_, m_, hbar_, nu, units_); }

double PhysicalConfig::position_to_dimensionless(double q) const {
    if (!(q >= 0.0 && q <= L_)) {
        std::ostringstream os;
        os << "position " << q << " outside [0, L] with L = " << L_;
        throw ValidationError(os.str());
    }
    return pi * q / L_;
}
double PhysicalConfig::position_from_dimensionless(double xt) const { return xt * L_ / pi; }
double PhysicalConfig::momentum_unit() const { return pi * hbar_ / L_; }
double PhysicalConfig::momentum_to_dimensionless(double p) const { return p / momentum_unit(); }
double PhysicalConfig::momentum_from_dimensionless(double pt) const { return pt * momentum_unit(); }
double PhysicalConfig::energy_to_dimensionless(double E) const { return E / E0_; }
double PhysicalConfig::energy_from_dimensionless(double Et) const { return Et * E0_; }
double PhysicalConfig::time_to_dimensionless(double t) const { return t * E0_ / hbar_; }
double PhysicalConfig::time_from_dimensionless(double tt) const { return tt * hbar_ / E0_; }
double PhysicalConfig::wavefunction_scale() const { return std::sqrt(pi / L_); }

DimensionlessPoint to_dimensionless(const PhysicalConfig& cfg, double q, double p, double E, double t) {
    return {cfg.position_to_dimensionless(q), cfg.momentum_to_dimensionless(p),
            cfg.energy_to_dimensionless(E), cfg.time_to_dimensionless(t)};
}

PhysicalConfig config_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config JSON must be an object");

    UnitSystem units = UnitSystem::Natural;
    double mass = 1.0;
    double hbar = 1.0;
    double L = 1.0;
    if (j.contains("particle")) {
        const auto name = j.at("particle").get<std::string>();
        if (name != "electron") throw ValidationError("unknown particle '" + name + "'");
        units = UnitSystem::SI;
        mass = constants::electron_mass_si;
        hbar = constants::hbar_si;
        L = 20.0 * constants::angstrom_si;
    }
    if (j.contains("units")) {
        units = unit_system_from_string(j.at("units").get<std::string>());
        if (units == UnitSystem::SI && !j.contains("hbar")) hbar = constants::hbar_si;
    }
    try {
        if (j.contains("L")) L = j.at("L").get<double>();
        if (j.contains("mass")) mass = j.at("mass").get<double>();
        if (j.contains("hbar")) hbar = j.at("hbar").get<double>();
        const double nu = j.value("nu", 0.0);
        return make_config(L, mass, hbar, nu, units);
    } catch (const nlohmann::json::type_error& e) {
        throw ValidationError(std::string("config JSON type error: ") + e.what());
    }
}

PhysicalConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

void GridSpec::validate() const {
    if (q_count < 2 || p_count < 2) throw ValidationError("grid counts must be >= 2");
    if (!(p_max > 0.0) || !std::isfinite(p_max)) throw ValidationError("grid p_max must be > 0");
    if (!(q_margin > 0.0 && q_margin < pi / 4.0))
        throw ValidationError("grid q_margin must lie in (0, L/4)");
}

double GridSpec::q_at(int i) const { return q_margin + i * dq(); }
double GridSpec::p_at(int k) const { return -p_max + k * dp(); }
double GridSpec::dq() const { return (pi - 2.0 * q_margin) / (q_count - 1); }
double GridSpec::dp() const { return 2.0 * p_max / (p_count - 1); }

}  // namespace ptcs
