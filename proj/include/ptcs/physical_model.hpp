#pragma once

// Units, configuration and sampling grids.
//
// Every numerical routine in the library works in the dimensionless frame
//
//   xt = pi x / L           position, xt in [0, pi]
//   pt = p L / (pi hbar)    momentum
//   Et = E / E0             energy, E0 = hbar^2 pi^2 / (2 m L^2)
//   tt = t E0 / hbar        time
//
// In this frame hbar = 1, L = pi and m = 1/2, so E0 = 1 and the kinetic energy
// of momentum pt is simply pt^2.  PhysicalConfig converts to and from
// whatever unit system the user configured (SI or "natural").

#include <numbers>
#include <stdexcept>
#include <string>

namespace ptcs {

/// Raised for out-of-range or non-finite user input.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class UnitSystem { SI, Natural };

std::string to_string(UnitSystem u);
UnitSystem unit_system_from_string(const std::string& s);

namespace constants {
inline constexpr double hbar_si = 1.054571817e-34;        // J s
inline constexpr double electron_mass_si = 9.1093837015e-31;  // kg
inline constexpr double electron_volt_si = 1.602176634e-19;   // J
inline constexpr double angstrom_si = 1e-10;                  // m
}  // namespace constants

/// Well width, mass, hbar and potential strength.  Immutable once built.
class PhysicalConfig {
public:
    double L() const { return L_; }
    double mass() const { return m_; }
    double hbar() const { return hbar_; }
    double nu() const { return nu_; }
    /// hbar^2 pi^2 / (2 m L^2), the ground energy of the infinite square well.
    double E0() const { return E0_; }
    UnitSystem units() const { return units_; }

    /// Same physical parameters with a different potential strength.
    PhysicalConfig with_nu(double nu) const;

    // Dimensionless <-> configured units.
    double position_to_dimensionless(double q) const;
    double position_from_dimensionless(double xt) const;
    double momentum_to_dimensionless(double p) const;
    double momentum_from_dimensionless(double pt) const;
    double energy_to_dimensionless(double E) const;
    double energy_from_dimensionless(double Et) const;
    double time_to_dimensionless(double t) const;
    double time_from_dimensionless(double tt) const;

    /// Multiplies a dimensionless wavefunction value (normalized on [0, pi])
    /// to give its value normalized on [0, L].
    double wavefunction_scale() const;
    /// Momentum unit pi hbar / L.
    double momentum_unit() const;

    friend PhysicalConfig make_config(double L, double mass, double hbar, double nu, UnitSystem units);

private:
    PhysicalConfig() = default;
    double L_ = 0.0;
    double m_ = 0.0;
    double hbar_ = 0.0;
    double nu_ = 0.0;
    double E0_ = 0.0;
    UnitSystem units_ = UnitSystem::Natural;
};

/// Validates and builds a configuration.  Throws ValidationError on
/// non-finite values, non-positive L/mass/hbar, or negative nu.
PhysicalConfig make_config(double L, double mass, double hbar, double nu,
                           UnitSystem units = UnitSystem::Natural);

/// The frame used internally: L = pi, m = 1/2, hbar = 1 (so E0 = 1).
PhysicalConfig dimensionless_config(double nu);

/// Loads a JSON config document.  Keys: L, mass, hbar, nu, optional
/// units ("SI" | "natural") and particle ("electron").
PhysicalConfig config_from_json(const std::string& json_text);
PhysicalConfig load_config_file(const std::string& path);

/// All components of a phase-space/time point in the dimensionless frame.
struct DimensionlessPoint {
    double xt = 0.0;
    double pt = 0.0;
    double Et = 0.0;
    double tt = 0.0;
};

DimensionlessPoint to_dimensionless(const PhysicalConfig& cfg, double q, double p, double E, double t);

/// Rectangular (q, p) sampling in the dimensionless frame.  q runs over
/// [q_margin, pi - q_margin], p over [-p_max, p_max], endpoints included.
struct GridSpec {
    int q_count = 256;
    int p_count = 256;
    double p_max = 12.0;
    double q_margin = 1e-6 * std::numbers::pi;

    void validate() const;
    double q_at(int i) const;
    double p_at(int k) const;
    double dq() const;
    double dp() const;
};

}  // namespace ptcs
