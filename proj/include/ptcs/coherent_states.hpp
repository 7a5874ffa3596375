#pragma once

// Coherent states eta_{q,p}(x) = N(q) exp((W(q) + i p) x) sin^(nu+1)(x),
// the normalized eigenvectors of the lowering operator A_nu with eigenvalue
// W(q) + i p.  Dimensionless frame throughout.
//
// |eta| peaks at x = q, so every integral over x is written relative to that
// peak:  N^2 e^{2 W(q) x} sin^(2nu+2) x = exp(2a(x-q) + (2nu+2) log(sin x / sin q)) / I(q)
// with a = W(q) and I(q) the correspondingly scaled normalization integral.
// Nothing overflows even when |a| is in the millions.

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptcs/eigensystem.hpp"
#include "ptcs/susy_ladder.hpp"

namespace ptcs {

/// Raised when an integral fails to meet its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Receives non-fatal diagnostics (e.g. large truncation mass).  The default
/// handler writes to stderr.  Thread-safe.
void set_warning_handler(std::function<void(const std::string&)> handler);
void emit_warning(const std::string& message);

struct CoherentStateLabel {
    double q = std::numbers::pi / 2.0;
    double p = 0.0;
    double nu = 0.0;

    /// Throws ValidationError unless q is strictly inside (0, pi) and p, nu are valid.
    void validate() const;
    /// W_nu(q) + i p
    std::complex<double> eigenvalue() const;
};

struct NormalizationIntegral {
    double a = 0.0;                 // W_nu(q)
    double log_scaled_integral = 0.0;  // log I(q)
    double log_inverse_norm_sq = 0.0;  // log(1 / N^2)
    double error_estimate = 0.0;    // relative
    long evaluations = 0;
};

/// Breakpoints on [0, pi] graded geometrically away from the peak of |eta|^2
/// at x = q, whose width shrinks like sin q near the walls.
std::vector<double> peak_breakpoints(double nu, double q);

/// 1/N^2 = int_0^pi e^{2 a x} sin^{2nu+2} x dx by adaptive quadrature
/// (split at the peak x = q).  Throws NumericalError on non-convergence.
NormalizationIntegral cs_normalization_integral(double nu, double q);

/// N_nu(q) from quadrature.  This is the normative normalization.
double cs_normalization(double nu, double q);

/// log(1/N^2) from the |Gamma|^2 closed form
///   1/N^2 = pi e^{a pi} Gamma(2nu+3) / (2^{2nu+2} |Gamma(nu+2+ia)|^2),  a = -(nu+1) cot q.
double cs_log_inverse_norm_sq_closed_form(double nu, double q);

/// The normalization display as printed alongside the construction,
///   2^{nu+1} |Gamma(nu+2 - i(nu+1)cot q)| / (sqrt(L) sqrt(Gamma(2nu+3))) * exp(pi/2 (nu+1) cot q),
/// evaluated with L = pi.  Numerically this equals N itself, not 1/N^2.
double cs_normalization_printed_form(double nu, double q);

/// One coherent state with its normalization resolved.
class CoherentState {
public:
    explicit CoherentState(CoherentStateLabel label);
    CoherentState(CoherentStateLabel label, const NormalizationIntegral& norm);

    const CoherentStateLabel& label() const { return label_; }
    double normalization() const;
    double log_normalization() const { return -0.5 * norm_.log_inverse_norm_sq; }
    const NormalizationIntegral& normalization_integral() const { return norm_; }

    /// eta(x) on [0, pi]; zero at the walls.
    std::complex<double> value(double x) const;
    /// |eta(x)|, independent of p.
    double modulus(double x) const;
    /// Value and analytic derivatives at interior x.
    ComplexJet jet(double x) const;
    StateFunction as_function() const;

private:
    double log_envelope(double x) const;

    CoherentStateLabel label_;
    NormalizationIntegral norm_;
};

/// Unnormalized profile xi_z(x) = e^{z x} sin^{nu+1} x with z = W(q) + i p.
std::complex<double> cs_profile(double nu, double q, double p, double x);

/// N(q) e^{(W(q)+ip)x} sin^{nu+1} x.
std::complex<double> cs_wavefunction(double nu, double q, double p, double x);

/// Gauss-Legendre rule split at the peak q, sized to resolve phi_0..phi_nmax.
std::shared_ptr<const QuadratureRule> label_rule(double q, int nmax);

/// c_n = <phi_{n,basis_nu}|eta_{q,p}> for n <= nmax.  basis_nu defaults to the
/// CS parameter.  A truncation mass above 1e-6 emits a warning naming (q, p)
/// unless warn is false.
SpectralState cs_coefficients(const CoherentState& cs, int nmax, double basis_nu, bool warn = true);
SpectralState cs_coefficients(double nu, double q, double p, int nmax = default_nmax);

struct CsMoments {
    double mean_p = 0.0;
    double delta_p = 0.0;
    double mean_w = 0.0;
    double delta_w = 0.0;
    double mean_dw = 0.0;          // <W'(Q)>
    double saturation_defect = 0.0;  // delta_w * delta_p - <W'>/2
    double norm = 0.0;             // ||eta||^2 on the final rule
    int nodes = 0;
};

/// Moments of P and W(Q) by x-quadrature on |eta|^2 and eta'; the rule is
/// doubled until successive estimates agree to 1e-11 relative.
CsMoments cs_moments(double nu, double q, double p);

/// <phi_m|A_nu|eta> - z <phi_m|eta>, maximum modulus over m <= mmax.
double cs_eigenvector_defect(const CoherentState& cs, int mmax);

}  // namespace ptcs
