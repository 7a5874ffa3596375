#include "ptcs/coherent_states.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

#include "ptcs/physical_model.hpp"
#include "ptcs/special_functions.hpp"

namespace ptcs {

namespace {

constexpr double pi = std::numbers::pi;

std::mutex& warning_mutex() {
    static std::mutex mu;
    return mu;
}

std::function<void(const std::string&)>& warning_handler() {
    static std::function<void(const std::string&)> h = [](const std::string& m) {
        std::cerr << "warning: " << m << "\n";
    };
    return h;
}

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
    std::lock_guard lock(warning_mutex());
    warning_handler() = std::move(handler);
}

void emit_warning(const std::string& message) {
    std::lock_guard lock(warning_mutex());
    if (warning_handler()) warning_handler()(message);
}

void CoherentStateLabel::validate() const {
    if (!(q > 0.0 && q < pi)) {
        std::ostringstream os;
        os << "coherent-state label q = " << q << " must lie strictly inside (0, pi)";
        throw ValidationError(os.str());
    }
    if (!std::isfinite(p)) throw ValidationError("coherent-state label p must be finite");
    if (!std::isfinite(nu) || nu < 0.0) throw ValidationError("coherent-state nu must be >= 0");
    if (!std::isfinite(superpotential(nu, q))) throw ValidationError("W(q) is not finite at this label");
}

std::complex<double> CoherentStateLabel::eigenvalue() const { return {superpotential(nu, q), p}; }

std::vector<double> peak_breakpoints(double nu, double q) {
    const double h = 0.25 * std::sin(q) / std::sqrt(nu + 1.0);
    std::vector<double> left, right;
    for (double d = h; q - d > 0.0; d *= 2.0) left.push_back(q - d);
    for (double d = h; q + d < pi; d *= 2.0) right.push_back(q + d);
    std::vector<double> out{0.0};
    out.insert(out.end(), left.rbegin(), left.rend());
    out.push_back(q);
    out.insert(out.end(), right.begin(), right.end());
    out.push_back(pi);
    return out;
}

NormalizationIntegral cs_normalization_integral(double nu, double q) {
    CoherentStateLabel{q, 0.0, nu}.validate();
    NormalizationIntegral out;
    out.a = superpotential(nu, q);
    const double k = 2.0 * nu + 2.0;
    const double log_sq = std::log(sin_from_wall(q));
    // I(q) = I(pi - q): integrate on the side where q is represented exactly.
    const double qs = q <= 0.5 * pi ? q : pi - q;
    const double as = q <= 0.5 * pi ? out.a : -out.a;  // W(pi - q) = -W(q)
    auto integrand = [&](double x) {
        const double s = sin_from_wall(x);
        if (!(s > 0.0)) return 0.0;
        return std::exp(2.0 * as * (x - qs) + k * (std::log(s) - log_sq));
    };
    AdaptiveOptions opts;
    opts.rel_tol = 1e-14;
    const auto r = integrate_adaptive(integrand, peak_breakpoints(nu, qs), opts);
    if (!r.converged || !(r.value > 0.0)) {
        std::ostringstream os;
        os << "normalization integral did not converge at nu = " << nu << ", q = " << q << " (estimate " << r.value
           << ", error " << r.error_estimate << ", " << r.evaluations << " evaluations)";
        throw NumericalError(os.str());
    }
    out.log_scaled_integral = std::log(r.value);
    out.log_inverse_norm_sq = 2.0 * out.a * q + k * log_sq + out.log_scaled_integral;
    out.error_estimate = r.error_estimate / r.value;
    out.evaluations = r.evaluations;
    return out;
}

double cs_normalization(double nu, double q) {
    return std::exp(-0.5 * cs_normalization_integral(nu, q).log_inverse_norm_sq);
}

double cs_log_inverse_norm_sq_closed_form(double nu, double q) {
    CoherentStateLabel{q, 0.0, nu}.validate();
    const double a = -(nu + 1.0) / std::tan(q);
    const double lg = log_gamma_complex({nu + 2.0, a}).real();
    return std::log(pi) + a * pi + std::lgamma(2.0 * nu + 3.0) - (2.0 * nu + 2.0) * std::log(2.0) - 2.0 * lg;
}

double cs_normalization_printed_form(double nu, double q) {
    CoherentStateLabel{q, 0.0, nu}.validate();
    const double cot = 1.0 / std::tan(q);
    const double log_abs_gamma = log_gamma_complex({nu + 2.0, -(nu + 1.0) * cot}).real();
    const double log_val = (nu + 1.0) * std::log(2.0) + log_abs_gamma - 0.5 * std::log(pi) -
                           0.5 * std::lgamma(2.0 * nu + 3.0) + 0.5 * pi * (nu + 1.0) * cot;
    return std::exp(log_val);
}

CoherentState::CoherentState(CoherentStateLabel label) : label_(label) {
    label_.validate();
    norm_ = cs_normalization_integral(label_.nu, label_.q);
}

CoherentState::CoherentState(CoherentStateLabel label, const NormalizationIntegral& norm)
    : label_(label), norm_(norm) {
    label_.validate();
}

double CoherentState::normalization() const { return std::exp(log_normalization()); }

double CoherentState::log_envelope(double x) const {
    const double s = sin_from_wall(x);
    return norm_.a * (x - label_.q) + (label_.nu + 1.0) * (std::log(s) - std::log(sin_from_wall(label_.q))) -
           0.5 * norm_.log_scaled_integral;
}

double CoherentState::modulus(double x) const {
    if (!(x >= 0.0 && x <= pi)) throw ValidationError("coherent state evaluated outside [0, pi]");
    if (!(sin_from_wall(x) > 0.0)) return 0.0;
    return std::exp(log_envelope(x));
}

std::complex<double> CoherentState::value(double x) const {
    const double m = modulus(x);
    if (m == 0.0) return {0.0, 0.0};
    return std::polar(m, label_.p * x);
}

ComplexJet CoherentState::jet(double x) const {
    if (!(x > 0.0 && x < pi)) throw ValidationError("coherent-state derivatives requested at a wall");
    const auto v = value(x);
    const double s = std::sin(x);
    const std::complex<double> g = label_.eigenvalue() + (label_.nu + 1.0) * std::cos(x) / s;
    return {v, g * v, (g * g - (label_.nu + 1.0) / (s * s)) * v};
}

StateFunction CoherentState::as_function() const {
    return [cs = *this](double x) { return cs.jet(x); };
}

std::complex<double> cs_profile(double nu, double q, double p, double x) {
    const CoherentStateLabel label{q, p, nu};
    label.validate();
    if (!(x >= 0.0 && x <= pi)) throw ValidationError("cs_profile: x outside [0, pi]");
    return std::exp(label.eigenvalue() * x) * std::pow(std::sin(x), nu + 1.0);
}

std::complex<double> cs_wavefunction(double nu, double q, double p, double x) {
    return CoherentState({q, p, nu}).value(x);
}

std::shared_ptr<const QuadratureRule> label_rule(double q, int nmax) {
    const int total = std::max(400, 2 * nmax + 256);
    const int left = std::max(48, static_cast<int>(std::ceil(total * q / pi)));
    const int right = std::max(48, total - left);
    auto r = std::make_shared<QuadratureRule>(gauss_legendre(left, 0.0, q));
    const auto rr = gauss_legendre(right, q, pi);
    r->b = pi;
    r->nodes.insert(r->nodes.end(), rr.nodes.begin(), rr.nodes.end());
    r->weights.insert(r->weights.end(), rr.weights.begin(), rr.weights.end());
    return r;
}

SpectralState cs_coefficients(const CoherentState& cs, int nmax, double basis_nu, bool warn) {
    if (nmax < 0) throw ValidationError("nmax must be >= 0");
    const auto rule = label_rule(cs.label().q, nmax);
    SpectralState out;
    out.nu = basis_nu;
    out.coeffs.assign(nmax + 1, {0.0, 0.0});
    std::vector<double> phi(nmax + 1);
    const auto norms = norm_constants(nmax, basis_nu);
    for (std::size_t j = 0; j < rule->size(); ++j) {
        const double x = rule->nodes[j];
        const auto eta = rule->weights[j] * cs.value(x);
        eigenfunction_values(nmax, basis_nu, x, phi, norms);
        for (int n = 0; n <= nmax; ++n) out.coeffs[n] += phi[n] * eta;
    }
    out.truncation_mass = 1.0 - out.norm_squared();
    if (warn && out.truncation_mass > 1e-6) {
        std::ostringstream os;
        os << "coherent state (q = " << cs.label().q << ", p = " << cs.label().p << ", nu = " << cs.label().nu
           << ") has truncation mass " << out.truncation_mass << " at nmax = " << nmax;
        emit_warning(os.str());
    }
    return out;
}

SpectralState cs_coefficients(double nu, double q, double p, int nmax) {
    return cs_coefficients(CoherentState({q, p, nu}), nmax, nu);
}

namespace {

CsMoments moments_on_rule(const CoherentState& cs, const QuadratureRule& rule) {
    const double nu = cs.label().nu;
    double norm = 0.0;
    double mean_p = 0.0;
    double mean_p2 = 0.0;
    double mean_w = 0.0;
    double mean_dw = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double x = rule.nodes[j];
        const auto J = cs.jet(x);
        const double w = rule.weights[j];
        const double rho = std::norm(J.value);
        norm += w * rho;
        mean_p += w * (std::conj(J.value) * std::complex<double>(0.0, -1.0) * J.d1).real();
        mean_p2 += w * std::norm(J.d1);
        mean_w += w * superpotential(nu, x) * rho;
        mean_dw += w * superpotential_derivative(nu, x) * rho;
    }
    double var_w = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double x = rule.nodes[j];
        const double d = superpotential(nu, x) - mean_w;
        var_w += rule.weights[j] * d * d * std::norm(cs.value(x));
    }
    CsMoments m;
    m.norm = norm;
    m.mean_p = mean_p;
    m.delta_p = std::sqrt(std::max(0.0, mean_p2 - mean_p * mean_p));
    m.mean_w = mean_w;
    m.delta_w = std::sqrt(var_w);
    m.mean_dw = mean_dw;
    m.saturation_defect = m.delta_w * m.delta_p - 0.5 * m.mean_dw;
    m.nodes = static_cast<int>(rule.size());
    return m;
}

}  // namespace

CsMoments cs_moments(double nu, double q, double p) {
    const CoherentState cs({q, p, nu});
    auto rule_for = [&](int per_panel) {
        const double bps[] = {0.0, q, pi};
        return composite_gauss_legendre(bps, per_panel);
    };
    int per_panel = 96;
    CsMoments prev = moments_on_rule(cs, rule_for(per_panel));
    for (int it = 0; it < 7; ++it) {
        per_panel *= 2;
        const CsMoments cur = moments_on_rule(cs, rule_for(per_panel));
        const auto close = [](double u, double v, double scale) { return std::abs(u - v) <= 1e-11 * scale; };
        const double pscale = std::max({1.0, std::abs(cur.mean_p), cur.delta_p});
        if (close(cur.mean_p, prev.mean_p, pscale) && close(cur.delta_p, prev.delta_p, pscale) &&
            close(cur.mean_w, prev.mean_w, std::max(1.0, std::abs(cur.mean_w))) &&
            close(cur.mean_dw, prev.mean_dw, cur.mean_dw))
            return cur;
        prev = cur;
    }
    std::ostringstream os;
    os << "coherent-state moments did not converge at nu = " << nu << ", q = " << q << ", p = " << p;
    throw NumericalError(os.str());
}

double cs_eigenvector_defect(const CoherentState& cs, int mmax) {
    const auto rule = label_rule(cs.label().q, mmax);
    const auto a_eta = apply_lowering(cs.as_function(), cs.label().nu);
    const auto z = cs.label().eigenvalue();
    std::vector<std::complex<double>> lhs(mmax + 1), rhs(mmax + 1);
    std::vector<double> phi(mmax + 1);
    for (std::size_t j = 0; j < rule->size(); ++j) {
        const double x = rule->nodes[j];
        eigenfunction_values(mmax, cs.label().nu, x, phi);
        const auto ae = a_eta(x).value;
        const auto e = cs.value(x);
        for (int m = 0; m <= mmax; ++m) {
            lhs[m] += rule->weights[j] * phi[m] * ae;
            rhs[m] += rule->weights[j] * phi[m] * e;
        }
    }
    double worst = 0.0;
    for (int m = 0; m <= mmax; ++m) worst = std::max(worst, std::abs(lhs[m] - z * rhs[m]));
    return worst;
}

}  // namespace ptcs
