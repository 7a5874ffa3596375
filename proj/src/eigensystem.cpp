#include "ptcs/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ptcs/physical_model.hpp"

namespace ptcs {

namespace {

constexpr double pi = std::numbers::pi;

void check_n_nu(int n, double nu) {
    if (n < 0) throw ValidationError("quantum number n must be >= 0");
    if (!std::isfinite(nu) || nu < 0.0) throw ValidationError("nu must be finite and >= 0");
}

void check_x(double x) {
    if (!(x >= 0.0 && x <= pi)) {
        std::ostringstream os;
        os << "position " << x << " outside the well [0, pi]";
        throw ValidationError(os.str());
    }
}

}  // namespace

double energy(int n, double nu) {
    check_n_nu(n, nu);
    const double k = n + nu + 1.0;
    return k * k;
}

double log_norm_constant(int n, double nu) {
    check_n_nu(n, nu);
    return std::lgamma(nu + 1.0) + (nu + 0.5) * std::log(2.0) - 0.5 * std::log(pi) +
           0.5 * (std::lgamma(n + 1.0) + std::log(n + nu + 1.0) - std::lgamma(n + 2.0 * nu + 2.0));
}

double norm_constant(int n, double nu) { return std::exp(log_norm_constant(n, nu)); }

EigenState eigenstate(int n, double nu) { return {n, nu, energy(n, nu), norm_constant(n, nu)}; }

double eigenfunction(int n, double nu, double x) {
    check_n_nu(n, nu);
    check_x(x);
    const double s = std::sin(x);
    if (s <= 0.0) return 0.0;
    const double lambda = nu + 1.0;
    return norm_constant(n, nu) * std::pow(s, lambda) * gegenbauer(n, lambda, std::cos(x));
}

void eigenfunction_jets(int nmax, double nu, double x, std::vector<Jet<double>>& out) {
    check_n_nu(nmax, nu);
    check_x(x);
    out.assign(nmax + 1, {});
    const double s = std::sin(x);
    const double c = std::cos(x);
    if (!(s > 0.0)) throw ValidationError("eigenfunction derivatives requested at a wall");
    const double lambda = nu + 1.0;

    // f = sin^lambda, G_n = C_n^lambda(cos x)
    const double f = std::pow(s, lambda);
    const double f1 = lambda * std::pow(s, lambda - 1.0) * c;
    double f2 = -lambda * f;
    if (lambda != 1.0) f2 += lambda * (lambda - 1.0) * std::pow(s, lambda - 2.0) * c * c;

    std::vector<double> g0(nmax + 1), g1(nmax + 1), g2(nmax + 1);
    gegenbauer_sequence(nmax, lambda, c, g0);
    gegenbauer_sequence(nmax, lambda + 1.0, c, g1);
    gegenbauer_sequence(nmax, lambda + 2.0, c, g2);

    for (int n = 0; n <= nmax; ++n) {
        const double z = norm_constant(n, nu);
        const double dC = n >= 1 ? 2.0 * lambda * g1[n - 1] : 0.0;
        const double ddC = n >= 2 ? 4.0 * lambda * (lambda + 1.0) * g2[n - 2] : 0.0;
        const double G = g0[n];
        const double G1 = -s * dC;
        const double G2 = -c * dC + s * s * ddC;
        out[n].value = z * f * G;
        out[n].d1 = z * (f1 * G + f * G1);
        out[n].d2 = z * (f2 * G + 2.0 * f1 * G1 + f * G2);
    }
}

Jet<double> eigenfunction_jet(int n, double nu, double x) {
    std::vector<Jet<double>> jets;
    eigenfunction_jets(n, nu, x, jets);
    return jets[n];
}

std::vector<double> norm_constants(int nmax, double nu) {
    check_n_nu(nmax, nu);
    std::vector<double> z(nmax + 1);
    for (int n = 0; n <= nmax; ++n) z[n] = norm_constant(n, nu);
    return z;
}

void eigenfunction_values(int nmax, double nu, double x, std::span<double> out, std::span<const double> norms) {
    check_n_nu(nmax, nu);
    check_x(x);
    if (out.size() < static_cast<std::size_t>(nmax) + 1) throw ValidationError("eigenfunction_values: span too small");
    const double lambda = nu + 1.0;
    const double s = std::sin(x);
    if (!(s > 0.0)) {
        std::fill(out.begin(), out.begin() + nmax + 1, 0.0);
        return;
    }
    gegenbauer_sequence(nmax, lambda, std::cos(x), out);
    const double f = std::pow(s, lambda);
    if (norms.size() > static_cast<std::size_t>(nmax)) {
        for (int n = 0; n <= nmax; ++n) out[n] *= norms[n] * f;
    } else {
        for (int n = 0; n <= nmax; ++n) out[n] *= norm_constant(n, nu) * f;
    }
}

EigenBasisTable tabulate_basis(double nu, int nmax, std::shared_ptr<const QuadratureRule> rule,
                               int derivative_order) {
    check_n_nu(nmax, nu);
    EigenBasisTable t;
    t.nu = nu;
    t.nmax = nmax;
    t.rule = std::move(rule);
    const auto m = static_cast<Eigen::Index>(t.rule->size());
    t.values.resize(nmax + 1, m);
    if (derivative_order <= 0) {
        const auto z = norm_constants(nmax, nu);
        std::vector<double> col(nmax + 1);
        const double lambda = nu + 1.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            const double x = t.rule->nodes[j];
            const double f = std::pow(std::sin(x), lambda);
            gegenbauer_sequence(nmax, lambda, std::cos(x), col);
            for (int n = 0; n <= nmax; ++n) t.values(n, j) = z[n] * f * col[n];
        }
        return t;
    }
    t.d1.resize(nmax + 1, m);
    if (derivative_order >= 2) t.d2.resize(nmax + 1, m);
    std::vector<Jet<double>> jets;
    for (Eigen::Index j = 0; j < m; ++j) {
        eigenfunction_jets(nmax, nu, t.rule->nodes[j], jets);
        for (int n = 0; n <= nmax; ++n) {
            t.values(n, j) = jets[n].value;
            t.d1(n, j) = jets[n].d1;
            if (derivative_order >= 2) t.d2(n, j) = jets[n].d2;
        }
    }
    return t;
}

double SpectralState::norm_squared() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
}

SpectralState SpectralState::normalized() const {
    SpectralState out = *this;
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw ValidationError("cannot normalize a zero state");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& c : out.coeffs) c *= inv;
    out.truncation_mass = 0.0;
    return out;
}

std::complex<double> overlap(const SampledState& f, const SampledState& g) {
    if (!f.rule || !g.rule) throw ValidationError("overlap: state without a quadrature rule");
    if (f.rule != g.rule && (f.rule->nodes != g.rule->nodes || f.rule->weights != g.rule->weights))
        throw ValidationError("overlap: states sampled on different quadrature rules");
    if (f.values.size() != f.rule->size() || g.values.size() != g.rule->size())
        throw ValidationError("overlap: sample count does not match the rule");
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < f.values.size(); ++i) s += f.rule->weights[i] * std::conj(f.values[i]) * g.values[i];
    return s;
}

std::complex<double> overlap(const SpectralState& f, const SpectralState& g) {
    if (f.nu != g.nu) throw ValidationError("overlap: spectral states expanded in different bases (nu differs)");
    if (f.coeffs.size() != g.coeffs.size()) throw ValidationError("overlap: spectral states truncated differently");
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) s += std::conj(f.coeffs[i]) * g.coeffs[i];
    return s;
}

SampledState sample_eigenfunction(int n, double nu, std::shared_ptr<const QuadratureRule> rule) {
    SampledState s{std::move(rule), {}};
    s.values.reserve(s.rule->size());
    for (double x : s.rule->nodes) s.values.emplace_back(eigenfunction(n, nu, x), 0.0);
    return s;
}

SampledState sample_state(const SpectralState& st, std::shared_ptr<const QuadratureRule> rule) {
    const auto table = tabulate_basis(st.nu, st.nmax(), rule, 0);
    SampledState s{std::move(rule), {}};
    s.values.assign(s.rule->size(), {0.0, 0.0});
    for (std::size_t j = 0; j < s.values.size(); ++j)
        for (int n = 0; n <= st.nmax(); ++n) s.values[j] += st.coeffs[n] * table.values(n, j);
    return s;
}

std::complex<double> momentum_matrix_element(int m, int n, double nu, int nodes) {
    check_n_nu(m, nu);
    check_n_nu(n, nu);
    const auto rule = gauss_legendre(nodes, 0.0, pi);
    std::vector<Jet<double>> jets;
    const int top = std::max(m, n);
    double s = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        eigenfunction_jets(top, nu, rule.nodes[j], jets);
        s += rule.weights[j] * jets[m].value * jets[n].d1;
    }
    return {0.0, -s};
}

Eigen::MatrixXcd momentum_matrix(double nu, int nmax, int nodes) {
    const auto t = tabulate_basis(nu, nmax, shared_gauss_legendre(nodes, 0.0, pi));
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(t.rule->weights.data(), t.rule->size());
    const Eigen::MatrixXd re = t.values * w.asDiagonal() * t.d1.transpose();
    return std::complex<double>(0.0, -1.0) * re.cast<std::complex<double>>();
}

double orthonormality_defect(double nu, int nmax, int nodes) {
    const auto t = tabulate_basis(nu, nmax, shared_gauss_legendre(nodes, 0.0, pi), 0);
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(t.rule->weights.data(), t.rule->size());
    const Eigen::MatrixXd gram = t.values * w.asDiagonal() * t.values.transpose();
    return (gram - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff();
}

double schrodinger_residual(int n, double nu, double margin, int nodes) {
    check_n_nu(n, nu);
    const auto rule = gauss_legendre(nodes, margin, pi - margin);
    const double en = energy(n, nu);
    std::vector<Jet<double>> jets;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double x = rule.nodes[j];
        eigenfunction_jets(n, nu, x, jets);
        const auto& J = jets[n];
        const double s = std::sin(x);
        const double hphi = -J.d2 + nu * (nu + 1.0) / (s * s) * J.value;
        const double r = hphi - en * J.value;
        num += rule.weights[j] * r * r;
        den += rule.weights[j] * en * en * J.value * J.value;
    }
    return std::sqrt(num / den);
}

}  // namespace ptcs
