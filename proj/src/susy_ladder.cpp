#include "ptcs/susy_ladder.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ptcs/physical_model.hpp"

namespace ptcs {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void check_interior(double x) {
    if (!(x > 0.0 && x < pi)) {
        std::ostringstream os;
        os << "ladder operators are singular at the walls; x = " << x << " is not inside (0, pi)";
        throw ValidationError(os.str());
    }
}

double window_norm(const StateFunction& f, const QuadratureRule& rule) {
    double s = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) s += rule.weights[j] * std::norm(f(rule.nodes[j]).value);
    return std::sqrt(s);
}

}  // namespace

double superpotential(double nu, double x) {
    check_interior(x);
    return -(nu + 1.0) * std::cos(x) / sin_from_wall(x);
}

double superpotential_derivative(double nu, double x) {
    check_interior(x);
    const double s = sin_from_wall(x);
    return (nu + 1.0) / (s * s);
}

StateFunction eigenstate_function(int n, double nu) {
    return [n, nu](double x) {
        const auto j = eigenfunction_jet(n, nu, x);
        return ComplexJet{j.value, j.d1, j.d2};
    };
}

StateFunction apply_lowering(StateFunction psi, double nu) {
    return [psi = std::move(psi), nu](double x) {
        const double w = superpotential(nu, x);
        const double dw = superpotential_derivative(nu, x);
        const auto f = psi(x);
        return ComplexJet{w * f.value + f.d1, dw * f.value + w * f.d1 + f.d2, {nan, nan}};
    };
}

StateFunction apply_raising(StateFunction psi, double nu) {
    return [psi = std::move(psi), nu](double x) {
        const double w = superpotential(nu, x);
        const double dw = superpotential_derivative(nu, x);
        const auto f = psi(x);
        return ComplexJet{w * f.value - f.d1, dw * f.value + w * f.d1 - f.d2, {nan, nan}};
    };
}

std::complex<double> window_inner(const StateFunction& f, const StateFunction& g, double margin, int nodes) {
    const auto rule = gauss_legendre(nodes, margin, pi - margin);
    std::complex<double> s{0.0, 0.0};
    for (std::size_t j = 0; j < rule.size(); ++j)
        s += rule.weights[j] * std::conj(f(rule.nodes[j]).value) * g(rule.nodes[j]).value;
    return s;
}

double factorization_residual(int n, double nu, double margin, int nodes) {
    const auto rule = gauss_legendre(nodes, margin, pi - margin);
    const auto phi = eigenstate_function(n, nu);
    const auto aa = apply_raising(apply_lowering(phi, nu), nu);
    const double ground = energy(0, nu);
    const double en = energy(n, nu);
    double num = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double x = rule.nodes[j];
        const auto r = aa(x).value + (ground - en) * phi(x).value;
        num += rule.weights[j] * std::norm(r);
    }
    return std::sqrt(num) / (en * window_norm(phi, rule));
}

namespace {

double parallel_defect(const StateFunction& image, const StateFunction& target, double margin, int nodes) {
    const auto rule = gauss_legendre(nodes, margin, pi - margin);
    std::complex<double> ip{0.0, 0.0};
    double n_img = 0.0;
    double n_tgt = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const auto a = image(rule.nodes[j]).value;
        const auto b = target(rule.nodes[j]).value;
        ip += rule.weights[j] * std::conj(a) * b;
        n_img += rule.weights[j] * std::norm(a);
        n_tgt += rule.weights[j] * std::norm(b);
    }
    return 1.0 - std::norm(ip) / (n_img * n_tgt);
}

}  // namespace

double lowering_intertwining_defect(int n, double nu, double margin, int nodes) {
    return parallel_defect(apply_lowering(eigenstate_function(n + 1, nu), nu), eigenstate_function(n, nu + 1.0),
                           margin, nodes);
}

double raising_intertwining_defect(int n, double nu, double margin, int nodes) {
    return parallel_defect(apply_raising(eigenstate_function(n, nu + 1.0), nu), eigenstate_function(n + 1, nu),
                           margin, nodes);
}

double ground_annihilation_defect(double nu, double margin, int samples) {
    const auto a_phi0 = apply_lowering(eigenstate_function(0, nu), nu);
    double sup_a = 0.0;
    double sup_phi = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = margin + (pi - 2.0 * margin) * i / (samples - 1.0);
        sup_a = std::max(sup_a, std::abs(a_phi0(x).value));
        sup_phi = std::max(sup_phi, std::abs(eigenfunction(0, nu, x)));
    }
    return sup_a / sup_phi;
}

double adjointness_defect(int m, int n, double nu, double margin, int nodes) {
    const auto f = eigenstate_function(m, nu);
    const auto g = eigenstate_function(n, nu);
    return std::abs(window_inner(apply_raising(f, nu), g, margin, nodes) -
                    window_inner(f, apply_lowering(g, nu), margin, nodes));
}

PartnerReport check_partner_spectrum(double nu, int n, double margin, int nodes) {
    PartnerReport rep;
    rep.nu = nu;
    rep.n = n;
    rep.expected_energy = energy(n, nu + 1.0);
    const auto rule = gauss_legendre(nodes, margin, pi - margin);
    const auto phi = eigenstate_function(n, nu + 1.0);
    const auto partner = apply_lowering(apply_raising(phi, nu), nu);
    const double ground = energy(0, nu);
    double num = 0.0;
    double den = 0.0;
    std::complex<double> quotient{0.0, 0.0};
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double x = rule.nodes[j];
        const auto v = phi(x).value;
        const auto hv = partner(x).value + ground * v;
        quotient += rule.weights[j] * std::conj(v) * hv;
        num += rule.weights[j] * std::norm(hv - rep.expected_energy * v);
        den += rule.weights[j] * std::norm(v);
    }
    rep.rayleigh_quotient = quotient.real() / den;
    rep.residual = std::sqrt(num / den) / rep.expected_energy;
    return rep;
}

}  // namespace ptcs
