#pragma once

#include <cmath>
#include <numbers>

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ptcs {

/// C_n^lambda(x) by forward three-term recurrence.  Requires n >= 0, lambda > 0.
double gegenbauer(int n, double lambda, double x);

/// Fills out[0..nmax] with C_0^lambda(x) .. C_nmax^lambda(x).
void gegenbauer_sequence(int nmax, double lambda, double x, std::span<double> out);

/// d^k/dx^k C_n^lambda(x) for k in {0, 1, 2}, via d/dx C_n^l = 2 l C_{n-1}^{l+1}.
double gegenbauer_derivative(int n, double lambda, double x, int order);

/// log Gamma(z) for Re z > 0, continued analytically from the positive real
/// axis.  Stirling series after upward recursion; |Gamma(z)| = exp(real part).
std::complex<double> log_gamma_complex(std::complex<double> z);

/// Nodes and weights on [a, b].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
    double b = 0.0;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    auto integrate(F&& f) const {
        using R = decltype(f(0.0));
        R sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// n-point Gauss-Legendre rule on [a, b].  The reference rule on [-1, 1] is
/// computed once per n and cached; the cache is internally synchronized.
QuadratureRule gauss_legendre(int n, double a, double b);

/// Shared read-only handle, useful when many objects sample on one rule.
std::shared_ptr<const QuadratureRule> shared_gauss_legendre(int n, double a, double b);

/// Concatenates an n-point Gauss-Legendre rule on each consecutive panel.
QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, int nodes_per_panel);

struct AdaptiveResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// sin x on [0, pi] computed from the nearer wall, so that it stays
/// relatively accurate as x approaches pi.
inline double sin_from_wall(double x) {
    constexpr double pi = std::numbers::pi;
    return std::sin(x <= 0.5 * pi ? x : pi - x);
}

struct AdaptiveOptions {
    double rel_tol = 1e-13;
    double abs_tol = 0.0;
    int max_depth = 60;
    long max_panels = 200000;
};

/// Adaptive panel bisection with a 15-point Gauss-Legendre rule: a panel is
/// accepted when it agrees with the sum over its two halves.  Breakpoints
/// split the interval up front (place them at known peaks).  A feature much
/// narrower than its panel can be missed by both rules at once and the panel
/// accepted anyway, so grade breakpoints towards narrow peaks.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, std::span<const double> breakpoints,
                                  const AdaptiveOptions& opts = {});

}  // namespace ptcs
