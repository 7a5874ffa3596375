#include "ptcs/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "ptcs/physical_model.hpp"

namespace ptcs {

namespace {

void check_gegenbauer_args(int n, double lambda) {
    if (n < 0) throw ValidationError("gegenbauer: n must be >= 0");
    if (!(lambda > 0.0)) throw ValidationError("gegenbauer: lambda must be > 0");
}

}  // namespace

double gegenbauer(int n, double lambda, double x) {
    check_gegenbauer_args(n, lambda);
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * lambda * x;
    for (int k = 2; k <= n; ++k) {
        const double next = (2.0 * (k + lambda - 1.0) * x * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    return cur;
}

void gegenbauer_sequence(int nmax, double lambda, double x, std::span<double> out) {
    check_gegenbauer_args(nmax, lambda);
    if (out.size() < static_cast<std::size_t>(nmax) + 1)
        throw ValidationError("gegenbauer_sequence: output span too small");
    out[0] = 1.0;
    if (nmax == 0) return;
    out[1] = 2.0 * lambda * x;
    for (int k = 2; k <= nmax; ++k)
        out[k] = (2.0 * (k + lambda - 1.0) * x * out[k - 1] - (k + 2.0 * lambda - 2.0) * out[k - 2]) / k;
}

double gegenbauer_derivative(int n, double lambda, double x, int order) {
    check_gegenbauer_args(n, lambda);
    switch (order) {
        case 0:
            return gegenbauer(n, lambda, x);
        case 1:
            return n < 1 ? 0.0 : 2.0 * lambda * gegenbauer(n - 1, lambda + 1.0, x);
        case 2:
            return n < 2 ? 0.0 : 4.0 * lambda * (lambda + 1.0) * gegenbauer(n - 2, lambda + 2.0, x);
        default:
            throw ValidationError("gegenbauer_derivative: order must be 0, 1 or 2");
    }
}

std::complex<double> log_gamma_complex(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ValidationError("log_gamma_complex: non-finite argument");
    if (z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real())
        throw ValidationError("log_gamma_complex: pole at non-positive integer");
    if (!(z.real() > 0.0)) throw ValidationError("log_gamma_complex: requires Re z > 0");

    // Shift so that |z| is large enough for the asymptotic series to reach
    // double precision; each log(z + k) is principal with Re > 0, so the sum
    // is the continuous branch.
    std::complex<double> shift_log{0.0, 0.0};
    while (std::abs(z) < 17.0) {
        shift_log += std::log(z);
        z += 1.0;
    }
    // Stirling: (z - 1/2) log z - z + log(2 pi)/2 + sum B_2k / (2k (2k-1) z^(2k-1))
    static constexpr double b2k[] = {1.0 / 6.0,    -1.0 / 30.0,      1.0 / 42.0,  -1.0 / 30.0,
                                     5.0 / 66.0,   -691.0 / 2730.0,  7.0 / 6.0,   -3617.0 / 510.0};
    const std::complex<double> inv = 1.0 / z;
    const std::complex<double> inv2 = inv * inv;
    std::complex<double> series{0.0, 0.0};
    std::complex<double> pw = inv;
    for (int k = 1; k <= 8; ++k) {
        series += b2k[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * pw;
        pw *= inv2;
    }
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    return (z - 0.5) * std::log(z) - z + half_log_2pi + series - shift_log;
}

namespace {

struct ReferenceRule {
    std::vector<double> x;
    std::vector<double> w;
};

ReferenceRule compute_reference_rule(int n) {
    ReferenceRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pn1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                // one more pass to refresh dp at the converged root
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double qn = n == 1 ? x : p1;
                const double qn1 = n == 1 ? 1.0 : p0;
                dp = n * (x * qn - qn1) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

const ReferenceRule& reference_rule(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const ReferenceRule>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_shared<const ReferenceRule>(compute_reference_rule(n))).first;
    return *it->second;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ValidationError("gauss_legendre: n must be >= 1");
    if (!(a < b)) throw ValidationError("gauss_legendre: requires a < b");
    const auto& ref = reference_rule(n);
    QuadratureRule rule;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * ref.x[i];
        rule.weights[i] = half * ref.w[i];
    }
    return rule;
}

std::shared_ptr<const QuadratureRule> shared_gauss_legendre(int n, double a, double b) {
    static std::mutex mu;
    static std::map<std::tuple<int, double, double>, std::shared_ptr<const QuadratureRule>> cache;
    std::lock_guard lock(mu);
    const auto key = std::make_tuple(n, a, b);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_shared<const QuadratureRule>(gauss_legendre(n, a, b))).first;
    return it->second;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, int nodes_per_panel) {
    if (breakpoints.size() < 2) throw ValidationError("composite rule needs at least two breakpoints");
    QuadratureRule out;
    out.a = breakpoints.front();
    out.b = breakpoints.back();
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1])) continue;
        const auto panel = gauss_legendre(nodes_per_panel, breakpoints[i], breakpoints[i + 1]);
        out.nodes.insert(out.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        out.weights.insert(out.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return out;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, std::span<const double> breakpoints,
                                  const AdaptiveOptions& opts) {
    if (breakpoints.size() < 2) throw ValidationError("integrate_adaptive: need at least two breakpoints");
    const auto& ref = reference_rule(15);

    AdaptiveResult res;
    auto panel_sum = [&](double a, double b) {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double s = 0.0;
        for (int i = 0; i < 15; ++i) s += ref.w[i] * f(mid + half * ref.x[i]);
        res.evaluations += 15;
        return s * half;
    };

    struct Panel {
        double a, b, estimate;
        int depth;
    };
    std::vector<Panel> stack;
    double total_guess = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(a < b)) continue;
        const double est = panel_sum(a, b);
        total_guess += std::abs(est);
        stack.push_back({a, b, est, 0});
    }

    // Acceptance is judged against the magnitude of the whole integral so
    // that negligible tails are not refined forever.
    bool converged = true;
    long processed = 0;
    double scale = total_guess;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double left = panel_sum(p.a, m);
        const double right = panel_sum(m, p.b);
        const double refined = left + right;
        const double err = std::abs(refined - p.estimate);
        const double tol = std::max(opts.abs_tol, opts.rel_tol * scale);
        ++processed;
        if (err <= tol || p.depth >= opts.max_depth || processed > opts.max_panels) {
            if (err > tol) converged = false;
            res.value += refined;
            res.error_estimate += err;
            scale = std::max(scale, std::abs(res.value));
        } else {
            stack.push_back({p.a, m, left, p.depth + 1});
            stack.push_back({m, p.b, right, p.depth + 1});
        }
    }
    res.converged = converged;
    return res;
}

}  // namespace ptcs
