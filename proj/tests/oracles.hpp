#pragma once

// Reference computations kept independent of the library's own quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
auto simpson(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    auto sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * (h / 3.0);
}

// Central second difference.
inline double second_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline double first_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// Infinite-well eigenfunction sqrt(2/pi) sin((n+1) x).
inline double box(int n, double x) { return std::sqrt(2.0 / pi) * std::sin((n + 1) * x); }

}  // namespace oracle
