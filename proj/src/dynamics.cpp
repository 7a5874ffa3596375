#include "ptcs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptcs/parallel.hpp"

namespace ptcs {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_state(const SpectralState& s) {
    if (s.coeffs.empty()) throw ValidationError("state has no coefficients");
}

PhaseSpaceDistribution empty_distribution(const GridSpec& grid) {
    grid.validate();
    PhaseSpaceDistribution d;
    d.grid = grid;
    d.q.resize(grid.q_count);
    d.p.resize(grid.p_count);
    for (int i = 0; i < grid.q_count; ++i) d.q[i] = grid.q_at(i);
    for (int k = 0; k < grid.p_count; ++k) d.p[k] = grid.p_at(k);
    d.values.assign(static_cast<std::size_t>(grid.q_count) * grid.p_count, 0.0);
    return d;
}

// Composite rule on the peak panels of |eta_q|, each panel sized for the
// fastest oscillation in phi_n e^{ipx}.
std::shared_ptr<const QuadratureRule> column_rule(double nu_cs, double q, double max_frequency) {
    const auto bps = peak_breakpoints(nu_cs, q);
    auto rule = std::make_shared<QuadratureRule>();
    rule->a = 0.0;
    rule->b = pi;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double len = bps[i + 1] - bps[i];
        const int n = 20 + static_cast<int>(std::ceil(0.6 * max_frequency * len));
        const auto g = gauss_legendre(n, bps[i], bps[i + 1]);
        rule->nodes.insert(rule->nodes.end(), g.nodes.begin(), g.nodes.end());
        rule->weights.insert(rule->weights.end(), g.weights.begin(), g.weights.end());
    }
    return rule;
}

Eigen::VectorXcd coefficient_vector(const SpectralState& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.coeffs.data(), static_cast<Eigen::Index>(s.coeffs.size()));
}

}  // namespace

GridSpec default_phase_grid() {
    GridSpec g;
    g.q_margin = 0.01 * pi;
    return g;
}

double PhaseSpaceDistribution::mass() const {
    const std::size_t nq = q.size();
    const std::size_t np = p.size();
    if (nq < 2 || np < 2) return 0.0;
    const double dq = (q.back() - q.front()) / static_cast<double>(nq - 1);
    const double dp = (p.back() - p.front()) / static_cast<double>(np - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        const double wi = (i == 0 || i + 1 == nq) ? 0.5 : 1.0;
        for (std::size_t k = 0; k < np; ++k) {
            const double wk = (k == 0 || k + 1 == np) ? 0.5 : 1.0;
            s += wi * wk * at(i, k);
        }
    }
    return s * dq * dp;
}

std::pair<std::size_t, std::size_t> PhaseSpaceDistribution::argmax() const {
    if (values.empty()) throw ValidationError("argmax of an empty distribution");
    const auto it = std::max_element(values.begin(), values.end());
    const auto idx = static_cast<std::size_t>(it - values.begin());
    return {idx / p.size(), idx % p.size()};
}

SpectralState evolve(const SpectralState& state, double t, double nu_evolve) {
    check_state(state);
    if (state.nu != nu_evolve) {
        std::ostringstream os;
        os << "evolve: state is expanded at nu = " << state.nu << " but the Hamiltonian has nu = " << nu_evolve
           << "; re-expand the state in the evolving basis first";
        throw ValidationError(os.str());
    }
    if (!std::isfinite(t)) throw ValidationError("evolve: t must be finite");
    SpectralState out = state;
    for (int n = 0; n <= out.nmax(); ++n) {
        // E_n t can be large; reduce the phase before forming the exponential.
        const double phase = std::remainder(energy(n, nu_evolve) * t, two_pi);
        out.coeffs[n] *= std::polar(1.0, -phase);
    }
    return out;
}

std::complex<double> autocorrelation(const SpectralState& state, double t, double nu_evolve) {
    const auto evolved = evolve(state, t, nu_evolve);
    return overlap(state, evolved);
}

double spectral_mean_energy(const SpectralState& state) {
    check_state(state);
    double s = 0.0;
    for (int n = 0; n <= state.nmax(); ++n) s += energy(n, state.nu) * std::norm(state.coeffs[n]);
    return s;
}

double closed_form_mean_energy(double nu_cs, double q, double p, double nu_evolve) {
    CoherentStateLabel{q, p, nu_cs}.validate();
    if (!std::isfinite(nu_evolve) || nu_evolve < 0.0) throw ValidationError("nu_evolve must be >= 0");
    const double s2 = std::pow(sin_from_wall(q), 2);
    const double kinetic = p * p + (nu_cs + 1.0) * (nu_cs + 1.0) / ((2.0 * nu_cs + 1.0) * s2);
    const double potential = nu_evolve * (nu_evolve + 1.0) * (2.0 * nu_cs + 2.0) / ((2.0 * nu_cs + 1.0) * s2);
    return kinetic + potential;
}

MeanEnergy mean_energy(double nu_cs, double q, double p, double nu_evolve, double rel_tol, int max_nmax) {
    const CoherentState cs({q, p, nu_cs});
    MeanEnergy out;
    out.closed_form = closed_form_mean_energy(nu_cs, q, p, nu_evolve);
    int nmax = 128;
    auto c = cs_coefficients(cs, nmax, nu_evolve, false);
    double prev = spectral_mean_energy(c);
    bool converged = false;
    while (nmax < max_nmax) {
        nmax = std::min(2 * nmax, max_nmax);
        c = cs_coefficients(cs, nmax, nu_evolve, false);
        const double cur = spectral_mean_energy(c);
        const bool close = std::abs(cur - prev) <= rel_tol * std::abs(cur);
        prev = cur;
        if (close) {
            converged = true;
            break;
        }
    }
    out.coefficient_sum = prev;
    out.nmax = nmax;
    out.truncation_mass = c.truncation_mass;
    out.truncation_dominated = !converged;
    out.relative_difference = std::abs(out.coefficient_sum - out.closed_form) / std::abs(out.closed_form);
    return out;
}

void for_each_overlap_column(double nu_cs, double nu_basis, int nmax, const GridSpec& grid,
                             const std::function<void(std::size_t, const Eigen::MatrixXcd&)>& visit) {
    grid.validate();
    if (nmax < 0) throw ValidationError("nmax must be >= 0");
    if (grid.p_max > 12.0 || grid.q_margin < 0.01 * pi) {
        std::ostringstream os;
        os << "phase grid (p_max = " << grid.p_max << ", q_margin = " << grid.q_margin
           << ") reaches outside the supported label envelope |p| <= 12, q in [0.01 pi, 0.99 pi]";
        emit_warning(os.str());
    }
    const double max_frequency = nmax + nu_basis + 1.0 + grid.p_max;
    const Eigen::Index np = grid.p_count;
    const auto norms = norm_constants(nmax, nu_basis);
    parallel_for(static_cast<std::size_t>(grid.q_count), [&](std::size_t i) {
        const double q = grid.q_at(static_cast<int>(i));
        const CoherentState cs({q, 0.0, nu_cs});
        const auto rule = column_rule(nu_cs, q, max_frequency);
        const auto m = static_cast<Eigen::Index>(rule->size());
        Eigen::MatrixXd a(m, nmax + 1);  // w_j |eta(x_j)| phi_n(x_j)
        std::vector<double> phi(nmax + 1);
        for (Eigen::Index j = 0; j < m; ++j) {
            const double x = rule->nodes[j];
            eigenfunction_values(nmax, nu_basis, x, phi, norms);
            const double we = rule->weights[j] * cs.modulus(x);
            for (int n = 0; n <= nmax; ++n) a(j, n) = we * phi[n];
        }
        Eigen::MatrixXd cosm(np, m), sinm(np, m);
        for (Eigen::Index k = 0; k < np; ++k) {
            const double p = grid.p_at(static_cast<int>(k));
            for (Eigen::Index j = 0; j < m; ++j) {
                const double ph = p * rule->nodes[j];
                cosm(k, j) = std::cos(ph);
                sinm(k, j) = std::sin(ph);
            }
        }
        Eigen::MatrixXcd d(np, nmax + 1);
        d.real() = cosm * a;
        d.imag() = sinm * a;
        visit(i, d);
    });
}

PhaseSpaceDistribution husimi(const SpectralState& state, double nu_cs, const GridSpec& grid) {
    check_state(state);
    auto out = empty_distribution(grid);
    const Eigen::VectorXcd cbar = coefficient_vector(state).conjugate();
    const std::size_t np = out.p.size();
    for_each_overlap_column(nu_cs, state.nu, state.nmax(), grid, [&](std::size_t i, const Eigen::MatrixXcd& d) {
        const Eigen::VectorXcd amp = d * cbar;
        for (std::size_t k = 0; k < np; ++k) out.values[i * np + k] = std::norm(amp[k]) / two_pi;
    });
    return out;
}

PhaseSpaceDistribution time_averaged_husimi(const SpectralState& state, double nu_cs, const GridSpec& grid) {
    check_state(state);
    auto out = empty_distribution(grid);
    Eigen::VectorXd weights(state.nmax() + 1);
    for (int n = 0; n <= state.nmax(); ++n) weights[n] = std::norm(state.coeffs[n]);
    const std::size_t np = out.p.size();
    for_each_overlap_column(nu_cs, state.nu, state.nmax(), grid, [&](std::size_t i, const Eigen::MatrixXcd& d) {
        const Eigen::VectorXd col = d.cwiseAbs2() * weights;
        for (std::size_t k = 0; k < np; ++k) out.values[i * np + k] = col[k] / two_pi;
    });
    return out;
}

PhaseSpaceDistribution sampled_time_average(const SpectralState& state, double nu_cs, const GridSpec& grid,
                                            int samples, double nu_evolve, double period) {
    check_state(state);
    if (samples < 1) throw ValidationError("sampled_time_average: need at least one sample");
    if (period <= 0.0) period = two_pi;
    auto out = empty_distribution(grid);
    // Column k holds conj(c(t_k)), so D * C gives <eta|phi(t_k)>^* for every p at once.
    Eigen::MatrixXcd cbar(state.nmax() + 1, samples);
    for (int k = 0; k < samples; ++k) {
        const auto ck = evolve(state, period * k / samples, nu_evolve);
        cbar.col(k) = coefficient_vector(ck).conjugate();
    }
    const std::size_t np = out.p.size();
    for_each_overlap_column(nu_cs, state.nu, state.nmax(), grid, [&](std::size_t i, const Eigen::MatrixXcd& d) {
        const Eigen::VectorXd avg = (d * cbar).cwiseAbs2().rowwise().mean();
        for (std::size_t k = 0; k < np; ++k) out.values[i * np + k] = avg[k] / two_pi;
    });
    return out;
}

double classical_energy(double nu, double q, double p) {
    const double s = sin_from_wall(q);
    return p * p + (nu + 1.0) * (nu + 1.0) / ((2.0 * nu + 1.0) * s * s);
}

std::vector<PhasePoint> classical_trajectory(double E, double nu, int n_points) {
    if (!std::isfinite(nu) || nu < 0.0) throw ValidationError("classical_trajectory: nu must be >= 0");
    if (n_points < 2) throw ValidationError("classical_trajectory: need at least two points per branch");
    const double floor = (nu + 1.0) * (nu + 1.0) / (2.0 * nu + 1.0);
    if (!(E > floor)) {
        std::ostringstream os;
        os << "energy " << E << " does not exceed the potential minimum " << floor;
        throw ValidationError(os.str());
    }
    const double qt = std::asin(std::sqrt(floor / E));
    std::vector<double> qs(n_points);
    for (int i = 0; i < n_points; ++i) {
        // cosine spacing: dense near the turning points where p changes fastest
        const double s = 0.5 * (1.0 - std::cos(pi * i / (n_points - 1)));
        qs[i] = qt + (pi - 2.0 * qt) * s;
    }
    qs.front() = qt;
    qs.back() = pi - qt;
    auto momentum = [&](double q) { return std::sqrt(std::max(0.0, E - classical_energy(nu, q, 0.0))); };
    std::vector<PhasePoint> out;
    out.reserve(2 * n_points - 1);
    for (double q : qs) out.push_back({q, momentum(q)});
    for (int i = n_points - 2; i >= 0; --i) out.push_back({qs[i], -momentum(qs[i])});
    return out;
}

BandRatio trajectory_band_ratio(const PhaseSpaceDistribution& rho, double E, double nu, double half_width) {
    BandRatio r;
    r.half_width = half_width;
    double in_sum = 0.0, out_sum = 0.0;
    std::size_t out_cells = 0;
    for (std::size_t i = 0; i < rho.q.size(); ++i) {
        for (std::size_t k = 0; k < rho.p.size(); ++k) {
            const double e = classical_energy(nu, rho.q[i], rho.p[k]);
            if (std::abs(e - E) < half_width * E) {
                in_sum += rho.at(i, k);
                ++r.inside_cells;
            } else {
                out_sum += rho.at(i, k);
                ++out_cells;
            }
        }
    }
    if (r.inside_cells == 0 || out_cells == 0) throw ValidationError("trajectory band does not split the grid");
    r.inside_mean = in_sum / static_cast<double>(r.inside_cells);
    r.outside_mean = out_sum / static_cast<double>(out_cells);
    r.ratio = r.inside_mean / r.outside_mean;
    return r;
}

}  // namespace ptcs
