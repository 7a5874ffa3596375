#pragma once

// Time evolution in the eigenbasis and phase-space distributions
//
//   rho(q,p) = |<eta_qp|phi>|^2 / (2 pi)      (measure dq dp, dimensionless frame)
//
// Time t is in units of hbar / E0, so the infinite-well revival period is 2 pi.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptcs/coherent_states.hpp"
#include "ptcs/physical_model.hpp"

namespace ptcs {

/// Grid used for phase-space pictures: q in [0.01 pi, 0.99 pi], p in [-12, 12].
GridSpec default_phase_grid();

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

struct PhaseSpaceDistribution {
    GridSpec grid;
    std::vector<double> q;
    std::vector<double> p;
    /// Row-major in q then p: values[i * p.size() + k] = rho(q_i, p_k).
    std::vector<double> values;

    double at(std::size_t i, std::size_t k) const { return values[i * p.size() + k]; }
    /// Trapezoid estimate of int rho dq dp.
    double mass() const;
    /// (i, k) of the largest value.
    std::pair<std::size_t, std::size_t> argmax() const;
};

/// c_n(t) = exp(-i E_n t) c_n(0) with E_n at nu_evolve, which must equal the
/// basis parameter of the state.
SpectralState evolve(const SpectralState& state, double t, double nu_evolve = 0.0);

/// <phi(0)|phi(t)> = sum |c_n|^2 exp(-i E_n t)
std::complex<double> autocorrelation(const SpectralState& state, double t, double nu_evolve = 0.0);

/// sum E_n |c_n|^2
double spectral_mean_energy(const SpectralState& state);

/// <eta|H_{nu_evolve}|eta> in closed form:
///   p^2 + (nu+1)^2 / ((2nu+1) sin^2 q) + nu'(nu'+1) (2nu+2) / ((2nu+1) sin^2 q).
double closed_form_mean_energy(double nu_cs, double q, double p, double nu_evolve = 0.0);

struct MeanEnergy {
    double coefficient_sum = 0.0;
    double closed_form = 0.0;
    double relative_difference = 0.0;
    int nmax = 0;                 // expansion length used for the sum
    double truncation_mass = 0.0;
    bool truncation_dominated = false;
};

/// Mean energy of eta_{q,p} (CS parameter nu_cs) under H_{nu_evolve}, both
/// ways.  The expansion is doubled from 128 modes until successive sums agree
/// to rel_tol or max_nmax is reached; the latter sets truncation_dominated.
MeanEnergy mean_energy(double nu_cs, double q, double p, double nu_evolve = 0.0, double rel_tol = 1e-8,
                       int max_nmax = 4096);

/// Per-column overlaps d_n(q_i, p_k) = <phi_n|eta_{q_i,p_k}> for n <= nmax.
/// visit(i, D) receives D with D(k, n) = d_n(q_i, p_k).  Columns run in
/// parallel; visit must only touch data owned by column i.
void for_each_overlap_column(double nu_cs, double nu_basis, int nmax, const GridSpec& grid,
                             const std::function<void(std::size_t, const Eigen::MatrixXcd&)>& visit);

/// rho for a state given by its coefficients (any basis parameter).
PhaseSpaceDistribution husimi(const SpectralState& state, double nu_cs, const GridSpec& grid);

/// Time average from the diagonal formula (1/2pi) sum_n |c_n|^2 |d_n(q,p)|^2.
PhaseSpaceDistribution time_averaged_husimi(const SpectralState& state, double nu_cs, const GridSpec& grid);

/// (1/K) sum_k rho(t_k) with t_k = k T / K.  T defaults to the infinite-well period 2 pi.
PhaseSpaceDistribution sampled_time_average(const SpectralState& state, double nu_cs, const GridSpec& grid,
                                            int samples, double nu_evolve = 0.0, double period = 0.0);

/// p^2 + (nu+1)^2 / ((2nu+1) sin^2 q), the semi-classical Hamiltonian.
double classical_energy(double nu, double q, double p);

/// Closed orbit at energy E: upper branch left to right, then lower branch back.
/// Throws ValidationError when E does not exceed the potential minimum.
std::vector<PhasePoint> classical_trajectory(double E, double nu, int n_points);

struct BandRatio {
    double inside_mean = 0.0;
    double outside_mean = 0.0;
    double ratio = 0.0;
    std::size_t inside_cells = 0;
    double half_width = 0.0;  // relative
};

/// Mean of rho over cells with |E_cl - E| < half_width E against the mean elsewhere.
BandRatio trajectory_band_ratio(const PhaseSpaceDistribution& rho, double E, double nu, double half_width = 0.15);

}  // namespace ptcs
