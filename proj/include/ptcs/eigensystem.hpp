#pragma once

// Eigenpairs of the Poschl-Teller Hamiltonian H_nu = -d^2/dx^2 + nu(nu+1)/sin^2 x
// on [0, pi] (dimensionless frame, see physical_model.hpp).

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ptcs/special_functions.hpp"

namespace ptcs {

/// Value with first and second derivative.
template <class T>
struct Jet {
    T value{};
    T d1{};
    T d2{};
};

inline constexpr int default_nmax = 64;
inline constexpr int default_basis_nodes = 400;

/// (n + nu + 1)^2
double energy(int n, double nu);

/// log Z_n; finite for every n (computed with lgamma).
double log_norm_constant(int n, double nu);
double norm_constant(int n, double nu);

/// phi_n(x) = Z_n sin^(nu+1)(x) C_n^(nu+1)(cos x).  x must lie in [0, pi].
double eigenfunction(int n, double nu, double x);

/// Value and analytic first/second derivative of phi_n at interior x.
Jet<double> eigenfunction_jet(int n, double nu, double x);

/// Jets of phi_0 .. phi_nmax at one point (one recurrence pass per family).
void eigenfunction_jets(int nmax, double nu, double x, std::vector<Jet<double>>& out);

struct EigenState {
    int n = 0;
    double nu = 0.0;
    double energy = 0.0;
    double norm_constant = 0.0;
};

EigenState eigenstate(int n, double nu);

/// phi_n (and derivatives) sampled on the nodes of a quadrature rule.
/// Row n, column j holds phi_n(x_j).
struct EigenBasisTable {
    double nu = 0.0;
    int nmax = 0;
    std::shared_ptr<const QuadratureRule> rule;
    Eigen::MatrixXd values;
    Eigen::MatrixXd d1;  // empty when derivative_order < 1
    Eigen::MatrixXd d2;  // empty when derivative_order < 2
};

/// Z_0 .. Z_nmax
std::vector<double> norm_constants(int nmax, double nu);

/// Fills phi_0..phi_nmax at one point (no derivatives).  Pass the result of
/// norm_constants() when calling in a loop.
void eigenfunction_values(int nmax, double nu, double x, std::span<double> out,
                          std::span<const double> norms = {});

EigenBasisTable tabulate_basis(double nu, int nmax, std::shared_ptr<const QuadratureRule> rule,
                               int derivative_order = 1);

/// A state as coefficients over {phi_n} at fixed nu.
struct SpectralState {
    double nu = 0.0;
    std::vector<std::complex<double>> coeffs;
    /// 1 - sum |c_n|^2 for a state that was normalized before truncation.
    double truncation_mass = 0.0;

    int nmax() const { return static_cast<int>(coeffs.size()) - 1; }
    double norm_squared() const;
    SpectralState normalized() const;
};

/// A state sampled on the nodes of a rule.
struct SampledState {
    std::shared_ptr<const QuadratureRule> rule;
    std::vector<std::complex<double>> values;
};

/// <f|g>, conjugating f.  Throws ValidationError when the rules differ.
std::complex<double> overlap(const SampledState& f, const SampledState& g);
/// Coefficient form; nu and length must agree.
std::complex<double> overlap(const SpectralState& f, const SpectralState& g);

SampledState sample_eigenfunction(int n, double nu, std::shared_ptr<const QuadratureRule> rule);
SampledState sample_state(const SpectralState& s, std::shared_ptr<const QuadratureRule> rule);

/// <phi_m| -i d/dx |phi_n>, purely imaginary (momentum unit pi hbar / L).
std::complex<double> momentum_matrix_element(int m, int n, double nu, int nodes = default_basis_nodes);
Eigen::MatrixXcd momentum_matrix(double nu, int nmax, int nodes = default_basis_nodes);

/// max_{m,n<=nmax} |<phi_m|phi_n> - delta_mn| on an n-point rule.
double orthonormality_defect(double nu, int nmax, int nodes = default_basis_nodes);

/// ||H phi_n - E_n phi_n|| / ||E_n phi_n|| over [margin, pi - margin].
double schrodinger_residual(int n, double nu, double margin, int nodes = default_basis_nodes);

}  // namespace ptcs
