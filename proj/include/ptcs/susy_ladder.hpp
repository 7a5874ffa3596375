#pragma once

// Superpotential W(x) = -(nu+1) cot x and the ladder operators
// A = W + d/dx, A^dag = W - d/dx acting on states given as analytic jets.
// In the dimensionless frame H_nu = A^dag A + (nu+1)^2 and the partner
// A A^dag + (nu+1)^2 equals H_{nu+1}.

#include <complex>
#include <functional>
#include <numbers>

#include "ptcs/eigensystem.hpp"

namespace ptcs {

using ComplexJet = Jet<std::complex<double>>;
/// A state known analytically: x -> (psi, psi', psi'').
using StateFunction = std::function<ComplexJet(double)>;

inline constexpr double default_margin = 1e-6 * std::numbers::pi;

/// W_nu(x) for x strictly inside (0, pi); throws at the walls.
double superpotential(double nu, double x);
/// W_nu'(x) = (nu+1) / sin^2 x.
double superpotential_derivative(double nu, double x);

/// phi_{n,nu} as a StateFunction.
StateFunction eigenstate_function(int n, double nu);

/// (W psi + psi').  The second derivative of the result is not available
/// (set to NaN), so at most one further ladder operator can follow.
StateFunction apply_lowering(StateFunction psi, double nu);
/// (W psi - psi').
StateFunction apply_raising(StateFunction psi, double nu);

/// Sampled L2 inner product <f|g> on an interior Gauss-Legendre window.
std::complex<double> window_inner(const StateFunction& f, const StateFunction& g, double margin = default_margin,
                                  int nodes = default_basis_nodes);

/// || (A^dag A + (nu+1)^2 - E_n) phi_n || / (E_n ||phi_n||)
double factorization_residual(int n, double nu, double margin = default_margin, int nodes = default_basis_nodes);

/// 1 - |<A phi_{n+1,nu}, phi_{n,nu+1}>|^2 / ||A phi_{n+1,nu}||^2
double lowering_intertwining_defect(int n, double nu, double margin = default_margin,
                                    int nodes = default_basis_nodes);
/// 1 - |<A^dag phi_{n,nu+1}, phi_{n+1,nu}>|^2 / ||A^dag phi_{n,nu+1}||^2
double raising_intertwining_defect(int n, double nu, double margin = default_margin,
                                   int nodes = default_basis_nodes);

/// sup |A phi_0| / sup |phi_0| over `samples` equispaced interior points.
double ground_annihilation_defect(double nu, double margin = default_margin, int samples = 2048);

/// |<A^dag f, g> - <f, A g>| for two eigenstates of the same nu.
double adjointness_defect(int m, int n, double nu, double margin = default_margin, int nodes = default_basis_nodes);

struct PartnerReport {
    double nu = 0.0;
    int n = 0;
    double expected_energy = 0.0;  // (n + nu + 2)^2
    double rayleigh_quotient = 0.0;
    double residual = 0.0;  // relative to expected_energy * ||phi||
};

/// Applies A A^dag + (nu+1)^2 to phi_{n,nu+1} and compares with (n+nu+2)^2.
PartnerReport check_partner_spectrum(double nu, int n, double margin = default_margin,
                                     int nodes = default_basis_nodes);

}  // namespace ptcs
