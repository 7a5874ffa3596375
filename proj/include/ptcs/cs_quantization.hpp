#pragma once

// Coherent-state quantization f(q,p) -> F = int dq dp/(2 pi) f |eta_qp><eta_qp|.
//
// For symbols u(q) p^k with k <= 2 the p-integral is done analytically: the
// plane-wave factor e^{ip(x-x')} turns p^k into the k-th derivative of a
// delta function.  What remains is a q-integral against the kernel
//
//   w_x(q) = N^2(q) e^{2 W(q) x} sin^{2nu+2} x,
//
// and the quantized operator takes the form
//
//   F = P c2(x) P + (c1(x) P + P c1(x)) / 2 + c0(x),
//
// with c_k built from q-integrals of u against w_x.  The q-integrals use a
// fixed mesh graded geometrically toward both walls (near a wall the kernel
// is smooth in log q), with N^2 at every mesh node from adaptive quadrature.

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptcs/coherent_states.hpp"

namespace ptcs {

/// Quadrature in q over (0, pi) with the CS normalization resolved per node.
struct QMesh {
    double nu = 0.0;
    double q_min = 0.0;  // mesh covers [q_min, pi - q_min]
    std::vector<double> q;
    std::vector<double> weight;
    std::vector<double> a;              // W(q)
    std::vector<double> log_sin_q;
    std::vector<double> log_scaled_integral;  // log I(q)

    std::size_t size() const { return q.size(); }
    /// log w_x(q_j)
    double log_kernel(std::size_t j, double x, double log_sin_x) const;
};

/// Built once per nu and cached (thread-safe).
std::shared_ptr<const QMesh> q_mesh(double nu);

/// x closer than this to a wall is outside the range the mesh resolves.
inline constexpr double kernel_wall_limit = 1e-8;

/// g(x) = sin^{2nu+2}(x) int_0^pi N^2(q) e^{2W(q)x} dq.  Resolution of the
/// identity is the statement g == 1.
double identity_weight(double nu, double x);

/// One term u(q) p^degree of a classical symbol.
struct SymbolTerm {
    std::function<double(double)> u;
    int p_degree = 0;
};

/// A classical observable on the strip, a finite sum of u(q) p^k terms.
struct ClassicalSymbol {
    std::string name;
    std::vector<SymbolTerm> terms;

    ClassicalSymbol scaled(double factor) const;
    friend ClassicalSymbol operator+(const ClassicalSymbol& a, const ClassicalSymbol& b);
};

namespace symbols {
ClassicalSymbol unit();
ClassicalSymbol position();
ClassicalSymbol superpotential(double nu);
ClassicalSymbol inverse_sin_squared();
ClassicalSymbol momentum();
ClassicalSymbol momentum_squared();
/// p^2 + ((2nu-1)/(2nu+3)) (nu+1)^2 / sin^2 q, whose quantization is H_nu.
ClassicalSymbol classical_hamiltonian(double nu);
/// Named lookup: unit, position, superpotential, inverse_sin_squared,
/// momentum, momentum_squared, classical_hamiltonian.
ClassicalSymbol by_name(const std::string& name, double nu);
}  // namespace symbols

/// Flags carried over from the operator table; no extension theory is done.
struct OperatorProperties {
    bool known = false;
    bool bounded = false;
    bool self_adjoint = false;
    bool symmetric = false;
    bool semi_bounded = false;
    std::string note;
};

/// P c2 P + (c1 P + P c1)/2 + c0; empty functions are zero.
struct DifferentialForm {
    std::function<double(double)> c0;
    std::function<double(double)> c1;
    std::function<double(double)> c2;
};

struct QuantizedOperator {
    enum class Kind { MultiplierFunction, EigenbasisMatrix };

    Kind kind = Kind::MultiplierFunction;
    double nu = 0.0;
    std::string source;
    DifferentialForm form;
    /// Eigenbasis matrix (nmax+1)^2; assembled for matrix kinds.
    Eigen::MatrixXcd matrix;
    OperatorProperties properties;

    /// The multiplier function c0 (multiplier kinds only).
    double multiplier(double x) const;
    int nmax() const { return static_cast<int>(matrix.rows()) - 1; }
};

/// <phi_m|F|phi_n> for m, n <= nmax by x-quadrature of the differential form.
Eigen::MatrixXcd assemble_matrix(const DifferentialForm& form, double nu, int nmax, int nodes = 0);

/// max |M - M^dagger|
double hermiticity_defect(const Eigen::MatrixXcd& m);

/// Throws ValidationError for terms of degree > 2 or without a u function.
QuantizedOperator quantize(const ClassicalSymbol& symbol, double nu, int nmax = default_nmax);

/// Quantization of f = q (a multiplication operator).
QuantizedOperator quantize_position(double nu);

/// Quantum operators whose lower symbols are tabulated.
namespace operators {
QuantizedOperator position(double nu);
QuantizedOperator momentum(double nu, int nmax = default_nmax);
QuantizedOperator superpotential(double nu);
QuantizedOperator inverse_sin_squared(double nu);
/// P^2 / 2m, i.e. P^2 in the dimensionless frame.
QuantizedOperator kinetic(double nu, int nmax = default_nmax);
}  // namespace operators

struct LowerSymbol {
    std::complex<double> value;
    double error_bar = 0.0;
    std::string method;  // "x-quadrature" or "coefficient contraction"
    bool truncation_dominated = false;
};

/// <eta_qp|F|eta_qp>.  Operators carrying a differential form are evaluated
/// by x-quadrature against eta and eta' (no truncation); matrix-only
/// operators by c^dagger M c with the CS truncation mass in the error bar.
LowerSymbol lower_symbol(const QuantizedOperator& op, double q, double p);
/// Forces the c^dagger M c route.
LowerSymbol lower_symbol_by_contraction(const QuantizedOperator& op, double q, double p);

/// Closed-form lower symbols.
namespace lower_symbols {
/// N^2(q) int_0^pi x sin^{2nu+2} x e^{2 W(q) x} dx, by its own adaptive quadrature.
double position(double nu, double q);
double momentum(double p);
double superpotential(double nu, double q);
/// (2nu+2)/(2nu+1) / sin^2 q
double inverse_sin_squared(double nu, double q);
/// p^2 + (nu+1)^2 / ((2nu+1) sin^2 q)
double kinetic(double nu, double q, double p);
}  // namespace lower_symbols

/// Closed-form quantized multipliers.
namespace multipliers {
/// (2nu+3)/(2nu+2) / sin^2 x
double inverse_sin_squared(double nu, double x);
}  // namespace multipliers

/// The matrix of g in the eigenbasis (identity when the CS resolve unity).
Eigen::MatrixXd resolution_matrix(double nu, int nmax, int nodes = 0);

}  // namespace ptcs
