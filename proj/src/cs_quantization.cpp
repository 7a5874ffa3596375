#include "ptcs/cs_quantization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "ptcs/parallel.hpp"
#include "ptcs/physical_model.hpp"

namespace ptcs {

namespace {

constexpr double pi = std::numbers::pi;

// Mesh geometry: panels [q_k / ratio, q_k] from pi/2 down to q_min, mirrored.
constexpr double mesh_q_min = 1e-10;
constexpr double mesh_ratio = 1.25;
constexpr int mesh_nodes_per_panel = 20;

std::shared_ptr<const QMesh> build_mesh(double nu) {
    auto mesh = std::make_shared<QMesh>();
    mesh->nu = nu;
    mesh->q_min = mesh_q_min;

    std::vector<double> left{pi / 2.0};
    while (left.back() > mesh_q_min) left.push_back(left.back() / mesh_ratio);
    left.back() = mesh_q_min;
    std::vector<double> bps(left.rbegin(), left.rend());
    for (std::size_t i = 1; i < left.size(); ++i) bps.push_back(pi - left[i]);
    const auto rule = composite_gauss_legendre(bps, mesh_nodes_per_panel);

    const std::size_t n = rule.size();
    mesh->q = rule.nodes;
    mesh->weight = rule.weights;
    mesh->a.resize(n);
    mesh->log_sin_q.resize(n);
    mesh->log_scaled_integral.resize(n);
    parallel_for(n, [&](std::size_t j) {
        const auto ni = cs_normalization_integral(nu, mesh->q[j]);
        mesh->a[j] = ni.a;
        mesh->log_sin_q[j] = std::log(sin_from_wall(mesh->q[j]));
        mesh->log_scaled_integral[j] = ni.log_scaled_integral;
    });
    return mesh;
}

}  // namespace

double QMesh::log_kernel(std::size_t j, double x, double log_sin_x) const {
    return 2.0 * a[j] * (x - q[j]) + (2.0 * nu + 2.0) * (log_sin_x - log_sin_q[j]) - log_scaled_integral[j];
}

std::shared_ptr<const QMesh> q_mesh(double nu) {
    if (!std::isfinite(nu) || nu < 0.0) throw ValidationError("q_mesh: nu must be >= 0");
    static std::mutex mu;
    static std::map<double, std::shared_ptr<const QMesh>> cache;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(nu);
        if (it != cache.end()) return it->second;
    }
    auto mesh = build_mesh(nu);
    std::lock_guard lock(mu);
    return cache.emplace(nu, std::move(mesh)).first->second;
}

namespace {

void check_kernel_x(double x) {
    if (!(x >= kernel_wall_limit && x <= pi - kernel_wall_limit)) {
        std::ostringstream os;
        os << "q-integral at x = " << x << " is unresolved: x must stay at least " << kernel_wall_limit
           << " from the walls";
        throw NumericalError(os.str());
    }
}

// Per-degree mesh weights w_j u(q_j), summed over terms of that degree.
struct MeshSums {
    std::shared_ptr<const QMesh> mesh;
    std::vector<double> w[3];
    bool present[3] = {false, false, false};

    // sum_j w_j e^{log K_j(x)} * factor_j(x)
    template <class Factor>
    double sum(int degree, double x, Factor&& factor) const {
        const auto& wd = w[degree];
        const double ls = std::log(sin_from_wall(x));
        double s = 0.0;
        for (std::size_t j = 0; j < mesh->size(); ++j) {
            if (wd[j] == 0.0) continue;
            const double lk = mesh->log_kernel(j, x, ls);
            if (lk < -745.0) continue;
            s += wd[j] * std::exp(lk) * factor(j);
        }
        return s;
    }
};

std::shared_ptr<MeshSums> mesh_sums(const ClassicalSymbol& symbol, double nu) {
    auto sums = std::make_shared<MeshSums>();
    sums->mesh = q_mesh(nu);
    const auto& m = *sums->mesh;
    for (auto& v : sums->w) v.assign(m.size(), 0.0);
    for (const auto& t : symbol.terms) {
        if (!t.u) throw ValidationError("symbol '" + symbol.name + "' has a term without a q-function");
        if (t.p_degree < 0 || t.p_degree > 2)
            throw ValidationError("symbol '" + symbol.name +
                                  "': only polynomials of degree <= 2 in p can be quantized");
        sums->present[t.p_degree] = true;
        for (std::size_t j = 0; j < m.size(); ++j) sums->w[t.p_degree][j] += m.weight[j] * t.u(m.q[j]);
    }
    return sums;
}

DifferentialForm form_from_sums(std::shared_ptr<const MeshSums> s, double nu) {
    DifferentialForm f;
    const bool has0 = s->present[0];
    const bool has2 = s->present[2];
    if (has0 || has2) {
        f.c0 = [s, nu, has0, has2](double x) {
            double v = 0.0;
            if (has0) v += s->sum(0, x, [](std::size_t) { return 1.0; });
            if (has2) {
                const double sx = sin_from_wall(x);
                const double cot = std::cos(x) / sx;
                const double wall = (nu + 1.0) / (sx * sx);
                v += s->sum(2, x, [&](std::size_t j) {
                    const double g = s->mesh->a[j] + (nu + 1.0) * cot;
                    return wall - g * g;
                });
            }
            return v;
        };
    }
    if (s->present[1]) f.c1 = [s](double x) { return s->sum(1, x, [](std::size_t) { return 1.0; }); };
    if (has2) f.c2 = [s](double x) { return s->sum(2, x, [](std::size_t) { return 1.0; }); };
    return f;
}

int default_matrix_nodes(int nmax) { return std::max(default_basis_nodes, 2 * nmax + 256); }

}  // namespace

double identity_weight(double nu, double x) {
    check_kernel_x(x);
    const auto mesh = q_mesh(nu);
    const double ls = std::log(sin_from_wall(x));
    double s = 0.0;
    for (std::size_t j = 0; j < mesh->size(); ++j) {
        const double lk = mesh->log_kernel(j, x, ls);
        if (lk > -745.0) s += mesh->weight[j] * std::exp(lk);
    }
    return s;
}

ClassicalSymbol ClassicalSymbol::scaled(double factor) const {
    ClassicalSymbol out{name, {}};
    for (const auto& t : terms) {
        auto u = t.u;
        out.terms.push_back({[u, factor](double q) { return factor * u(q); }, t.p_degree});
    }
    std::ostringstream os;
    os << factor << "*(" << name << ")";
    out.name = os.str();
    return out;
}

ClassicalSymbol operator+(const ClassicalSymbol& a, const ClassicalSymbol& b) {
    ClassicalSymbol out{a.name + " + " + b.name, a.terms};
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
}

namespace symbols {

ClassicalSymbol unit() { return {"1", {{[](double) { return 1.0; }, 0}}}; }
ClassicalSymbol position() { return {"q", {{[](double q) { return q; }, 0}}}; }
ClassicalSymbol superpotential(double nu) {
    return {"W(q)", {{[nu](double q) { return -(nu + 1.0) * std::cos(q) / std::sin(q); }, 0}}};
}
ClassicalSymbol inverse_sin_squared() {
    return {"1/sin^2 q", {{[](double q) {
                               const double s = std::sin(q);
                               return 1.0 / (s * s);
                           },
                           0}}};
}
ClassicalSymbol momentum() { return {"p", {{[](double) { return 1.0; }, 1}}}; }
ClassicalSymbol momentum_squared() { return {"p^2", {{[](double) { return 1.0; }, 2}}}; }

ClassicalSymbol classical_hamiltonian(double nu) {
    const double c = (2.0 * nu - 1.0) / (2.0 * nu + 3.0) * (nu + 1.0) * (nu + 1.0);
    auto h = momentum_squared() + inverse_sin_squared().scaled(c);
    h.name = "p^2 + (2nu-1)/(2nu+3) (nu+1)^2 / sin^2 q";
    return h;
}

ClassicalSymbol by_name(const std::string& name, double nu) {
    if (name == "unit" || name == "1") return unit();
    if (name == "position") return position();
    if (name == "superpotential") return superpotential(nu);
    if (name == "inverse_sin_squared" || name == "potential") return inverse_sin_squared();
    if (name == "momentum") return momentum();
    if (name == "momentum_squared") return momentum_squared();
    if (name == "classical_hamiltonian" || name == "hamiltonian") return classical_hamiltonian(nu);
    throw ValidationError("unknown symbol '" + name + "'");
}

}  // namespace symbols

double QuantizedOperator::multiplier(double x) const {
    if (kind != Kind::MultiplierFunction || !form.c0)
        throw ValidationError("operator '" + source + "' is not a multiplication operator");
    return form.c0(x);
}

Eigen::MatrixXcd assemble_matrix(const DifferentialForm& form, double nu, int nmax, int nodes) {
    if (nmax < 0) throw ValidationError("nmax must be >= 0");
    if (nodes <= 0) nodes = default_matrix_nodes(nmax);
    const auto rule = shared_gauss_legendre(nodes, 0.0, pi);
    const auto t = tabulate_basis(nu, nmax, rule, 1);
    const auto m = static_cast<Eigen::Index>(rule->size());
    Eigen::VectorXd w0 = Eigen::VectorXd::Zero(m), w1 = Eigen::VectorXd::Zero(m), w2 = Eigen::VectorXd::Zero(m);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t j) {
        const double x = rule->nodes[j];
        const double w = rule->weights[j];
        if (form.c0) w0[j] = w * form.c0(x);
        if (form.c1) w1[j] = w * form.c1(x);
        if (form.c2) w2[j] = w * form.c2(x);
    });
    Eigen::MatrixXd re = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
    if (form.c0) re += t.values * w0.asDiagonal() * t.values.transpose();
    if (form.c2) re += t.d1 * w2.asDiagonal() * t.d1.transpose();
    if (form.c1) {
        const Eigen::MatrixXd k = t.d1 * w1.asDiagonal() * t.values.transpose();
        im += 0.5 * (k - k.transpose());
    }
    Eigen::MatrixXcd out(nmax + 1, nmax + 1);
    out.real() = re;
    out.imag() = im;
    return out;
}

double hermiticity_defect(const Eigen::MatrixXcd& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

namespace {

OperatorProperties table_properties(const std::string& which) {
    OperatorProperties p;
    p.known = true;
    if (which == "position") {
        p.bounded = true;
        p.self_adjoint = true;
        p.symmetric = true;
    } else if (which == "superpotential" || which == "inverse_sin_squared") {
        p.self_adjoint = true;
        p.symmetric = true;
    } else if (which == "momentum") {
        p.symmetric = true;
        p.note = "symmetric, not self-adjoint on the Dirichlet domain";
    } else if (which == "classical_hamiltonian") {
        p.self_adjoint = true;
        p.symmetric = true;
        p.semi_bounded = true;
        p.note = "self-adjoint for nu >= 1/2";
    } else {
        p.known = false;
    }
    return p;
}

}  // namespace

QuantizedOperator quantize(const ClassicalSymbol& symbol, double nu, int nmax) {
    if (!std::isfinite(nu) || nu < 0.0) throw ValidationError("quantize: nu must be >= 0");
    if (symbol.terms.empty()) throw ValidationError("quantize: symbol '" + symbol.name + "' has no terms");
    const auto sums = mesh_sums(symbol, nu);
    QuantizedOperator op;
    op.nu = nu;
    op.source = symbol.name;
    op.form = form_from_sums(sums, nu);
    const bool multiplier_only = !sums->present[1] && !sums->present[2];
    op.kind = multiplier_only ? QuantizedOperator::Kind::MultiplierFunction : QuantizedOperator::Kind::EigenbasisMatrix;
    if (!multiplier_only) op.matrix = assemble_matrix(op.form, nu, nmax);
    return op;
}

namespace {

QuantizedOperator named_quantization(const std::string& key, double nu, int nmax) {
    auto op = quantize(symbols::by_name(key, nu), nu, nmax);
    op.properties = table_properties(key);
    return op;
}

}  // namespace

QuantizedOperator quantize_position(double nu) { return named_quantization("position", nu, default_nmax); }

namespace operators {

namespace {
QuantizedOperator multiplication(double nu, std::string name, std::function<double(double)> f, const char* key) {
    QuantizedOperator op;
    op.nu = nu;
    op.source = std::move(name);
    op.form.c0 = std::move(f);
    op.properties = table_properties(key);
    return op;
}
}  // namespace

QuantizedOperator position(double nu) { return multiplication(nu, "Q", [](double x) { return x; }, "position"); }

QuantizedOperator superpotential(double nu) {
    return multiplication(nu, "W(Q)", [nu](double x) { return -(nu + 1.0) * std::cos(x) / std::sin(x); },
                          "superpotential");
}

QuantizedOperator inverse_sin_squared(double nu) {
    return multiplication(
        nu, "1/sin^2 Q",
        [](double x) {
            const double s = std::sin(x);
            return 1.0 / (s * s);
        },
        "inverse_sin_squared");
}

QuantizedOperator momentum(double nu, int nmax) {
    QuantizedOperator op;
    op.kind = QuantizedOperator::Kind::EigenbasisMatrix;
    op.nu = nu;
    op.source = "P";
    op.form.c1 = [](double) { return 1.0; };
    op.matrix = momentum_matrix(nu, nmax, default_matrix_nodes(nmax));
    op.properties = table_properties("momentum");
    return op;
}

QuantizedOperator kinetic(double nu, int nmax) {
    QuantizedOperator op;
    op.kind = QuantizedOperator::Kind::EigenbasisMatrix;
    op.nu = nu;
    op.source = "P^2/2m";
    op.form.c2 = [](double) { return 1.0; };
    op.matrix = assemble_matrix(op.form, nu, nmax);
    op.properties.known = true;
    op.properties.semi_bounded = true;
    op.properties.symmetric = true;
    return op;
}

}  // namespace operators

namespace {

double form_expectation(const DifferentialForm& form, const CoherentState& cs, const QuadratureRule& rule) {
    double s = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double x = rule.nodes[j];
        const auto J = cs.jet(x);
        double v = 0.0;
        if (form.c0) v += form.c0(x) * std::norm(J.value);
        if (form.c1) v += form.c1(x) * (std::conj(J.value) * std::complex<double>(0.0, -1.0) * J.d1).real();
        if (form.c2) v += form.c2(x) * std::norm(J.d1);
        s += rule.weights[j] * v;
    }
    return s;
}

}  // namespace

LowerSymbol lower_symbol(const QuantizedOperator& op, double q, double p) {
    if (!op.form.c0 && !op.form.c1 && !op.form.c2) return lower_symbol_by_contraction(op, q, p);
    const CoherentState cs({q, p, op.nu});
    const auto bps = peak_breakpoints(op.nu, q);
    const double coarse = form_expectation(op.form, cs, composite_gauss_legendre(bps, 40));
    const double fine = form_expectation(op.form, cs, composite_gauss_legendre(bps, 80));
    LowerSymbol out;
    out.value = fine;
    out.error_bar = std::abs(fine - coarse);
    out.method = "x-quadrature";
    out.truncation_dominated = false;
    return out;
}

LowerSymbol lower_symbol_by_contraction(const QuantizedOperator& op, double q, double p) {
    Eigen::MatrixXcd m = op.matrix;
    if (m.size() == 0) m = assemble_matrix(op.form, op.nu, default_nmax);
    const int nmax = static_cast<int>(m.rows()) - 1;
    const auto c = cs_coefficients(CoherentState({q, p, op.nu}), nmax, op.nu);
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(c.coeffs.data(), nmax + 1);
    LowerSymbol out;
    out.value = v.dot(m * v);
    const double tm = std::max(0.0, c.truncation_mass);
    out.error_bar = tm * m.diagonal().cwiseAbs().maxCoeff() + std::sqrt(tm) * (m * v).norm();
    out.method = "coefficient contraction";
    out.truncation_dominated = out.error_bar > 1e-6 * std::max(1.0, std::abs(out.value));
    return out;
}

namespace lower_symbols {

double position(double nu, double q) {
    const auto ni = cs_normalization_integral(nu, q);
    const double a = ni.a;
    const double log_sq = std::log(std::sin(q));
    const double k = 2.0 * nu + 2.0;
    auto integrand = [&](double x) {
        const double s = std::sin(x);
        if (!(s > 0.0)) return 0.0;
        return x * std::exp(2.0 * a * (x - q) + k * (std::log(s) - log_sq));
    };
    AdaptiveOptions opts;
    opts.rel_tol = 1e-14;
    const auto r = integrate_adaptive(integrand, peak_breakpoints(nu, q), opts);
    if (!r.converged) throw NumericalError("position lower-symbol integral did not converge");
    return r.value * std::exp(-ni.log_scaled_integral);
}

double momentum(double p) { return p; }

double superpotential(double nu, double q) { return -(nu + 1.0) * std::cos(q) / std::sin(q); }

double inverse_sin_squared(double nu, double q) {
    const double s = std::sin(q);
    return (2.0 * nu + 2.0) / (2.0 * nu + 1.0) / (s * s);
}

double kinetic(double nu, double q, double p) {
    const double s = std::sin(q);
    return p * p + (nu + 1.0) * (nu + 1.0) / ((2.0 * nu + 1.0) * s * s);
}

}  // namespace lower_symbols

namespace multipliers {

double inverse_sin_squared(double nu, double x) {
    const double s = std::sin(x);
    return (2.0 * nu + 3.0) / (2.0 * nu + 2.0) / (s * s);
}

}  // namespace multipliers

Eigen::MatrixXd resolution_matrix(double nu, int nmax, int nodes) {
    DifferentialForm f;
    f.c0 = [nu](double x) { return identity_weight(nu, x); };
    return assemble_matrix(f, nu, nmax, nodes).real();
}

}  // namespace ptcs
