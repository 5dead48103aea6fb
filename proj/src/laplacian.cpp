#include "signet/laplacian.hpp"

#include <cmath>
#include <string>

#include "signet/error.hpp"

namespace signet {

const char* rule_name(Rule r) { return r == Rule::Opposing ? "opposing" : "repelling"; }

void DynamicsConfig::validate(bool discrete) const {
    if (discrete) {
        if (!(alpha > 0.0 && alpha < 1.0))
            raise(ErrorCode::ParameterRangeViolation, "alpha must lie in (0,1), got " + std::to_string(alpha));
    } else if (!(alpha > 0.0)) {
        raise(ErrorCode::ParameterRangeViolation, "alpha must be positive, got " + std::to_string(alpha));
    }
    if (!(beta >= 0.0))
        raise(ErrorCode::ParameterRangeViolation, "beta must be nonnegative, got " + std::to_string(beta));
    if (bound_A && !(*bound_A > 0.0))
        raise(ErrorCode::ParameterRangeViolation, "bound_A must be positive");
}

MatrixBundle build_matrices(const SignedGraph& g) {
    const auto n = static_cast<std::size_t>(g.n());
    MatrixBundle b{Matrix(n, n), Matrix(n, n), Matrix(n, n), Matrix(n, n),
                   Matrix(n, n), Matrix(n, n), Matrix(n, n)};

    auto add = [&b](std::size_t row, std::size_t col, int sign, double w) {
        if (sign > 0) {
            b.A_plus(row, col) += w;
            b.D_plus(row, row) += w;
        } else {
            b.A_minus(row, col) -= w;
            b.D_minus(row, row) += w;
        }
    };

    for (const SignedEdge& e : g.edges()) {
        const auto u = static_cast<std::size_t>(e.u - 1);
        const auto v = static_cast<std::size_t>(e.v - 1);
        if (g.directed()) {
            // Row v collects its in-neighbor u.
            add(v, u, e.sign, e.weight);
        } else {
            add(u, v, e.sign, e.weight);
            add(v, u, e.sign, e.weight);
        }
    }

    b.L_plus = b.D_plus - b.A_plus;
    b.L_minus_o = b.D_minus - b.A_minus;
    b.L_minus_r = (b.D_minus * -1.0) - b.A_minus;
    return b;
}

Matrix update_matrix(const SignedGraph& g, const DynamicsConfig& cfg) {
    cfg.validate();
    const MatrixBundle b = build_matrices(g);
    Matrix u = Matrix::identity(static_cast<std::size_t>(g.n()));
    u -= cfg.alpha * b.L_plus;
    if (cfg.rule == Rule::Opposing)
        u -= cfg.beta * b.L_minus_o;
    else
        u -= cfg.beta * b.L_minus_r;
    return u;
}

double quadratic_form(const SignedGraph& g, Rule rule, const Vector& x) {
    if (g.directed())
        raise(ErrorCode::DirectedGraphUnsupported, "quadratic forms are defined for undirected graphs");
    if (x.size() != static_cast<std::size_t>(g.n()))
        raise(ErrorCode::Precondition, "state vector length does not match node count");

    double value = 0.0;
    for (const SignedEdge& e : g.edges()) {
        const double xu = x[e.u - 1];
        const double xv = x[e.v - 1];
        if (e.sign > 0) {
            value += e.weight * (xu - xv) * (xu - xv);
        } else if (rule == Rule::Opposing) {
            value += e.weight * (xu + xv) * (xu + xv);
        } else {
            value -= e.weight * (xu - xv) * (xu - xv);
        }
    }
    return value;
}

namespace {

void check_mu(const SignedGraph& g, const Vector& mu) {
    if (mu.size() != g.edges().size())
        raise(ErrorCode::ProbabilityNotNormalized, "mu must assign one probability per edge");
    double sum = 0.0;
    for (double p : mu) {
        if (!(p > 0.0)) raise(ErrorCode::ProbabilityNotNormalized, "mu entries must be positive");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        raise(ErrorCode::ProbabilityNotNormalized, "mu sums to " + std::to_string(sum) + ", expected 1");
}

}  // namespace

ProbabilisticLaplacians probabilistic_laplacians(const SignedGraph& g, const Vector& mu) {
    check_mu(g, mu);
    const auto n = static_cast<std::size_t>(g.n());
    ProbabilisticLaplacians out{Matrix(n, n), Matrix(n, n), Matrix(n, n)};

    const auto& edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const SignedEdge& e = edges[k];
        const double p = mu[k];
        const auto u = static_cast<std::size_t>(e.u - 1);
        const auto v = static_cast<std::size_t>(e.v - 1);
        if (e.sign > 0) {
            out.L_p_plus(u, v) -= p;
            out.L_p_plus(v, u) -= p;
            out.L_p_plus(u, u) += p;
            out.L_p_plus(v, v) += p;
        } else {
            out.L_po_minus(u, v) += p;
            out.L_po_minus(v, u) += p;
            out.L_po_minus(u, u) += p;
            out.L_po_minus(v, v) += p;

            out.L_pr_minus(u, v) += p;
            out.L_pr_minus(v, u) += p;
            out.L_pr_minus(u, u) -= p;
            out.L_pr_minus(v, v) -= p;
        }
    }
    return out;
}

Matrix expected_second_moment(const SignedGraph& g, const DynamicsConfig& cfg, const Vector& mu,
                              bool gauge_conjugated) {
    cfg.validate();
    const ProbabilisticLaplacians lap = probabilistic_laplacians(g, mu);
    const double a = 2.0 * cfg.alpha * (1.0 - cfg.alpha);

    Matrix m = Matrix::identity(static_cast<std::size_t>(g.n()));
    m -= a * lap.L_p_plus;

    if (cfg.rule == Rule::Opposing) {
        const double b = 2.0 * cfg.beta * (1.0 - cfg.beta);
        if (gauge_conjugated) {
            if (!check_structural_balance(g).balanced())
                raise(ErrorCode::GaugeRequestedOnUnbalancedGraph,
                      "gauge form of the second moment needs a structurally balanced graph");
            m += b * lap.L_pr_minus;
        } else {
            m -= b * lap.L_po_minus;
        }
    } else {
        if (gauge_conjugated)
            raise(ErrorCode::Precondition, "gauge form applies to the opposing rule only");
        const double b = 2.0 * cfg.beta * (1.0 + cfg.beta);
        m -= b * lap.L_pr_minus;
    }
    return m;
}

Vector pair_selection_mu(const SignedGraph& g) {
    if (g.directed())
        raise(ErrorCode::DirectedGraphUnsupported, "pair selection is defined on undirected graphs");
    const auto& deg = g.diagnostics().degrees;
    Vector mu;
    mu.reserve(g.edges().size());
    for (const SignedEdge& e : g.edges()) {
        const int du = deg[e.u - 1].total;
        const int dv = deg[e.v - 1].total;
        if (du == 0 || dv == 0)
            raise(ErrorCode::Precondition, "pair selection needs every node to have a neighbor");
        mu.push_back((1.0 / du + 1.0 / dv) / g.n());
    }
    return mu;
}

Vector uniform_mu(const SignedGraph& g) {
    if (g.edges().empty()) raise(ErrorCode::Precondition, "graph has no edges");
    return Vector(g.edges().size(), 1.0 / static_cast<double>(g.edges().size()));
}

}  // namespace signet
