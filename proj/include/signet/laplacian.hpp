#pragma once

#include <optional>

#include "signet/graph.hpp"
#include "signet/matrix.hpp"

namespace signet {

enum class Rule { Opposing, Repelling };

const char* rule_name(Rule r);

/// Coupling parameters of the interaction rules. alpha acts on positive
/// edges, beta on negative ones; bound_A enables the projected (clamped)
/// state dynamics.
struct DynamicsConfig {
    Rule rule = Rule::Opposing;
    double alpha = 0.1;
    double beta = 0.1;
    std::optional<double> bound_A;

    /// Discrete-time updates need alpha in (0,1); the continuous-time flows
    /// only need alpha > 0.
    void validate(bool discrete = true) const;
};

/// All degree/adjacency/Laplacian variants of one signed graph.
/// Entries are weighted; directed graphs collect in-neighbors per row.
struct MatrixBundle {
    Matrix D_plus;
    Matrix D_minus;
    Matrix A_plus;
    Matrix A_minus;   // entries <= 0
    Matrix L_plus;    // D+ - A+
    Matrix L_minus_o; // D- - A-   (opposing)
    Matrix L_minus_r; // -D- - A-  (repelling)
};

MatrixBundle build_matrices(const SignedGraph& g);

/// One-step update matrix: I - alpha*L+ - beta*L-o (Opposing) or
/// I - alpha*L+ - beta*L-r (Repelling).
Matrix update_matrix(const SignedGraph& g, const DynamicsConfig& cfg);

/// Signed-Laplacian quadratic form evaluated as the explicit edge sum:
/// sum_{E+} w(xi-xj)^2 + sum_{E-} w(xi+xj)^2 for Opposing, and
/// sum_{E+} w(xi-xj)^2 - sum_{E-} w(xi-xj)^2 for Repelling.
double quadratic_form(const SignedGraph& g, Rule rule, const Vector& x);

struct ProbabilisticLaplacians {
    Matrix L_p_plus;    // standard weighted Laplacian of G+ with weights p_ij
    Matrix L_po_minus;  // opposing variant on G-: off-diagonal +p, diagonal +sum p
    Matrix L_pr_minus;  // repelling variant on G-: off-diagonal +p, diagonal -sum p
};

/// mu maps each edge (in g.edges() order) to its selection probability;
/// entries must be positive and sum to 1.
ProbabilisticLaplacians probabilistic_laplacians(const SignedGraph& g, const Vector& mu);

/// E[W_t^2] for one random pairwise interaction:
///   Opposing          -> I - 2a(1-a) Lp+ - 2b(1-b) Lpo-
///   Opposing, gauged  -> I - 2a(1-a) Lp+ + 2b(1-b) Lpr-   (balanced graphs)
///   Repelling         -> I - 2a(1-a) Lp+ - 2b(1+b) Lpr-
/// with a = alpha, b = beta.
Matrix expected_second_moment(const SignedGraph& g, const DynamicsConfig& cfg, const Vector& mu,
                              bool gauge_conjugated = false);

/// Per-edge probabilities mu({i,j}) = (1/deg_i + 1/deg_j)/n of the random
/// pair-selection process, in g.edges() order.
Vector pair_selection_mu(const SignedGraph& g);

/// Equal probability 1/|E| per edge.
Vector uniform_mu(const SignedGraph& g);

}  // namespace signet
