#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "signet/dynamics.hpp"
#include "signet/graph.hpp"
#include "signet/laplacian.hpp"
#include "signet/matrix.hpp"
#include "signet/rng.hpp"

namespace signet {

/// Randomized pairwise interaction process: at each event one edge is drawn
/// with probability (1/deg_i + 1/deg_j)/n and only its endpoints update.
/// Sampling is inverse-CDF over the sorted edge table, so a (seed, graph)
/// pair reproduces the exact same event sequence on every platform.
class GossipProcess {
public:
    GossipProcess(SignedGraph graph, std::uint64_t seed);

    const SignedGraph& graph() const noexcept { return graph_; }
    const Vector& mu() const noexcept { return mu_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Draws one edge index (into graph().edges()) and advances the rng.
    std::size_t sample_pair_index();
    const SignedEdge& sample_pair() { return graph_.edges()[sample_pair_index()]; }

private:
    SignedGraph graph_;
    Vector mu_;
    Vector cumulative_;
    std::uint64_t seed_;
    SplitMix64 rng_;
};

/// One pairwise update. Only x[u-1] and x[v-1] change; when cfg.bound_A is
/// set both updated endpoints are clamped into [-A, A] afterwards.
void gossip_step(Vector& x, int u, int v, int sign, const DynamicsConfig& cfg);

struct GossipMonitorConfig {
    bool enabled = true;
    std::size_t record_states_every = 0;  // 0: keep only first and last state rows
    std::size_t record_v_every = 0;       // 0: off; k: V(t) every k events (plus t=0)
    std::optional<Vector> prediction;     // limit for V(t) = ||x - limit||^2
    /// Lyapunov-style alternative when no prediction is given:
    /// gauge set   -> V = ||(I-J)Kx||^2, else V = ||(I-J)x||^2.
    std::optional<std::vector<int>> gauge;
    double touch_eps_rel = 1e-6;    // boundary touch zone, relative to A
    double cluster_tol_rel = 1e-6;  // settle zone, relative to A
};

/// Streaming statistics accumulated during a run. Magnitudes are tracked in
/// log scale so diverging (unbounded) runs survive arbitrarily long horizons:
/// states are rescaled once they exceed 1e100 and `scale_log` keeps the
/// cumulative factor.
struct GossipMonitors {
    bool enabled = false;
    std::size_t horizon = 0;
    double scale_log = 0.0;
    double max_log_h = -std::numeric_limits<double>::infinity();
    Vector terminal_scaled;  // terminal state before undoing the rescale

    std::vector<double> v_times;
    Vector v_curve;  // true-scale values (may saturate to inf for divergent runs)

    std::vector<long> touches_minus;  // entries into the -A touch zone, per node
    std::vector<long> touches_plus;

    std::vector<int> settle_label;              // -1 / 0 / +1 per node at the horizon
    std::vector<std::size_t> settle_last_move;  // last event the label changed

    long magnitude_bound_violations = 0;
    bool magnitude_bound_tracked = false;

    std::vector<double> max_log_abs;               // per node, opposing no-survivor
    std::vector<std::vector<double>> max_log_gap;  // per pair, repelling no-survivor

    /// True terminal state; entries saturate to +/-inf if a diverging run
    /// outran double range.
    Vector terminal_state() const;
    double max_h() const;  // sup_t h(t), true scale (may be inf)
};

struct GossipRunResult {
    Trajectory trajectory;  // downsampled per record_states_every
    GossipMonitors monitors;
};

GossipRunResult run_trajectory(GossipProcess& process, const DynamicsConfig& cfg, const Vector& x0,
                               std::size_t horizon, const GossipMonitorConfig& mc = {});

enum class OutcomeClass {
    BipartiteConsensus,
    ZeroConsensus,
    AverageConsensus,
    BoundaryClustering,
    Oscillating,
    Diverging,
    Undecided,
};

const char* outcome_class_name(OutcomeClass c);

struct Outcome {
    OutcomeClass cls = OutcomeClass::Undecided;
    /// Boundary label (+1 -> +A, -1 -> -A) per partition group when
    /// cls == BoundaryClustering.
    std::vector<int> group_labels;
};

struct ClassifyContext {
    std::optional<LimitPrediction> prediction;
    std::optional<std::vector<std::vector<int>>> partition;
    std::optional<double> bound_A;
    double class_tol = 1e-3;  // terminal-state tolerance for consensus classes
    double cluster_tol_rel = 1e-6;
    double settle_fraction = 0.2;
    int k_touch = 2;
    double diverge_threshold = 1e6;
};

Outcome classify_outcome(const GossipRunResult& run, const ClassifyContext& ctx);

/// Convergence-theory limit for the randomized process; Unknown outside the
/// proven regimes (large beta, projected dynamics, ...).
LimitPrediction gossip_predict_limit(const SignedGraph& g, const DynamicsConfig& cfg,
                                     const Vector& x0);

struct X0Spec {
    static X0Spec fixed(Vector v);
    static X0Spec uniform(double lo, double hi, std::optional<std::uint64_t> seed = {});

    bool is_fixed = true;
    Vector value;
    double lo = -1.0, hi = 1.0;
    /// Base seed for the per-run draws; derived from the master seed when absent.
    std::optional<std::uint64_t> seed;

    Vector realize(std::size_t n, SplitMix64& rng) const;
    std::string describe() const;
};

struct MonteCarloOptions {
    std::size_t runs = 100;
    std::size_t horizon = 10000;
    std::uint64_t seed = 1;
    ClassifyContext context;
    /// Compute the per-run prediction from gossip_predict_limit (needed when
    /// x0 is random); otherwise context.prediction is used as-is.
    bool auto_predict = true;
    std::size_t mse_points = 1000;
};

struct MonteCarloSummary {
    std::size_t runs = 0;
    std::size_t horizon = 0;
    std::uint64_t seed = 0;
    std::string rule;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> bound_A;
    std::string x0_description;
    std::map<std::string, int> verdicts;
    std::vector<Outcome> outcomes;         // per run, in run order
    std::vector<Vector> terminal_states;   // per run
    std::vector<double> mse_times;
    Vector mse_curve;  // ensemble average of ||x(t) - limit||^2
    std::vector<long> touches_minus;  // summed over runs, per node
    std::vector<long> touches_plus;
    long magnitude_bound_violations = 0;
    /// Runs classified Diverging, and how many of those saw every node
    /// magnitude (opposing) or every pairwise gap (repelling) exceed 1e3.
    int diverging_runs = 0;
    int no_survivor_confirmed = 0;

    int count(OutcomeClass c) const;
    std::string to_json() const;
};

MonteCarloSummary monte_carlo(const SignedGraph& g, const DynamicsConfig& cfg, const X0Spec& x0_spec,
                              const MonteCarloOptions& opts);

struct EmpiricalMoment {
    Matrix mean;
    Matrix standard_error;
    std::size_t samples = 0;
};

/// Averages realized one-step matrices W_t^2 (optionally gauge-conjugated)
/// over i.i.d. pair draws; the Monte Carlo counterpart of
/// expected_second_moment().
EmpiricalMoment empirical_second_moment(GossipProcess& process, const DynamicsConfig& cfg,
                                        std::size_t samples, bool gauge_conjugated = false);

/// Sure-event lower bound on the max magnitude: counts events with
/// h(t+1) < c h(t) - 1e-12, c = min{|2 alpha - 1|, 1/2}. The contract is a
/// zero count. Requires opposing rule, alpha != 1/2, beta >= 3.
long magnitude_bound_violations(const GossipRunResult& run, const DynamicsConfig& cfg);

/// The sure-event magnitude-floor constant min{|2 alpha - 1|, 1/2}.
double magnitude_bound_constant(double alpha);

}  // namespace signet
