#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signet/graph.hpp"
#include "signet/laplacian.hpp"
#include "signet/matrix.hpp"

namespace signet {

/// Time-indexed node states plus the per-step diagnostics used by the
/// convergence analyses: h(t) = max_i |x_i|, spread = max_ij |x_i - x_j|,
/// and the Euclidean norm.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;  // one row per recorded time
    std::vector<double> h;
    std::vector<double> spread;
    std::vector<double> norm;
    /// Step at which the run stopped early, when it did.
    std::optional<std::size_t> stopped_at;
    /// Set when the run tripped the divergence guard (norm or spread beyond
    /// the configured threshold).
    bool diverged = false;

    const Vector& terminal_state() const { return states.back(); }

    /// CSV with header t,x1,...,xn,h,spread,norm (17 significant digits).
    std::string to_csv() const;
};

enum class LimitKind {
    BipartiteConsensus,
    ZeroConsensus,
    AverageConsensus,
    WeightedConsensus,
    Divergent,
    Unknown,
};

const char* limit_kind_name(LimitKind k);

struct LimitPrediction {
    LimitKind kind = LimitKind::Unknown;
    std::optional<Vector> limit;        // per-node asymptotic values
    std::optional<Vector> left_vector;  // consensus weights when they matter
    std::string reason;                 // set when kind == Unknown
    std::vector<std::string> warnings;

    std::string to_key_value() const;
    std::string to_json() const;
};

struct SimulateOptions {
    /// Record every k-th step (plus the first and last). 1 keeps everything.
    std::size_t record_every = 1;
    /// Optional limit to measure against; enables the distance-based stop.
    std::optional<Vector> prediction;
    double stop_tol = 0.0;  // distance-to-prediction stop threshold (0 = off)
    /// Norm/spread beyond which the run is declared divergent and stopped.
    double divergence_threshold = 1e9;
};

/// Discrete-time simulation x(t+1) = U x(t) with U = update_matrix(g, cfg).
Trajectory simulate(const SignedGraph& g, const DynamicsConfig& cfg, const Vector& x0,
                    std::size_t steps, const SimulateOptions& opts = {});

/// Closed-form asymptotic limit per the convergence theory; kind Unknown
/// (with a reason) when the parameters fall outside every proven regime.
LimitPrediction predict_limit(const SignedGraph& g, const DynamicsConfig& cfg, const Vector& x0);

struct SwitchingResult {
    Trajectory trajectory;
    /// True when all |x_i| agree within tol at the horizon.
    bool modulus_consensus = false;
    double consensus_value = 0.0;  // estimated common |x_i| (valid when consensus)
    double modulus_spread = 0.0;   // max_i |x_i| - min_i |x_i| at the horizon
};

/// Time-varying opposing dynamics over a periodically repeated graph
/// sequence. Validates alpha*|N+| + beta*|N-| <= 1 - delta at every step.
SwitchingResult simulate_switching(const std::vector<SignedGraph>& graph_sequence,
                                   const DynamicsConfig& cfg, const Vector& x0, std::size_t steps,
                                   double delta, double tol = 1e-6);

struct ContinuousOptions {
    std::size_t record_points = 200;  // sampling resolution of the output
    /// Forces the Runge-Kutta path even for undirected (symmetric) systems.
    bool force_rk4 = false;
};

/// Continuous-time flow dx/dt = -L x with L the weighted opposing or
/// repelling Laplacian. Undirected systems integrate exactly through the
/// eigendecomposition; directed ones use classical fixed-step RK4.
Trajectory simulate_continuous(const SignedGraph& g, const DynamicsConfig& cfg, const Vector& x0,
                               double t_end, double dt, const ContinuousOptions& opts = {});

/// True when the union graph over every window of `window_T + 1` consecutive
/// steps of the (periodically repeated) sequence is connected — strongly
/// connected when the graphs are directed.
bool check_joint_connectivity(const std::vector<SignedGraph>& graph_sequence, std::size_t window_T,
                              bool periodic = true);

}  // namespace signet
