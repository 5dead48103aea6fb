#include "signet/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "signet/error.hpp"
#include "signet/spectral.hpp"

namespace signet {

namespace {

constexpr double kRescaleThreshold = 1e100;
constexpr double kNoSurvivorBar = 1e3;

double spread_of(const Vector& x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

double safe_exp(double log_value) {
    if (log_value > 709.0) return std::numeric_limits<double>::infinity();
    return std::exp(log_value);
}

}  // namespace

GossipProcess::GossipProcess(SignedGraph graph, std::uint64_t seed)
    : graph_(std::move(graph)), seed_(seed), rng_(seed) {
    if (graph_.directed())
        raise(ErrorCode::DirectedGraphUnsupported, "the pairwise process runs on undirected graphs");
    mu_ = pair_selection_mu(graph_);
    cumulative_.reserve(mu_.size());
    double acc = 0.0;
    for (double p : mu_) {
        acc += p;
        cumulative_.push_back(acc);
    }
    if (std::fabs(acc - 1.0) > 1e-14)
        raise(ErrorCode::ProbabilityNotNormalized,
              "pair selection probabilities sum to " + std::to_string(acc));
}

std::size_t GossipProcess::sample_pair_index() {
    const double u = rng_.next_double();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
    if (idx >= mu_.size()) idx = mu_.size() - 1;
    return idx;
}

void gossip_step(Vector& x, int u, int v, int sign, const DynamicsConfig& cfg) {
    double& xu = x[u - 1];
    double& xv = x[v - 1];
    const double a = xu, b = xv;
    if (sign > 0) {
        xu = (1.0 - cfg.alpha) * a + cfg.alpha * b;
        xv = (1.0 - cfg.alpha) * b + cfg.alpha * a;
    } else if (cfg.rule == Rule::Opposing) {
        xu = (1.0 - cfg.beta) * a - cfg.beta * b;
        xv = (1.0 - cfg.beta) * b - cfg.beta * a;
    } else {
        xu = (1.0 + cfg.beta) * a - cfg.beta * b;
        xv = (1.0 + cfg.beta) * b - cfg.beta * a;
    }
    if (cfg.bound_A) {
        const double bound = *cfg.bound_A;
        xu = std::clamp(xu, -bound, bound);
        xv = std::clamp(xv, -bound, bound);
    }
}

Vector GossipMonitors::terminal_state() const {
    Vector out = terminal_scaled;
    if (scale_log != 0.0) {
        for (double& v : out) {
            const double mag = safe_exp(std::log(std::fabs(v)) + scale_log);
            v = std::copysign(mag, v);
        }
    }
    return out;
}

double GossipMonitors::max_h() const { return safe_exp(max_log_h); }

GossipRunResult run_trajectory(GossipProcess& process, const DynamicsConfig& cfg, const Vector& x0,
                               std::size_t horizon, const GossipMonitorConfig& mc) {
    cfg.validate();
    if (horizon < 1) raise(ErrorCode::Precondition, "horizon must be at least 1");
    const SignedGraph& g = process.graph();
    const std::size_t n = static_cast<std::size_t>(g.n());
    if (x0.size() != n) raise(ErrorCode::Precondition, "initial state length does not match node count");
    if (cfg.bound_A) {
        for (double v : x0)
            if (std::fabs(v) > *cfg.bound_A)
                raise(ErrorCode::ParameterRangeViolation, "initial state outside [-A, A]");
    }

    GossipRunResult result;
    GossipMonitors& mon = result.monitors;
    mon.enabled = mc.enabled;
    mon.horizon = horizon;

    Vector x = x0;
    const bool bounded = cfg.bound_A.has_value();
    const double bound = bounded ? *cfg.bound_A : 0.0;
    const double touch_eps = bounded ? mc.touch_eps_rel * bound : 0.0;
    const double cluster_tol = bounded ? mc.cluster_tol_rel * bound : 0.0;

    const bool repelling = cfg.rule == Rule::Repelling;
    const double magnitude_bound_c = magnitude_bound_constant(cfg.alpha);
    const bool track_magnitude_bound =
        mc.enabled && cfg.rule == Rule::Opposing && !bounded && cfg.alpha != 0.5;
    mon.magnitude_bound_tracked = track_magnitude_bound;

    if (mc.enabled) {
        mon.touches_minus.assign(n, 0);
        mon.touches_plus.assign(n, 0);
        mon.settle_label.assign(n, 0);
        mon.settle_last_move.assign(n, 0);
        mon.max_log_abs.assign(n, -std::numeric_limits<double>::infinity());
        if (repelling) mon.max_log_gap.assign(n, Vector(n, -std::numeric_limits<double>::infinity()));
    }

    std::vector<char> in_plus(n, 0), in_minus(n, 0);

    auto log_abs = [](double v) {
        const double a = std::fabs(v);
        return a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
    };

    auto note_node = [&](std::size_t i, std::size_t t) {
        mon.max_log_abs[i] = std::max(mon.max_log_abs[i], log_abs(x[i]) + mon.scale_log);
        if (repelling) {
            for (std::size_t m = 0; m < n; ++m) {
                if (m == i) continue;
                const double gap = log_abs(x[i] - x[m]) + mon.scale_log;
                if (gap > mon.max_log_gap[i][m]) {
                    mon.max_log_gap[i][m] = gap;
                    mon.max_log_gap[m][i] = gap;
                }
            }
        }
        if (bounded) {
            const bool plus_now = x[i] >= bound - touch_eps;
            const bool minus_now = x[i] <= -bound + touch_eps;
            if (plus_now && !in_plus[i]) ++mon.touches_plus[i];
            if (minus_now && !in_minus[i]) ++mon.touches_minus[i];
            in_plus[i] = plus_now;
            in_minus[i] = minus_now;

            const int label = x[i] >= bound - cluster_tol ? +1 : (x[i] <= -bound + cluster_tol ? -1 : 0);
            if (label != mon.settle_label[i]) {
                mon.settle_label[i] = label;
                mon.settle_last_move[i] = t;
            }
        }
    };

    auto record_v = [&](std::size_t t) {
        if (mc.record_v_every == 0) return;
        if (t % mc.record_v_every != 0 && t != horizon) return;
        double v = 0.0;
        if (mc.prediction) {
            for (std::size_t i = 0; i < n; ++i) {
                const double d = x[i] - (*mc.prediction)[i];
                v += d * d;
            }
        } else {
            // Projected (optionally gauge-flipped) squared deviation from
            // the mean: ||(I-J)Kx||^2.
            double mean = 0.0;
            Vector z(n);
            for (std::size_t i = 0; i < n; ++i) {
                z[i] = mc.gauge ? (*mc.gauge)[i] * x[i] : x[i];
                mean += z[i];
            }
            mean /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) v += (z[i] - mean) * (z[i] - mean);
        }
        const double log_v = v > 0.0 ? std::log(v) + 2.0 * mon.scale_log : -std::numeric_limits<double>::infinity();
        mon.v_times.push_back(static_cast<double>(t));
        mon.v_curve.push_back(v > 0.0 ? safe_exp(log_v) : 0.0);
    };

    auto h_of = [&]() { return norm_inf(x); };

    Trajectory& traj = result.trajectory;
    auto record_state = [&](std::size_t t) {
        traj.times.push_back(static_cast<double>(t));
        Vector row = x;
        if (mon.scale_log != 0.0)
            for (double& v : row) v = std::copysign(safe_exp(log_abs(v) + mon.scale_log), v);
        traj.h.push_back(safe_exp(log_abs(norm_inf(x)) + mon.scale_log));
        traj.spread.push_back(safe_exp(log_abs(spread_of(x)) + mon.scale_log));
        traj.norm.push_back(safe_exp(log_abs(norm2(x)) + mon.scale_log));
        traj.states.push_back(std::move(row));
    };

    if (mc.enabled) {
        for (std::size_t i = 0; i < n; ++i) note_node(i, 0);
        mon.max_log_h = log_abs(h_of());
        record_v(0);
    }
    record_state(0);

    double h_prev = h_of();
    for (std::size_t t = 1; t <= horizon; ++t) {
        const SignedEdge& e = process.graph().edges()[process.sample_pair_index()];
        gossip_step(x, e.u, e.v, e.sign, cfg);

        if (mc.enabled) {
            const double h_now = h_of();
            if (track_magnitude_bound && cfg.beta >= 3.0) {
                if (h_now < magnitude_bound_c * h_prev - 1e-12) ++mon.magnitude_bound_violations;
            }
            note_node(static_cast<std::size_t>(e.u - 1), t);
            note_node(static_cast<std::size_t>(e.v - 1), t);
            mon.max_log_h = std::max(mon.max_log_h, log_abs(h_now) + mon.scale_log);
            record_v(t);
            h_prev = h_now;
        } else {
            h_prev = h_of();
        }

        if (!bounded && h_prev > kRescaleThreshold) {
            // Linear dynamics: dividing every state by h preserves the whole
            // future trajectory up to the recorded scale offset.
            mon.scale_log += std::log(h_prev);
            for (double& v : x) v /= h_prev;
            h_prev = h_of();
        }

        if (mc.record_states_every != 0 && (t % mc.record_states_every == 0) && t != horizon)
            record_state(t);
        if (t == horizon) record_state(t);
    }

    mon.terminal_scaled = x;
    return result;
}

const char* outcome_class_name(OutcomeClass c) {
    switch (c) {
        case OutcomeClass::BipartiteConsensus: return "BipartiteConsensus";
        case OutcomeClass::ZeroConsensus: return "ZeroConsensus";
        case OutcomeClass::AverageConsensus: return "AverageConsensus";
        case OutcomeClass::BoundaryClustering: return "BoundaryClustering";
        case OutcomeClass::Oscillating: return "Oscillating";
        case OutcomeClass::Diverging: return "Diverging";
        case OutcomeClass::Undecided: return "Undecided";
    }
    return "Undecided";
}

Outcome classify_outcome(const GossipRunResult& run, const ClassifyContext& ctx) {
    if (!run.monitors.enabled)
        raise(ErrorCode::MonitorsMissing, "classification needs a monitored trajectory");
    const GossipMonitors& mon = run.monitors;
    Outcome out;

    if (mon.max_h() > ctx.diverge_threshold) {
        out.cls = OutcomeClass::Diverging;
        return out;
    }

    const Vector terminal = mon.terminal_state();
    const std::size_t n = terminal.size();

    if (ctx.prediction && ctx.prediction->limit) {
        double dist = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            dist = std::max(dist, std::fabs(terminal[i] - (*ctx.prediction->limit)[i]));
        if (dist <= ctx.class_tol) {
            switch (ctx.prediction->kind) {
                case LimitKind::BipartiteConsensus:
                    out.cls = OutcomeClass::BipartiteConsensus;
                    return out;
                case LimitKind::ZeroConsensus:
                    out.cls = OutcomeClass::ZeroConsensus;
                    return out;
                case LimitKind::AverageConsensus:
                case LimitKind::WeightedConsensus:
                    out.cls = OutcomeClass::AverageConsensus;
                    return out;
                default:
                    break;
            }
        }
    }

    if (ctx.bound_A && ctx.partition) {
        const double settle_deadline =
            (1.0 - ctx.settle_fraction) * static_cast<double>(mon.horizon);
        bool settled = true;
        for (std::size_t i = 0; i < n && settled; ++i) {
            if (mon.settle_label[i] == 0 ||
                static_cast<double>(mon.settle_last_move[i]) > settle_deadline)
                settled = false;
        }
        if (settled) {
            bool consistent = true;
            std::vector<int> labels;
            for (const auto& group : *ctx.partition) {
                const int label = mon.settle_label[group.front() - 1];
                for (int node : group)
                    if (mon.settle_label[node - 1] != label) consistent = false;
                labels.push_back(label);
            }
            if (consistent) {
                out.cls = OutcomeClass::BoundaryClustering;
                out.group_labels = std::move(labels);
                return out;
            }
        }
    }

    if (ctx.bound_A) {
        bool oscillating = true;
        for (std::size_t i = 0; i < n && oscillating; ++i) {
            if (mon.touches_plus[i] < ctx.k_touch || mon.touches_minus[i] < ctx.k_touch)
                oscillating = false;
        }
        if (oscillating) {
            out.cls = OutcomeClass::Oscillating;
            return out;
        }
    }

    out.cls = OutcomeClass::Undecided;
    return out;
}

LimitPrediction gossip_predict_limit(const SignedGraph& g, const DynamicsConfig& cfg,
                                     const Vector& x0) {
    cfg.validate();
    LimitPrediction pred;
    const std::size_t n = static_cast<std::size_t>(g.n());
    if (x0.size() != n) raise(ErrorCode::Precondition, "initial state length does not match node count");

    if (cfg.bound_A) {
        pred.reason = "projected dynamics have no pointwise limit formula";
        return pred;
    }
    if (!g.diagnostics().connected) {
        pred.reason = "graph is disconnected";
        return pred;
    }

    if (cfg.rule == Rule::Opposing) {
        if (!(cfg.beta < 1.0)) {
            pred.reason = "convergence is proven only for beta in (0,1)";
            return pred;
        }
        const BalanceResult balance = check_structural_balance(g);
        if (balance.verdict == BalanceVerdict::StronglyBalanced) {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i) c += balance.gauge[i] * x0[i];
            c /= static_cast<double>(n);
            pred.kind = LimitKind::BipartiteConsensus;
            pred.limit = Vector(n);
            for (std::size_t i = 0; i < n; ++i) (*pred.limit)[i] = balance.gauge[i] * c;
        } else {
            pred.kind = LimitKind::ZeroConsensus;
            pred.limit = Vector(n, 0.0);
        }
        return pred;
    }

    double beta_star;
    try {
        beta_star = critical_beta_gossip(g, cfg.alpha, pair_selection_mu(g));
    } catch (const Error& e) {
        pred.reason = e.what();
        return pred;
    }
    if (cfg.beta < beta_star) {
        double mean = 0.0;
        for (double v : x0) mean += v;
        mean /= static_cast<double>(n);
        pred.kind = LimitKind::AverageConsensus;
        pred.limit = Vector(n, mean);
    } else {
        pred.reason = "beta above the mean-square contraction threshold; no convergence guarantee";
    }
    return pred;
}

X0Spec X0Spec::fixed(Vector v) {
    X0Spec spec;
    spec.is_fixed = true;
    spec.value = std::move(v);
    return spec;
}

X0Spec X0Spec::uniform(double lo, double hi, std::optional<std::uint64_t> seed) {
    X0Spec spec;
    spec.is_fixed = false;
    spec.lo = lo;
    spec.hi = hi;
    spec.seed = seed;
    return spec;
}

Vector X0Spec::realize(std::size_t n, SplitMix64& rng) const {
    if (is_fixed) {
        if (value.size() != n) raise(ErrorCode::Precondition, "fixed x0 has wrong length");
        return value;
    }
    Vector x(n);
    for (double& v : x) v = rng.next_in(lo, hi);
    return x;
}

std::string X0Spec::describe() const {
    if (is_fixed) return "fixed";
    char buf[64];
    std::snprintf(buf, sizeof buf, "uniform[%g,%g]", lo, hi);
    return buf;
}

int MonteCarloSummary::count(OutcomeClass c) const {
    const auto it = verdicts.find(outcome_class_name(c));
    return it == verdicts.end() ? 0 : it->second;
}

std::string MonteCarloSummary::to_json() const {
    nlohmann::json j;
    j["runs"] = runs;
    j["horizon"] = horizon;
    j["seed"] = seed;
    j["rule"] = rule;
    j["alpha"] = alpha;
    j["beta"] = beta;
    if (bound_A) j["bound_A"] = *bound_A;
    j["x0"] = x0_description;
    j["verdicts"] = verdicts;
    nlohmann::json curve = nlohmann::json::array();
    for (std::size_t i = 0; i < mse_times.size(); ++i) {
        const double v = mse_curve[i];
        curve.push_back({mse_times[i], std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf")});
    }
    j["mse_curve"] = curve;
    j["touches_minus"] = touches_minus;
    j["touches_plus"] = touches_plus;
    j["magnitude_bound_violations"] = magnitude_bound_violations;
    j["diverging_runs"] = diverging_runs;
    j["no_survivor_confirmed"] = no_survivor_confirmed;
    nlohmann::json terminals = nlohmann::json::array();
    for (const Vector& state : terminal_states) {
        nlohmann::json row = nlohmann::json::array();
        for (double v : state) row.push_back(std::isfinite(v) ? nlohmann::json(v)
                                                              : nlohmann::json(v > 0 ? "inf" : "-inf"));
        terminals.push_back(row);
    }
    j["terminal_states"] = terminals;
    return j.dump(2);
}

MonteCarloSummary monte_carlo(const SignedGraph& g, const DynamicsConfig& cfg, const X0Spec& x0_spec,
                              const MonteCarloOptions& opts) {
    cfg.validate();
    if (opts.runs < 1) raise(ErrorCode::Precondition, "need at least one run");
    const std::size_t n = static_cast<std::size_t>(g.n());

    MonteCarloSummary summary;
    summary.runs = opts.runs;
    summary.horizon = opts.horizon;
    summary.seed = opts.seed;
    summary.rule = rule_name(cfg.rule);
    summary.alpha = cfg.alpha;
    summary.beta = cfg.beta;
    summary.bound_A = cfg.bound_A;
    summary.x0_description = x0_spec.describe();
    summary.touches_minus.assign(n, 0);
    summary.touches_plus.assign(n, 0);

    const std::size_t v_every = std::max<std::size_t>(1, opts.horizon / opts.mse_points);
    Vector mse_sum;
    std::size_t mse_len = 0;

    const bool repelling = cfg.rule == Rule::Repelling;

    for (std::size_t run = 0; run < opts.runs; ++run) {
        const std::uint64_t run_seed = opts.seed + run;
        // The x0 draw and the event stream use decorrelated streams; an
        // explicit x0 seed overrides the derived one.
        const std::uint64_t x0_base =
            x0_spec.seed ? *x0_spec.seed : (opts.seed ^ 0xA5A5A5A5A5A5A5A5ULL);
        SplitMix64 x0_rng(x0_base + run);
        const Vector x0 = x0_spec.realize(n, x0_rng);

        ClassifyContext ctx = opts.context;
        if (opts.auto_predict) ctx.prediction = gossip_predict_limit(g, cfg, x0);

        GossipMonitorConfig mc;
        mc.enabled = true;
        mc.record_v_every = v_every;
        if (ctx.prediction && ctx.prediction->limit) mc.prediction = ctx.prediction->limit;
        mc.cluster_tol_rel = ctx.cluster_tol_rel;

        GossipProcess process(g, run_seed);
        GossipRunResult result = run_trajectory(process, cfg, x0, opts.horizon, mc);

        const Outcome outcome = classify_outcome(result, ctx);
        summary.outcomes.push_back(outcome);
        ++summary.verdicts[outcome_class_name(outcome.cls)];
        summary.terminal_states.push_back(result.monitors.terminal_state());

        for (std::size_t i = 0; i < n; ++i) {
            summary.touches_minus[i] += result.monitors.touches_minus[i];
            summary.touches_plus[i] += result.monitors.touches_plus[i];
        }
        summary.magnitude_bound_violations += result.monitors.magnitude_bound_violations;

        if (mc.prediction) {
            if (mse_sum.empty()) {
                mse_len = result.monitors.v_curve.size();
                mse_sum.assign(mse_len, 0.0);
                summary.mse_times = result.monitors.v_times;
            }
            for (std::size_t i = 0; i < mse_len && i < result.monitors.v_curve.size(); ++i)
                mse_sum[i] += result.monitors.v_curve[i];
        }

        if (outcome.cls == OutcomeClass::Diverging) {
            ++summary.diverging_runs;
            bool all_exceed = true;
            const double bar = std::log(kNoSurvivorBar);
            if (repelling) {
                for (std::size_t i = 0; i < n && all_exceed; ++i)
                    for (std::size_t m = i + 1; m < n && all_exceed; ++m)
                        if (result.monitors.max_log_gap[i][m] <= bar) all_exceed = false;
            } else {
                for (std::size_t i = 0; i < n && all_exceed; ++i)
                    if (result.monitors.max_log_abs[i] <= bar) all_exceed = false;
            }
            if (all_exceed) ++summary.no_survivor_confirmed;
        }
    }

    if (!mse_sum.empty()) {
        summary.mse_curve = mse_sum;
        for (double& v : summary.mse_curve) v /= static_cast<double>(opts.runs);
    }
    return summary;
}

EmpiricalMoment empirical_second_moment(GossipProcess& process, const DynamicsConfig& cfg,
                                        std::size_t samples, bool gauge_conjugated) {
    cfg.validate();
    if (samples < 10000)
        raise(ErrorCode::Precondition, "need at least 1e4 samples for a stable estimate");
    const SignedGraph& g = process.graph();
    const std::size_t n = static_cast<std::size_t>(g.n());

    std::vector<int> gauge(n, 1);
    if (gauge_conjugated) {
        const BalanceResult balance = check_structural_balance(g);
        if (balance.verdict != BalanceVerdict::StronglyBalanced)
            raise(ErrorCode::GaugeRequestedOnUnbalancedGraph,
                  "gauge conjugation needs a structurally balanced graph");
        gauge = balance.gauge;
    }

    Matrix sum(n, n), sum_sq(n, n);
    for (std::size_t s = 0; s < samples; ++s) {
        const SignedEdge& e = g.edges()[process.sample_pair_index()];
        Matrix w = Matrix::identity(n);
        const std::size_t i = static_cast<std::size_t>(e.u - 1);
        const std::size_t j = static_cast<std::size_t>(e.v - 1);
        if (e.sign > 0) {
            w(i, i) -= cfg.alpha;
            w(j, j) -= cfg.alpha;
            w(i, j) += cfg.alpha;
            w(j, i) += cfg.alpha;
        } else if (cfg.rule == Rule::Opposing) {
            w(i, i) -= cfg.beta;
            w(j, j) -= cfg.beta;
            w(i, j) -= cfg.beta;
            w(j, i) -= cfg.beta;
        } else {
            w(i, i) += cfg.beta;
            w(j, j) += cfg.beta;
            w(i, j) -= cfg.beta;
            w(j, i) -= cfg.beta;
        }
        Matrix w2 = mat_mul(w, w);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const double value = gauge[r] * w2(r, c) * gauge[c];
                sum(r, c) += value;
                sum_sq(r, c) += value * value;
            }
        }
    }

    EmpiricalMoment out{Matrix(n, n), Matrix(n, n), samples};
    const double inv = 1.0 / static_cast<double>(samples);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double mean = sum(r, c) * inv;
            out.mean(r, c) = mean;
            const double var = std::max(0.0, sum_sq(r, c) * inv - mean * mean);
            out.standard_error(r, c) = std::sqrt(var / static_cast<double>(samples - 1));
        }
    }
    return out;
}

double magnitude_bound_constant(double alpha) {
    return std::min(std::fabs(2.0 * alpha - 1.0), 0.5);
}

long magnitude_bound_violations(const GossipRunResult& run, const DynamicsConfig& cfg) {
    if (cfg.rule != Rule::Opposing)
        raise(ErrorCode::ParameterRangeViolation, "the lower bound applies to the opposing rule");
    if (cfg.alpha == 0.5)
        raise(ErrorCode::ParameterRangeViolation, "alpha = 1/2 is excluded");
    if (cfg.beta < 3.0)
        raise(ErrorCode::ParameterRangeViolation, "beta >= 3 required");
    if (!run.monitors.enabled || !run.monitors.magnitude_bound_tracked)
        raise(ErrorCode::MonitorsMissing, "run was not monitored for the max-magnitude bound");
    return run.monitors.magnitude_bound_violations;
}

}  // namespace signet
