#include "signet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <utility>

#include "json.hpp"
#include "signet/error.hpp"
#include "signet/spectral.hpp"

namespace signet {

namespace {

double spread_of(const Vector& x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

void push_row(Trajectory& traj, double t, const Vector& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.h.push_back(norm_inf(x));
    traj.spread.push_back(spread_of(x));
    traj.norm.push_back(norm2(x));
}

}  // namespace

std::string Trajectory::to_csv() const {
    std::string out = "t";
    const std::size_t n = states.empty() ? 0 : states.front().size();
    for (std::size_t i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
    out += ",h,spread,norm\n";
    char buf[40];
    auto append = [&out, &buf](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        out += buf;
    };
    for (std::size_t r = 0; r < times.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.17g", times[r]);
        out += buf;
        for (double v : states[r]) append(v);
        append(h[r]);
        append(spread[r]);
        append(norm[r]);
        out += '\n';
    }
    return out;
}

const char* limit_kind_name(LimitKind k) {
    switch (k) {
        case LimitKind::BipartiteConsensus: return "BipartiteConsensus";
        case LimitKind::ZeroConsensus: return "ZeroConsensus";
        case LimitKind::AverageConsensus: return "AverageConsensus";
        case LimitKind::WeightedConsensus: return "WeightedConsensus";
        case LimitKind::Divergent: return "Divergent";
        case LimitKind::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string LimitPrediction::to_key_value() const {
    std::string out = "kind = ";
    out += limit_kind_name(kind);
    out += "\n";
    char buf[40];
    if (limit) {
        out += "limit = ";
        for (std::size_t i = 0; i < limit->size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.6g", i ? "," : "", (*limit)[i]);
            out += buf;
        }
        out += "\n";
    }
    if (left_vector) {
        out += "left_vector = ";
        for (std::size_t i = 0; i < left_vector->size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.6g", i ? "," : "", (*left_vector)[i]);
            out += buf;
        }
        out += "\n";
    }
    if (!reason.empty()) out += "reason = " + reason + "\n";
    for (std::size_t i = 0; i < warnings.size(); ++i)
        out += "warning_" + std::to_string(i + 1) + " = " + warnings[i] + "\n";
    return out;
}

std::string LimitPrediction::to_json() const {
    nlohmann::json j;
    j["kind"] = limit_kind_name(kind);
    if (limit) j["limit"] = *limit;
    if (left_vector) j["left_vector"] = *left_vector;
    if (!reason.empty()) j["reason"] = reason;
    if (!warnings.empty()) j["warnings"] = warnings;
    return j.dump(2);
}

Trajectory simulate(const SignedGraph& g, const DynamicsConfig& cfg, const Vector& x0,
                    std::size_t steps, const SimulateOptions& opts) {
    if (x0.size() != static_cast<std::size_t>(g.n()))
        raise(ErrorCode::Precondition, "initial state length does not match node count");
    if (steps < 1) raise(ErrorCode::Precondition, "need at least one step");

    const Matrix u = update_matrix(g, cfg);
    const std::size_t every = std::max<std::size_t>(1, opts.record_every);

    Trajectory traj;
    Vector x = x0;
    push_row(traj, 0.0, x);

    std::size_t quiet_steps = 0;  // consecutive steps satisfying the stop rule
    for (std::size_t t = 1; t <= steps; ++t) {
        Vector next = mat_vec(u, x);

        double delta = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            delta = std::max(delta, std::fabs(next[i] - x[i]));
        x = std::move(next);

        const bool record = (t % every == 0) || t == steps;
        if (record) push_row(traj, static_cast<double>(t), x);

        const double sp = spread_of(x);
        const double nx = norm2(x);
        if (nx > opts.divergence_threshold || sp > opts.divergence_threshold) {
            if (!record) push_row(traj, static_cast<double>(t), x);
            traj.stopped_at = t;
            traj.diverged = true;
            break;
        }

        bool settled = sp < 1e-12 && delta < 1e-14;
        if (opts.prediction && opts.stop_tol > 0.0) {
            double dist = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                dist = std::max(dist, std::fabs(x[i] - (*opts.prediction)[i]));
            settled = settled || (dist < opts.stop_tol && delta < 1e-14);
        }
        quiet_steps = settled ? quiet_steps + 1 : 0;
        if (quiet_steps >= 10) {
            if (!record) push_row(traj, static_cast<double>(t), x);
            traj.stopped_at = t;
            break;
        }
    }
    return traj;
}

namespace {

Matrix gauge_conjugate(const Matrix& m, const std::vector<int>& gauge) {
    Matrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = gauge[i] * m(i, j) * gauge[j];
    return out;
}

}  // namespace

LimitPrediction predict_limit(const SignedGraph& g, const DynamicsConfig& cfg, const Vector& x0) {
    cfg.validate();
    LimitPrediction pred;
    const std::size_t n = static_cast<std::size_t>(g.n());
    if (x0.size() != n) raise(ErrorCode::Precondition, "initial state length does not match node count");
    const auto& diag = g.diagnostics();

    if (cfg.rule == Rule::Opposing) {
        if (g.directed() && !diag.strongly_connected) {
            pred.reason = "directed opposing dynamics require strong connectivity";
            return pred;
        }
        if (!diag.connected) {
            pred.reason = "graph is disconnected";
            return pred;
        }

        const bool strict = cfg.alpha + cfg.beta < 1.0 / g.max_degree();
        bool relaxed = true;
        for (const auto& d : diag.degrees)
            relaxed = relaxed && (cfg.alpha * d.positive + cfg.beta * d.negative < 1.0);
        if (!relaxed) {
            pred.reason = "couplings too large: alpha*deg+ + beta*deg- >= 1 at some node";
            return pred;
        }
        if (!strict)
            pred.warnings.push_back(
                "alpha+beta >= 1/max degree; relying on the relaxed per-node condition");

        const BalanceResult balance = check_structural_balance(g);
        if (balance.verdict == BalanceVerdict::StronglyBalanced) {
            Vector w(n, 1.0 / static_cast<double>(n));
            if (g.directed()) {
                const Matrix conj = gauge_conjugate(update_matrix(g, cfg), balance.gauge);
                w = stationary_left_vector(conj);
            }
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i) c += w[i] * balance.gauge[i] * x0[i];
            pred.kind = LimitKind::BipartiteConsensus;
            pred.limit = Vector(n);
            for (std::size_t i = 0; i < n; ++i) (*pred.limit)[i] = balance.gauge[i] * c;
            pred.left_vector = w;
        } else {
            pred.kind = LimitKind::ZeroConsensus;
            pred.limit = Vector(n, 0.0);
        }
        return pred;
    }

    // Repelling rule.
    if (!diag.positive_connected) {
        pred.reason = "positive subgraph must be connected for the repelling rule";
        return pred;
    }

    if (!g.directed()) {
        double beta_star;
        try {
            beta_star = critical_beta_deterministic(g, cfg.alpha);
        } catch (const Error& e) {
            pred.reason = e.what();
            return pred;
        }
        const double margin = 1e-9 * std::max(1.0, beta_star);
        if (std::isfinite(beta_star) && std::fabs(cfg.beta - beta_star) <= margin) {
            pred.reason = "beta sits at the critical coupling";
            return pred;
        }
        if (cfg.beta < beta_star) {
            double mean = 0.0;
            for (double v : x0) mean += v;
            mean /= static_cast<double>(n);
            pred.kind = LimitKind::AverageConsensus;
            pred.limit = Vector(n, mean);
        } else {
            pred.kind = LimitKind::Divergent;
        }
        return pred;
    }

    // Directed repelling: consensus is certified only when every non-unit
    // eigenvalue sits inside the unit circle and the stationary left vector
    // is positive. No divergence verdict is issued above that point.
    const Matrix m = update_matrix(g, cfg);
    double r;
    try {
        SpectralRadiusOptions opts;
        opts.deflate_ones = true;
        r = spectral_radius(m, opts);
    } catch (const Error& e) {
        pred.reason = std::string("spectral radius did not converge: ") + e.what();
        return pred;
    }
    if (r >= 1.0 - 1e-12) {
        pred.reason = "non-unit eigenvalues reach the unit circle; no consensus guarantee";
        return pred;
    }
    Vector q;
    try {
        q = stationary_left_vector(m);
    } catch (const Error& e) {
        pred.reason = std::string("stationary left vector unavailable: ") + e.what();
        return pred;
    }
    for (double v : q) {
        if (!(v > 0.0)) {
            pred.reason = "stationary left vector is not positive";
            return pred;
        }
    }
    double c = dot(q, x0);
    pred.kind = LimitKind::WeightedConsensus;
    pred.limit = Vector(n, c);
    pred.left_vector = q;
    return pred;
}

SwitchingResult simulate_switching(const std::vector<SignedGraph>& graph_sequence,
                                   const DynamicsConfig& cfg, const Vector& x0, std::size_t steps,
                                   double delta, double tol) {
    cfg.validate();
    if (graph_sequence.empty()) raise(ErrorCode::Precondition, "graph sequence is empty");
    if (!(delta > 0.0 && delta < 1.0))
        raise(ErrorCode::ParameterRangeViolation, "delta must lie in (0,1)");
    const std::size_t n = x0.size();
    for (const SignedGraph& g : graph_sequence)
        if (static_cast<std::size_t>(g.n()) != n)
            raise(ErrorCode::Precondition, "all graphs in the sequence must share the node set");

    // Per-step coupling bound, checked for the whole period up front.
    for (std::size_t k = 0; k < graph_sequence.size(); ++k) {
        const auto& deg = graph_sequence[k].diagnostics().degrees;
        for (std::size_t i = 0; i < n; ++i) {
            if (cfg.alpha * deg[i].positive + cfg.beta * deg[i].negative > 1.0 - delta) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "step %zu node %zu: alpha*|N+| + beta*|N-| exceeds 1 - delta = %g",
                              k, i + 1, 1.0 - delta);
                raise(ErrorCode::StepConditionViolated, msg);
            }
        }
    }

    std::vector<Matrix> updates;
    updates.reserve(graph_sequence.size());
    for (const SignedGraph& g : graph_sequence) updates.push_back(update_matrix(g, cfg));

    SwitchingResult result;
    Vector x = x0;
    push_row(result.trajectory, 0.0, x);
    for (std::size_t t = 1; t <= steps; ++t) {
        x = mat_vec(updates[(t - 1) % updates.size()], x);
        push_row(result.trajectory, static_cast<double>(t), x);
    }

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double v : x) {
        lo = std::min(lo, std::fabs(v));
        hi = std::max(hi, std::fabs(v));
    }
    result.modulus_spread = hi - lo;
    result.modulus_consensus = result.modulus_spread < tol;
    result.consensus_value = 0.5 * (hi + lo);
    return result;
}

Trajectory simulate_continuous(const SignedGraph& g, const DynamicsConfig& cfg, const Vector& x0,
                               double t_end, double dt, const ContinuousOptions& opts) {
    cfg.validate(/*discrete=*/false);
    if (!(dt > 0.0)) raise(ErrorCode::Precondition, "dt must be positive");
    if (!(t_end > 0.0)) raise(ErrorCode::Precondition, "t_end must be positive");
    const std::size_t n = static_cast<std::size_t>(g.n());
    if (x0.size() != n) raise(ErrorCode::Precondition, "initial state length does not match node count");

    const MatrixBundle b = build_matrices(g);
    Matrix lap = cfg.alpha * b.L_plus;
    lap += cfg.beta * (cfg.rule == Rule::Opposing ? b.L_minus_o : b.L_minus_r);

    Trajectory traj;
    const std::size_t points = std::max<std::size_t>(2, opts.record_points);

    if (!g.directed() && !opts.force_rk4) {
        // Exact flow through the eigendecomposition of the symmetric
        // weighted Laplacian: x(t) = sum_k exp(-lambda_k t) <v_k, x0> v_k.
        const SymmetricSpectrum spec = symmetric_spectrum(lap, 1e-10);
        Vector coords(n);
        const double coord_floor = 1e-14 * norm2(x0);
        for (std::size_t k = 0; k < n; ++k) {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i) c += spec.eigenvectors(i, k) * x0[i];
            // Snap eigen-roundoff to zero so states that sit exactly in an
            // invariant subspace stay there instead of leaking into
            // exponentially growing modes.
            coords[k] = std::fabs(c) <= coord_floor ? 0.0 : c;
        }
        for (std::size_t p = 0; p < points; ++p) {
            const double t = t_end * static_cast<double>(p) / static_cast<double>(points - 1);
            Vector x(n, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                const double a = std::exp(-spec.eigenvalues[k] * t) * coords[k];
                for (std::size_t i = 0; i < n; ++i) x[i] += a * spec.eigenvectors(i, k);
            }
            push_row(traj, t, x);
        }
        return traj;
    }

    // Classical fixed-step RK4 on dx/dt = -L x.
    auto deriv = [&lap](const Vector& x) {
        Vector d = mat_vec(lap, x);
        for (double& v : d) v = -v;
        return d;
    };
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt));
    const std::size_t record_stride = std::max<std::size_t>(1, steps / (points - 1));
    Vector x = x0;
    push_row(traj, 0.0, x);
    double t = 0.0;
    for (std::size_t s = 1; s <= steps; ++s) {
        const double step = std::min(dt, t_end - t);
        Vector k1 = deriv(x);
        Vector x2 = x;
        axpy(x2, 0.5 * step, k1);
        Vector k2 = deriv(x2);
        Vector x3 = x;
        axpy(x3, 0.5 * step, k2);
        Vector k3 = deriv(x3);
        Vector x4 = x;
        axpy(x4, step, k3);
        Vector k4 = deriv(x4);
        for (std::size_t i = 0; i < n; ++i)
            x[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += step;
        if (s % record_stride == 0 || s == steps) push_row(traj, t, x);
    }
    return traj;
}

bool check_joint_connectivity(const std::vector<SignedGraph>& graph_sequence, std::size_t window_T,
                              bool periodic) {
    if (graph_sequence.empty()) return false;
    const int n = graph_sequence.front().n();
    const bool directed = graph_sequence.front().directed();
    const std::size_t len = graph_sequence.size();
    if (!periodic && window_T + 1 > len) return false;

    const std::size_t last_start = periodic ? len - 1 : len - 1 - window_T;
    for (std::size_t s = 0; s <= last_start; ++s) {
        std::vector<SignedEdge> union_edges;
        std::set<std::pair<int, int>> seen;
        for (std::size_t k = 0; k <= window_T; ++k) {
            const std::size_t idx = periodic ? (s + k) % len : s + k;
            for (SignedEdge e : graph_sequence[idx].edges()) {
                if (seen.insert({e.u, e.v}).second) union_edges.push_back(e);
            }
        }
        // Signs are irrelevant for connectivity; reuse the graph machinery.
        const SignedGraph u = build_graph(n, directed, union_edges);
        const bool ok = directed ? u.diagnostics().strongly_connected : u.diagnostics().connected;
        if (!ok) return false;
    }
    return true;
}

}  // namespace signet
