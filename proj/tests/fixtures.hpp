#pragma once

// Canonical test graphs and independent brute-force oracles shared by the
// unit suites. The oracles deliberately avoid the library's analysis paths:
// balance is decided by exhaustive bipartition search and by simple-cycle
// enumeration, articulation by node-removal sweeps.

#include <algorithm>
#include <optional>
#include <vector>

#include "signet/graph.hpp"
#include "signet/matrix.hpp"
#include "signet/rng.hpp"

namespace fixtures {

using signet::SignedEdge;
using signet::SignedGraph;

// Triangle with one negative edge (unbalanced).
inline SignedGraph t1() {
    return signet::build_graph(3, false, {{1, 2, +1}, {2, 3, +1}, {1, 3, -1}});
}

// Triangle with two negative edges (strongly balanced, {1,2} | {3}).
inline SignedGraph t2() {
    return signet::build_graph(3, false, {{1, 2, +1}, {1, 3, -1}, {2, 3, -1}});
}

// All-negative triangle (weakly balanced into singletons).
inline SignedGraph t3() {
    return signet::build_graph(3, false, {{1, 2, -1}, {1, 3, -1}, {2, 3, -1}});
}

// Positive 4-cycle with negative diagonals; kappa(G+) >= 2.
inline SignedGraph c4d() {
    return signet::build_graph(4, false,
                               {{1, 2, +1}, {2, 3, +1}, {3, 4, +1}, {1, 4, +1}, {1, 3, -1}, {2, 4, -1}});
}

// Directed 3-cycle, balanced as {1,2} | {3}.
inline SignedGraph d3() {
    return signet::build_graph(3, true, {{1, 2, +1}, {2, 3, -1}, {3, 1, -1}});
}

// Complete K4 strongly balanced under {1,2} | {3,4}.
inline SignedGraph k4_balanced() {
    return signet::build_graph(
        4, false, {{1, 2, +1}, {3, 4, +1}, {1, 3, -1}, {1, 4, -1}, {2, 3, -1}, {2, 4, -1}});
}

// Complete K4 weakly balanced under {1,2} | {3} | {4}.
inline SignedGraph k4_weak3() {
    return signet::build_graph(
        4, false, {{1, 2, +1}, {1, 3, -1}, {1, 4, -1}, {2, 3, -1}, {2, 4, -1}, {3, 4, -1}});
}

// ---------------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------------

/// Strong balance by exhaustive search over all 2^(n-1) bipartitions with
/// node 1 pinned to the first side. Returns the gauge when one works.
inline std::optional<std::vector<int>> brute_force_strong_balance(const SignedGraph& g) {
    const int n = g.n();
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<int> gauge(n, +1);
        for (int i = 1; i < n; ++i)
            if (mask & (1u << (i - 1))) gauge[i] = -1;
        bool ok = true;
        bool has_minus = false;
        for (const SignedEdge& e : g.edges()) {
            if (gauge[e.u - 1] * gauge[e.v - 1] != e.sign) {
                ok = false;
                break;
            }
        }
        for (int v : gauge) has_minus = has_minus || v < 0;
        if (ok && has_minus) return gauge;
    }
    return std::nullopt;
}

/// Enumerates all simple cycles of the undirected view and reports whether
/// some cycle carries exactly one negative edge (Davis criterion violation)
/// or an odd number of negative edges (Harary criterion violation).
struct CycleParity {
    bool any_odd_negative = false;
    bool any_exactly_one_negative = false;
    long cycles = 0;
};

inline CycleParity enumerate_cycle_parity(const SignedGraph& g) {
    const int n = g.n();
    std::vector<std::vector<std::pair<int, int>>> adj(n + 1);  // (neighbor, sign)
    for (const SignedEdge& e : g.edges()) {
        adj[e.u].push_back({e.v, e.sign});
        adj[e.v].push_back({e.u, e.sign});
    }

    CycleParity result;
    std::vector<int> path;
    std::vector<char> on_path(n + 1, 0);

    // Each simple cycle is generated once: rooted at its smallest node, with
    // the second node smaller than the last to kill the reversed copy.
    auto dfs = [&](auto&& self, int root, int u, int negatives) -> void {
        for (const auto& [w, sign] : adj[u]) {
            if (w == root && path.size() >= 3) {
                if (path[1] < path.back()) continue;  // canonical direction only
                const int neg = negatives + (sign < 0 ? 1 : 0);
                ++result.cycles;
                if (neg % 2 == 1) result.any_odd_negative = true;
                if (neg == 1) result.any_exactly_one_negative = true;
            }
            if (w <= root || on_path[w]) continue;
            path.push_back(w);
            on_path[w] = 1;
            self(self, root, w, negatives + (sign < 0 ? 1 : 0));
            on_path[w] = 0;
            path.pop_back();
        }
    };

    for (int root = 1; root <= n; ++root) {
        path = {root};
        on_path.assign(n + 1, 0);
        on_path[root] = 1;
        dfs(dfs, root, root, 0);
    }
    return result;
}

/// kappa(G+) >= 2 by removing every node in turn and re-checking
/// connectivity of the positive subgraph.
inline bool brute_force_kappa_ge_2(const SignedGraph& g) {
    const int n = g.n();
    if (n < 3) return false;
    std::vector<std::vector<int>> pos(n + 1);
    for (const SignedEdge& e : g.edges()) {
        if (e.sign > 0) {
            pos[e.u].push_back(e.v);
            pos[e.v].push_back(e.u);
        }
    }
    auto connected_without = [&](int removed) {
        std::vector<char> seen(n + 1, 0);
        int start = 0;
        for (int i = 1; i <= n; ++i)
            if (i != removed) {
                start = i;
                break;
            }
        std::vector<int> stack{start};
        seen[start] = 1;
        int reached = 0;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            ++reached;
            for (int w : pos[u]) {
                if (w != removed && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        return reached == (removed == 0 ? n : n - 1);
    };
    if (!connected_without(0)) return false;
    for (int r = 1; r <= n; ++r)
        if (!connected_without(r)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Random graph generators (deterministic under a caller-provided rng)
// ---------------------------------------------------------------------------

/// Connected undirected signed graph: random spanning tree plus extra edges.
inline SignedGraph random_connected_graph(signet::SplitMix64& rng, int n, int extra_edges,
                                          double negative_fraction = 0.5) {
    std::vector<SignedEdge> edges;
    auto sign_draw = [&]() { return rng.next_double() < negative_fraction ? -1 : +1; };
    for (int v = 2; v <= n; ++v) {
        const int u = 1 + static_cast<int>(rng.next_double() * (v - 1));
        edges.push_back({std::min(u, v), std::max(u, v), sign_draw(), 1.0});
    }
    int attempts = 0;
    while (extra_edges > 0 && attempts < 50 * extra_edges) {
        ++attempts;
        int u = 1 + static_cast<int>(rng.next_double() * n);
        int v = 1 + static_cast<int>(rng.next_double() * n);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        bool dup = false;
        for (const SignedEdge& e : edges) dup = dup || (e.u == u && e.v == v);
        if (dup) continue;
        edges.push_back({u, v, sign_draw(), 1.0});
        --extra_edges;
    }
    return signet::build_graph(n, false, edges);
}

/// Strongly connected signed digraph: directed Hamiltonian cycle plus extra
/// arcs. When `gauge` is supplied, signs follow it (balanced digraph); with
/// `positive_cycle` the backbone arcs are positive so G+ alone is strongly
/// connected.
inline SignedGraph random_strongly_connected_digraph(signet::SplitMix64& rng, int n, int extra_arcs,
                                                     const std::vector<int>* gauge = nullptr,
                                                     bool positive_cycle = false) {
    std::vector<SignedEdge> edges;
    auto sign_for = [&](int u, int v) {
        if (gauge) return (*gauge)[u - 1] * (*gauge)[v - 1];
        return rng.next_double() < 0.5 ? -1 : +1;
    };
    for (int u = 1; u <= n; ++u) {
        const int v = u == n ? 1 : u + 1;
        edges.push_back({u, v, positive_cycle ? +1 : sign_for(u, v), 1.0});
    }
    int attempts = 0;
    while (extra_arcs > 0 && attempts < 50 * extra_arcs) {
        ++attempts;
        int u = 1 + static_cast<int>(rng.next_double() * n);
        int v = 1 + static_cast<int>(rng.next_double() * n);
        if (u == v) continue;
        bool dup = false;
        for (const SignedEdge& e : edges) dup = dup || (e.u == u && e.v == v);
        if (dup) continue;
        edges.push_back({u, v, sign_for(u, v), 1.0});
        --extra_arcs;
    }
    return signet::build_graph(n, true, edges);
}

inline signet::Vector random_state(signet::SplitMix64& rng, int n, double lo = -1.0, double hi = 1.0) {
    signet::Vector x(n);
    for (double& v : x) v = rng.next_in(lo, hi);
    return x;
}

}  // namespace fixtures
