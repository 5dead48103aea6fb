#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace signet {

/// One signed, weighted edge. Undirected edges are stored with u < v;
/// directed edges point u -> v. Node ids are 1-based.
struct SignedEdge {
    int u = 0;
    int v = 0;
    int sign = +1;  // +1 or -1
    double weight = 1.0;

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

struct NodeDegrees {
    int total = 0;
    int positive = 0;
    int negative = 0;
};

/// Connectivity facts computed once at graph construction.
struct GraphDiagnostics {
    bool connected = false;           // underlying undirected graph
    bool strongly_connected = false;  // directed graphs only; mirrors `connected` otherwise
    bool positive_connected = false;  // G+ connected (strongly connected when directed)
    bool negative_nonempty = false;
    std::vector<NodeDegrees> degrees;  // in-degrees for directed graphs
    bool positive_vertex_connectivity_ge_2 = false;
};

/// Immutable signed graph. Construct through build_graph() or
/// parse_graph_file(); all analysis functions are pure readers.
class SignedGraph {
public:
    int n() const noexcept { return n_; }
    bool directed() const noexcept { return directed_; }
    /// Canonically sorted edge list (u < v for undirected pairs).
    const std::vector<SignedEdge>& edges() const noexcept { return edges_; }
    const GraphDiagnostics& diagnostics() const noexcept { return diag_; }

    struct Neighbor {
        int node;
        int sign;
        double weight;
    };
    /// Undirected view (both endpoints list each other). For directed graphs
    /// this is the set of in-neighbors: the nodes whose state node i reads.
    const std::vector<Neighbor>& in_neighbors(int node) const { return in_[node - 1]; }
    /// All incident nodes ignoring direction and sign.
    const std::vector<Neighbor>& underlying_neighbors(int node) const { return under_[node - 1]; }

    int max_degree() const noexcept { return max_degree_; }
    int max_positive_degree() const noexcept { return max_positive_degree_; }

    bool operator==(const SignedGraph& rhs) const {
        return n_ == rhs.n_ && directed_ == rhs.directed_ && edges_ == rhs.edges_;
    }

private:
    friend SignedGraph build_graph(int, bool, const std::vector<SignedEdge>&);

    int n_ = 0;
    bool directed_ = false;
    std::vector<SignedEdge> edges_;
    std::vector<std::vector<Neighbor>> in_;
    std::vector<std::vector<Neighbor>> under_;
    GraphDiagnostics diag_;
    int max_degree_ = 0;
    int max_positive_degree_ = 0;
};

enum class BalanceVerdict { StronglyBalanced, WeaklyBalanced, Unbalanced };

struct BalanceResult {
    BalanceVerdict verdict = BalanceVerdict::Unbalanced;
    /// Disjoint node sets covering 1..n; present when balanced. The set
    /// containing node 1 comes first; further sets ordered by smallest member.
    std::vector<std::vector<int>> partition;
    /// +1/-1 per node, +1 on the first partition set; strong balance only.
    std::vector<int> gauge;
    /// Set when G- has no edge: the graph is trivially two-colorable but the
    /// standing assumption of the analysis is violated, so no balance verdict
    /// is issued.
    bool negative_subgraph_empty = false;

    bool balanced() const noexcept { return verdict != BalanceVerdict::Unbalanced; }
};

const char* balance_verdict_name(BalanceVerdict v);

/// Validates and freezes a signed graph; diagnostics are computed eagerly.
/// Throws SelfLoop, DuplicateEdge, NodeOutOfRange, NonpositiveWeight.
SignedGraph build_graph(int n, bool directed, const std::vector<SignedEdge>& edge_list);

/// Two-coloring balance test (positive edge => same side, negative =>
/// opposite). Directed graphs are checked on their undirected sign pattern.
/// Requires a connected underlying graph.
BalanceResult check_structural_balance(const SignedGraph& g);

/// Weak balance: partition into the connected components of G+ with no
/// negative edge inside a component and at least two components.
BalanceResult check_weak_balance(const SignedGraph& g);

/// Returns the diagnostics cached at construction.
const GraphDiagnostics& connectivity_report(const SignedGraph& g);

/// `signet-graph v1` text format; emission is canonical (sorted edges,
/// weight omitted when exactly 1) so parse/emit round-trips are bit-exact.
std::string emit_graph(const SignedGraph& g);
SignedGraph parse_graph(std::istream& in, const std::string& source_name = "<stream>");
SignedGraph parse_graph_file(const std::string& path);
void write_graph_file(const SignedGraph& g, const std::string& path);

}  // namespace signet
