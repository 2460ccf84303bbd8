#ifndef GQSB_SIGNED_GRAPH_HPP
#define GQSB_SIGNED_GRAPH_HPP

// Undirected weighted signed networks: construction, sign decomposition,
// spanning forests, incidence matrices, and the balance classifications
// (structurally balanced, quasi-structurally balanced, generalized QSB).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gqsb/error.hpp"

namespace gqsb {

using NodeId = std::size_t;

struct Edge {
    NodeId i = 0;
    NodeId j = 0;
    double w = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Sign { Positive, Negative };

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // false when a and b were already joined
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

}  // namespace detail

class SignedGraph {
public:
    struct Neighbor {
        NodeId node;
        double w;
    };

    SignedGraph() = default;

    // Validates and canonicalizes (i < j, edges sorted by pair).
    static SignedGraph from_edge_list(std::size_t n, std::span<const Edge> triples) {
        SignedGraph g;
        g.n_ = n;
        g.edges_.reserve(triples.size());
        for (const Edge& e : triples) {
            if (e.i >= n || e.j >= n) {
                throw Error(ErrorCode::BadIndex, "edge (" + std::to_string(e.i) + ", " +
                                                     std::to_string(e.j) + ") outside 0.." +
                                                     std::to_string(n == 0 ? 0 : n - 1));
            }
            if (e.i == e.j) {
                throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(e.i));
            }
            if (e.w == 0.0 || !std::isfinite(e.w)) {
                throw Error(ErrorCode::ZeroWeight, "edge (" + std::to_string(e.i) + ", " +
                                                       std::to_string(e.j) +
                                                       ") needs a finite non-zero weight");
            }
            g.edges_.push_back(Edge{std::min(e.i, e.j), std::max(e.i, e.j), e.w});
        }
        std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& a, const Edge& b) {
            return std::pair(a.i, a.j) < std::pair(b.i, b.j);
        });
        for (std::size_t k = 1; k < g.edges_.size(); ++k) {
            if (g.edges_[k].i == g.edges_[k - 1].i && g.edges_[k].j == g.edges_[k - 1].j) {
                throw Error(ErrorCode::DuplicateEdge, "pair (" + std::to_string(g.edges_[k].i) +
                                                          ", " + std::to_string(g.edges_[k].j) +
                                                          ") listed twice");
            }
        }
        g.adjacency_list_.assign(n, {});
        for (const Edge& e : g.edges_) {
            g.adjacency_list_[e.i].push_back({e.j, e.w});
            g.adjacency_list_[e.j].push_back({e.i, e.w});
        }
        for (auto& row : g.adjacency_list_) {
            std::sort(row.begin(), row.end(),
                      [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
        }
        return g;
    }

    static SignedGraph from_edge_list(std::size_t n, std::initializer_list<Edge> triples) {
        return from_edge_list(n, std::span<const Edge>(triples.begin(), triples.size()));
    }

    std::size_t node_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::span<const Neighbor> neighbors(NodeId i) const {
        check_node(i);
        return adjacency_list_[i];
    }

    // 0 when (i, j) is not an edge
    double weight(NodeId i, NodeId j) const {
        check_node(i);
        check_node(j);
        const auto& row = adjacency_list_[i];
        auto it = std::lower_bound(row.begin(), row.end(), j,
                                   [](const Neighbor& nb, NodeId v) { return nb.node < v; });
        return (it != row.end() && it->node == j) ? it->w : 0.0;
    }

    Eigen::MatrixXd adjacency() const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_),
                                                  static_cast<Eigen::Index>(n_));
        for (const Edge& e : edges_) {
            a(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.w;
            a(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = e.w;
        }
        return a;
    }

    void check_node(NodeId i) const {
        if (i >= n_) {
            throw Error(ErrorCode::BadIndex,
                        "node " + std::to_string(i) + " not in graph of " + std::to_string(n_));
        }
    }

    friend bool operator==(const SignedGraph& a, const SignedGraph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_list_;
};

enum class Side : std::uint8_t { V1, V2 };

// Assignment of every node to V1 (dominant) or V2. Both sides are non-empty.
class Bipartition {
public:
    explicit Bipartition(std::vector<Side> sides) : sides_(std::move(sides)) {
        r_ = static_cast<std::size_t>(std::count(sides_.begin(), sides_.end(), Side::V1));
        if (r_ == 0 || r_ == sides_.size()) {
            throw Error(ErrorCode::BadPartition, "both subsets must be non-empty");
        }
    }

    static Bipartition from_v1(std::size_t n, std::span<const NodeId> v1) {
        std::vector<Side> sides(n, Side::V2);
        for (NodeId i : v1) {
            if (i >= n) {
                throw Error(ErrorCode::BadIndex, "node " + std::to_string(i) + " out of range");
            }
            sides[i] = Side::V1;
        }
        return Bipartition(std::move(sides));
    }

    static Bipartition from_v1(std::size_t n, std::initializer_list<NodeId> v1) {
        return from_v1(n, std::span<const NodeId>(v1.begin(), v1.size()));
    }

    std::size_t node_count() const noexcept { return sides_.size(); }
    std::size_t dominant_size() const noexcept { return r_; }
    Side side(NodeId i) const { return sides_.at(i); }
    bool in_v1(NodeId i) const { return side(i) == Side::V1; }
    bool same_side(NodeId i, NodeId j) const { return side(i) == side(j); }
    const std::vector<Side>& sides() const noexcept { return sides_; }

    std::vector<NodeId> members(Side s) const {
        std::vector<NodeId> out;
        for (NodeId i = 0; i < sides_.size(); ++i) {
            if (sides_[i] == s) out.push_back(i);
        }
        return out;
    }

    // V1 nodes first, then V2, each ascending. This is the ordering in which the
    // gauge matrices are block-diagonal.
    std::vector<NodeId> dominant_first_order() const {
        auto order = members(Side::V1);
        auto rest = members(Side::V2);
        order.insert(order.end(), rest.begin(), rest.end());
        return order;
    }

    Bipartition swapped() const {
        std::vector<Side> s = sides_;
        for (Side& x : s) x = (x == Side::V1) ? Side::V2 : Side::V1;
        return Bipartition(std::move(s));
    }

    friend bool operator==(const Bipartition&, const Bipartition&) = default;

private:
    std::vector<Side> sides_;
    std::size_t r_ = 0;
};

struct SignDecomposition {
    std::vector<Edge> positive_edges;
    std::vector<Edge> negative_edges;
    std::vector<Edge> forest_edges;  // spanning forest of the negative subgraph
    std::vector<Edge> cycle_edges;   // remaining negative edges
};

// Columns ordered [forest | cycle | positive]. Orientation: +1 at the smaller id.
struct IncidenceMatrix {
    Eigen::MatrixXd b;
    std::vector<Edge> columns;
    std::size_t forest_columns = 0;
    std::size_t cycle_columns = 0;
    std::size_t positive_columns = 0;

    Eigen::MatrixXd forest_block() const {
        return b.leftCols(static_cast<Eigen::Index>(forest_columns));
    }
};

struct NeighborSets {
    std::vector<NodeId> coop;       // positive neighbours, either side
    std::vector<NodeId> intra_neg;  // negative neighbours on the same side
    std::vector<NodeId> inter_neg;  // negative neighbours across
};

inline SignedGraph subgraph_by_sign(const SignedGraph& g, Sign sign) {
    std::vector<Edge> kept;
    for (const Edge& e : g.edges()) {
        if ((e.w > 0.0) == (sign == Sign::Positive)) kept.push_back(e);
    }
    return SignedGraph::from_edge_list(g.node_count(), kept);
}

// Component label per node, labels numbered by smallest member (node 0 gets 0).
inline std::vector<std::size_t> component_labels(const SignedGraph& g) {
    const std::size_t n = g.node_count();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(n, unset);
    std::size_t next = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (label[s] != unset) continue;
        std::queue<NodeId> frontier;
        frontier.push(s);
        label[s] = next;
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop();
            for (const auto& nb : g.neighbors(u)) {
                if (label[nb.node] == unset) {
                    label[nb.node] = next;
                    frontier.push(nb.node);
                }
            }
        }
        ++next;
    }
    return label;
}

inline std::vector<std::vector<NodeId>> connected_components(const SignedGraph& g) {
    const auto label = component_labels(g);
    std::size_t count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<NodeId>> comps(count);
    for (NodeId i = 0; i < label.size(); ++i) comps[label[i]].push_back(i);
    return comps;
}

inline std::size_t positive_component_count(const SignedGraph& g) {
    return connected_components(subgraph_by_sign(g, Sign::Positive)).size();
}

inline bool is_connected(const SignedGraph& g) {
    return connected_components(g).size() <= 1;
}

// Splits g by sign and grows a spanning forest over its negative edges (Kruskal
// order = canonical edge order).
inline SignDecomposition spanning_forest(const SignedGraph& g) {
    SignDecomposition dec;
    detail::DisjointSets sets(g.node_count());
    for (const Edge& e : g.edges()) {
        if (e.w > 0.0) {
            dec.positive_edges.push_back(e);
            continue;
        }
        dec.negative_edges.push_back(e);
        if (sets.unite(e.i, e.j)) {
            dec.forest_edges.push_back(e);
        } else {
            dec.cycle_edges.push_back(e);
        }
    }
    return dec;
}

inline IncidenceMatrix incidence_matrix(const SignedGraph& g, const SignDecomposition& dec) {
    IncidenceMatrix inc;
    inc.forest_columns = dec.forest_edges.size();
    inc.cycle_columns = dec.cycle_edges.size();
    inc.positive_columns = dec.positive_edges.size();
    inc.columns.reserve(inc.forest_columns + inc.cycle_columns + inc.positive_columns);
    for (const auto* block : {&dec.forest_edges, &dec.cycle_edges, &dec.positive_edges}) {
        inc.columns.insert(inc.columns.end(), block->begin(), block->end());
    }
    const auto n = static_cast<Eigen::Index>(g.node_count());
    inc.b = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(inc.columns.size()));
    for (std::size_t c = 0; c < inc.columns.size(); ++c) {
        const Edge& e = inc.columns[c];
        g.check_node(e.i);
        g.check_node(e.j);
        const auto col = static_cast<Eigen::Index>(c);
        inc.b(static_cast<Eigen::Index>(std::min(e.i, e.j)), col) = 1.0;
        inc.b(static_cast<Eigen::Index>(std::max(e.i, e.j)), col) = -1.0;
    }
    return inc;
}

inline bool validate_gqsb(const SignedGraph& g, const Bipartition& b) {
    if (b.node_count() != g.node_count()) {
        throw Error(ErrorCode::DimensionMismatch, "bipartition does not cover the graph");
    }
    return std::all_of(g.edges().begin(), g.edges().end(),
                       [&](const Edge& e) { return b.same_side(e.i, e.j) || e.w < 0.0; });
}

namespace detail {

// Two-colours `nodes` so that edges accepted by `differ` join opposite colours
// and edges accepted by `agree` join equal colours. Colour of the first node
// of every component is V1. Returns nullopt on conflict.
template <typename Agree, typename Differ>
std::optional<std::vector<Side>> signed_two_colouring(const SignedGraph& g, Agree agree,
                                                      Differ differ) {
    const std::size_t n = g.node_count();
    std::vector<int> colour(n, -1);
    for (NodeId s = 0; s < n; ++s) {
        if (colour[s] >= 0) continue;
        colour[s] = 0;
        std::queue<NodeId> frontier;
        frontier.push(s);
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop();
            for (const auto& nb : g.neighbors(u)) {
                int want;
                if (agree(nb.w)) {
                    want = colour[u];
                } else if (differ(nb.w)) {
                    want = 1 - colour[u];
                } else {
                    continue;
                }
                if (colour[nb.node] < 0) {
                    colour[nb.node] = want;
                    frontier.push(nb.node);
                } else if (colour[nb.node] != want) {
                    return std::nullopt;
                }
            }
        }
    }
    std::vector<Side> sides(n);
    for (NodeId i = 0; i < n; ++i) sides[i] = colour[i] == 0 ? Side::V1 : Side::V2;
    return sides;
}

// Number of non-empty bipartitions (mirror pairs counted once) among the
// 2^components colourings of a graph with `components` components, given
// whether any edge forces a colour change.
inline bool unique_nonempty_colouring(std::size_t components, bool has_differ_edges) {
    if (has_differ_edges) return components == 1;
    return components == 2;
}

}  // namespace detail

// Intra-subset edges positive, inter-subset edges negative, both
// subsets non-empty, and the bipartition unique. A connected all-positive
// network therefore is not SB.
inline std::optional<Bipartition> is_structurally_balanced(const SignedGraph& g) {
    auto sides = detail::signed_two_colouring(
        g, [](double w) { return w > 0.0; }, [](double w) { return w < 0.0; });
    if (!sides) return std::nullopt;
    const bool has_negative = std::any_of(g.edges().begin(), g.edges().end(),
                                          [](const Edge& e) { return e.w < 0.0; });
    const auto comps = connected_components(g);
    if (!detail::unique_nonempty_colouring(comps.size(), has_negative)) return std::nullopt;
    if (!has_negative) {
        // two all-positive components: the components are the subsets
        for (NodeId i : comps[1]) (*sides)[i] = Side::V2;
    }
    return Bipartition(std::move(*sides));
}

// Every GQSB bipartition is a union of positive components on each side; the
// side holding node 0's component is V1. Order: by bitmask over the remaining
// components (component k <-> bit k-1), ascending.
inline std::vector<Bipartition> enumerate_gqsb_bipartitions(const SignedGraph& g,
                                                            std::size_t max_components = 24) {
    const auto label = component_labels(subgraph_by_sign(g, Sign::Positive));
    const std::size_t p = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    if (p < 2) return {};
    if (p > max_components) {
        throw Error(ErrorCode::TooLarge, std::to_string(p) + " positive components exceed the " +
                                             std::to_string(max_components) +
                                             "-component enumeration limit");
    }
    std::vector<Bipartition> out;
    const std::uint64_t limit = std::uint64_t{1} << (p - 1);
    out.reserve(static_cast<std::size_t>(limit - 1));
    std::vector<Side> sides(label.size());
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
        for (NodeId i = 0; i < label.size(); ++i) {
            const bool v2 = label[i] > 0 && ((mask >> (label[i] - 1)) & 1U);
            sides[i] = v2 ? Side::V2 : Side::V1;
        }
        out.emplace_back(sides);
    }
    return out;
}

// 2^(p-1) - 1 for p >= 2, else 0. nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> gqsb_bipartition_count(std::size_t p) {
    if (p < 2) return std::uint64_t{0};
    if (p > 64) return std::nullopt;
    return (p == 64) ? ~std::uint64_t{0} >> 1 : (std::uint64_t{1} << (p - 1)) - 1;
}

inline SignedGraph condense_positive_components(const SignedGraph& g) {
    const auto label = component_labels(subgraph_by_sign(g, Sign::Positive));
    const std::size_t p = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    std::vector<Edge> links;
    for (const Edge& e : g.edges()) {
        if (e.w > 0.0) continue;
        NodeId a = std::min(label[e.i], label[e.j]);
        NodeId b = std::max(label[e.i], label[e.j]);
        if (a == b) continue;
        auto it = std::find_if(links.begin(), links.end(),
                               [&](const Edge& l) { return l.i == a && l.j == b; });
        if (it == links.end()) {
            links.push_back({a, b, e.w});
        } else {
            it->w += e.w;
        }
    }
    return SignedGraph::from_edge_list(p, links);
}

// QSB: the only non-empty bipartition in which every edge across subsets is
// negative and every intra-subset edge has a positive path between its ends.
// Such bipartitions are exactly the proper two-colourings of the condensed
// graph of positive components.
inline std::optional<Bipartition> is_qsb(const SignedGraph& g) {
    const auto label = component_labels(subgraph_by_sign(g, Sign::Positive));
    const SignedGraph condensed = condense_positive_components(g);
    if (condensed.node_count() < 2) return std::nullopt;
    auto colours = detail::signed_two_colouring(
        condensed, [](double) { return false; }, [](double) { return true; });
    if (!colours) return std::nullopt;
    const auto comps = connected_components(condensed);
    if (!detail::unique_nonempty_colouring(comps.size(), condensed.edge_count() > 0)) {
        return std::nullopt;
    }
    if (condensed.edge_count() == 0) {
        for (NodeId c : comps[1]) (*colours)[c] = Side::V2;
    }
    std::vector<Side> sides(g.node_count());
    for (NodeId i = 0; i < sides.size(); ++i) sides[i] = (*colours)[label[i]];
    return Bipartition(std::move(sides));
}

enum class BalanceClass { StructurallyBalanced, QuasiStructurallyBalanced, GeneralizedQSB, UnbalancedSigned };

inline const char* to_string(BalanceClass c) noexcept {
    switch (c) {
        case BalanceClass::StructurallyBalanced: return "SB";
        case BalanceClass::QuasiStructurallyBalanced: return "QSB";
        case BalanceClass::GeneralizedQSB: return "GQSB";
        case BalanceClass::UnbalancedSigned: return "Unbalanced-signed";
    }
    return "?";
}

// Most specific class in the chain SB ⊂ QSB ⊂ GQSB ⊂ signed.
inline BalanceClass classify(const SignedGraph& g) {
    if (is_structurally_balanced(g)) return BalanceClass::StructurallyBalanced;
    if (is_qsb(g)) return BalanceClass::QuasiStructurallyBalanced;
    if (positive_component_count(g) >= 2) return BalanceClass::GeneralizedQSB;
    return BalanceClass::UnbalancedSigned;
}

inline NeighborSets neighbor_sets(const SignedGraph& g, const Bipartition& b, NodeId i) {
    g.check_node(i);
    NeighborSets sets;
    for (const auto& nb : g.neighbors(i)) {
        if (nb.w > 0.0) {
            sets.coop.push_back(nb.node);
        } else if (b.same_side(i, nb.node)) {
            sets.intra_neg.push_back(nb.node);
        } else {
            sets.inter_neg.push_back(nb.node);
        }
    }
    return sets;
}

// V1 = union of the positive components containing the dominant nodes.
inline Bipartition induced_bipartition(const SignedGraph& g, std::span<const NodeId> dominant) {
    if (dominant.empty()) throw Error(ErrorCode::BadPartition, "no dominant nodes given");
    const auto label = component_labels(subgraph_by_sign(g, Sign::Positive));
    std::vector<bool> chosen(label.size(), false);
    for (NodeId d : dominant) {
        g.check_node(d);
        chosen[label[d]] = true;
    }
    std::vector<Side> sides(g.node_count());
    for (NodeId i = 0; i < sides.size(); ++i) sides[i] = chosen[label[i]] ? Side::V1 : Side::V2;
    if (std::find(sides.begin(), sides.end(), Side::V2) == sides.end()) {
        throw Error(ErrorCode::BadPartition,
                    "the dominant group and its positive allies cover every node");
    }
    return Bipartition(std::move(sides));
}

// Exact minimum colouring by branch and bound over node order of decreasing
// degree.
inline std::size_t chromatic_number(const SignedGraph& g, std::size_t max_nodes = 20) {
    const std::size_t n = g.node_count();
    if (n > max_nodes) {
        throw Error(ErrorCode::TooLarge, std::to_string(n) + " nodes exceed the exact colouring limit of " +
                                             std::to_string(max_nodes));
    }
    if (n == 0) return 0;
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return g.neighbors(a).size() > g.neighbors(b).size();
    });
    std::vector<int> colour(n, -1);
    std::size_t best = n;

    auto search = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
        if (used >= best) return;
        if (pos == n) {
            best = used;
            return;
        }
        NodeId v = order[pos];
        // trying a fresh colour last keeps the first complete colouring small
        for (std::size_t c = 0; c <= used && c < best; ++c) {
            bool clash = false;
            for (const auto& nb : g.neighbors(v)) {
                if (colour[nb.node] == static_cast<int>(c)) {
                    clash = true;
                    break;
                }
            }
            if (clash) continue;
            colour[v] = static_cast<int>(c);
            self(self, pos + 1, std::max(used, c + 1));
            colour[v] = -1;
        }
    };
    search(search, 0, 0);
    return best;
}

}  // namespace gqsb

#endif  // GQSB_SIGNED_GRAPH_HPP
