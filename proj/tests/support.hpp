#ifndef GQSB_TESTS_SUPPORT_HPP
#define GQSB_TESTS_SUPPORT_HPP

// Test-only fixtures, random generators and brute-force oracles. Nothing
// here calls into the classification code it is used to check.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gqsb/gqsb.hpp"

namespace gqsb::testing {

// w01 = 1, w02 = w12 = -3: σ(L_r) = {0,-1,-9}, σ(L_o) = {0,5,9}
inline SignedGraph mixed_triangle() {
    return SignedGraph::from_edge_list(3, {{0, 1, 1.0}, {0, 2, -3.0}, {1, 2, -3.0}});
}

// w01 = -1, w02 = w12 = -3
inline SignedGraph antagonistic_triangle() {
    return SignedGraph::from_edge_list(3, {{0, 1, -1.0}, {0, 2, -3.0}, {1, 2, -3.0}});
}

// Divergent GQSB triangle: w01 = -5, w02 = w12 = -1, V1 = {0,1}
inline SignedGraph counterexample() {
    return SignedGraph::from_edge_list(3, {{0, 1, -5.0}, {0, 2, -1.0}, {1, 2, -1.0}});
}

using Rng = std::mt19937_64;

inline SignedGraph random_signed_graph(Rng& rng, std::size_t n, double edge_prob, double neg_prob) {
    std::bernoulli_distribution has_edge(edge_prob), negative(neg_prob);
    std::uniform_real_distribution<double> mag(0.2, 5.0);
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (has_edge(rng)) edges.push_back({i, j, negative(rng) ? -mag(rng) : mag(rng)});
        }
    }
    return SignedGraph::from_edge_list(n, edges);
}

struct GqsbInstance {
    SignedGraph graph;
    Bipartition partition;
};

// Random bipartition, crossing edges negative, intra edges of either sign.
inline GqsbInstance random_gqsb(Rng& rng, std::size_t n, double edge_prob, double intra_neg_prob,
                                bool require_connected = true) {
    std::bernoulli_distribution coin(0.5), has_edge(edge_prob), intra_neg(intra_neg_prob);
    std::uniform_real_distribution<double> mag(0.2, 5.0);
    for (;;) {
        std::vector<Side> sides(n);
        for (auto& s : sides) s = coin(rng) ? Side::V1 : Side::V2;
        sides[0] = Side::V1;
        sides[n - 1] = Side::V2;
        std::vector<Edge> edges;
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                if (!has_edge(rng)) continue;
                const bool cross = sides[i] != sides[j];
                const double w = (cross || intra_neg(rng)) ? -mag(rng) : mag(rng);
                edges.push_back({i, j, w});
            }
        }
        SignedGraph g = SignedGraph::from_edge_list(n, edges);
        if (require_connected && !is_connected(g)) continue;
        return {std::move(g), Bipartition(std::move(sides))};
    }
}

// All labelings with node 0 in V1 and both sides non-empty.
template <typename Pred>
std::vector<Bipartition> brute_force_bipartitions(std::size_t n, Pred keep) {
    std::vector<Bipartition> out;
    if (n < 2) return out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
        std::vector<Side> sides(n, Side::V1);
        for (NodeId i = 1; i < n; ++i) {
            if ((mask >> (i - 1)) & 1U) sides[i] = Side::V2;
        }
        Bipartition b(std::move(sides));
        if (keep(b)) out.push_back(std::move(b));
    }
    return out;
}

inline bool sb_valid(const SignedGraph& g, const Bipartition& b) {
    return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
        return b.same_side(e.i, e.j) ? e.w > 0.0 : e.w < 0.0;
    });
}

inline bool gqsb_valid(const SignedGraph& g, const Bipartition& b) {
    return std::all_of(g.edges().begin(), g.edges().end(),
                       [&](const Edge& e) { return b.same_side(e.i, e.j) || e.w < 0.0; });
}

// Positive path between the ends of every intra-subset edge, found by BFS on
// the positive edges.
inline bool qsb_valid(const SignedGraph& g, const Bipartition& b) {
    if (!gqsb_valid(g, b)) return false;
    const std::size_t n = g.node_count();
    auto positive_path = [&](NodeId s, NodeId t) {
        std::vector<bool> seen(n, false);
        std::vector<NodeId> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            if (u == t) return true;
            for (const Edge& e : g.edges()) {
                if (e.w <= 0.0) continue;
                NodeId v = e.i == u ? e.j : (e.j == u ? e.i : n);
                if (v < n && !seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        return false;
    };
    return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
        return !b.same_side(e.i, e.j) || positive_path(e.i, e.j);
    });
}

// Smallest k admitting a proper colouring, by exhaustive k^n search.
inline std::size_t brute_force_chromatic(const SignedGraph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) return 0;
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> colour(n, 0);
        for (;;) {
            bool ok = std::all_of(g.edges().begin(), g.edges().end(),
                                  [&](const Edge& e) { return colour[e.i] != colour[e.j]; });
            if (ok) return k;
            std::size_t pos = 0;
            while (pos < n && ++colour[pos] == k) colour[pos++] = 0;
            if (pos == n) break;
        }
    }
    return n;
}

// Eigenvalues of a general real matrix, real parts sorted. Independent of the
// symmetric route used by the library.
inline std::vector<double> general_spectrum(const Matrix& m) {
    Eigen::EigenSolver<Matrix> solver(m, false);
    std::vector<double> out;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        out.push_back(solver.eigenvalues()(k).real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace gqsb::testing

#endif  // GQSB_TESTS_SUPPORT_HPP
