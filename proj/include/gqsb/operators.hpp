#ifndef GQSB_OPERATORS_HPP
#define GQSB_OPERATORS_HPP

// Repelling, opposing and generalized Laplacians, and the diagonal gauge
// matrices that relate the x-domain flow to its z-domain (consensus) form.
//
// All matrices are indexed in the caller's node order. The gauge matrices are
// block-diagonal only after permuting V1 first; OperatorBundle::order records
// that permutation.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gqsb/error.hpp"
#include "gqsb/signed_graph.hpp"

namespace gqsb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Diagonal = Eigen::DiagonalMatrix<double, Eigen::Dynamic>;

namespace detail {

inline Eigen::Index idx(NodeId i) { return static_cast<Eigen::Index>(i); }

inline void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error(ErrorCode::BadGamma, "dominance coefficient must be finite and > 0, got " +
                                             std::to_string(gamma));
    }
}

inline void require_gqsb(const SignedGraph& g, const Bipartition& b) {
    if (!validate_gqsb(g, b)) {
        throw Error(ErrorCode::NotGQSB, "an edge between V1 and V2 is not negative");
    }
}

inline Matrix laplacian_from(const Matrix& adjacency, const Vector& degree) {
    Matrix l = -adjacency;
    l.diagonal() += degree;
    return l;
}

}  // namespace detail

inline Matrix repelling_laplacian(const SignedGraph& g) {
    const Matrix a = g.adjacency();
    return detail::laplacian_from(a, a.rowwise().sum());
}

inline Matrix opposing_laplacian(const SignedGraph& g) {
    const Matrix a = g.adjacency();
    return detail::laplacian_from(a, a.cwiseAbs().rowwise().sum());
}

struct GaugeMatrices {
    Diagonal q;  // diag(γ on V1, 1 on V2)
    Diagonal r;  // diag(-1 on V1, 1 on V2)
    Diagonal p;  // R Q^-1 = diag(-1/γ on V1, 1 on V2)
};

inline GaugeMatrices gauge_matrices(double gamma, const Bipartition& b) {
    detail::check_gamma(gamma);
    const auto n = detail::idx(b.node_count());
    Vector q(n), r(n), p(n);
    for (NodeId i = 0; i < b.node_count(); ++i) {
        const bool v1 = b.in_v1(i);
        q(detail::idx(i)) = v1 ? gamma : 1.0;
        r(detail::idx(i)) = v1 ? -1.0 : 1.0;
        p(detail::idx(i)) = v1 ? -1.0 / gamma : 1.0;
    }
    return {Diagonal(q), Diagonal(r), Diagonal(p)};
}

// d_i = sum of intra-subset weights (signed) minus sum of inter-subset weights.
inline Vector generalized_degree(const SignedGraph& g, const Bipartition& b) {
    detail::require_gqsb(g, b);
    Vector d = Vector::Zero(detail::idx(g.node_count()));
    for (const Edge& e : g.edges()) {
        const double term = b.same_side(e.i, e.j) ? e.w : -e.w;
        d(detail::idx(e.i)) += term;
        d(detail::idx(e.j)) += term;
    }
    return d;
}

inline Matrix generalized_adjacency(const SignedGraph& g, const Bipartition& b, double gamma) {
    detail::check_gamma(gamma);
    detail::require_gqsb(g, b);
    Matrix a = Matrix::Zero(detail::idx(g.node_count()), detail::idx(g.node_count()));
    for (const Edge& e : g.edges()) {
        double ij = e.w;
        double ji = e.w;
        if (!b.same_side(e.i, e.j)) {
            // rows in V1 see γ·a, rows in V2 see a/γ
            ij = b.in_v1(e.i) ? gamma * e.w : e.w / gamma;
            ji = b.in_v1(e.j) ? gamma * e.w : e.w / gamma;
        }
        a(detail::idx(e.i), detail::idx(e.j)) = ij;
        a(detail::idx(e.j), detail::idx(e.i)) = ji;
    }
    return a;
}

struct OperatorBundle {
    double gamma = 1.0;
    Bipartition partition;
    std::vector<NodeId> order;  // V1 first, then V2
    GaugeMatrices gauge;
    Vector degree;          // D_g diagonal, independent of γ
    Matrix adjacency_g;     // Q A Q^-1
    Matrix laplacian_g;     // D_g - A_g
    Matrix adjacency_z;     // R A R, γ-free
    Matrix laplacian_z;     // D_g - A_gz, symmetric with zero row sums

    std::size_t node_count() const noexcept { return partition.node_count(); }
};

inline OperatorBundle generalized_laplacian(const SignedGraph& g, const Bipartition& b,
                                            double gamma) {
    detail::check_gamma(gamma);
    detail::require_gqsb(g, b);
    const auto n = detail::idx(g.node_count());

    Matrix az = Matrix::Zero(n, n);
    for (const Edge& e : g.edges()) {
        const double w = b.same_side(e.i, e.j) ? e.w : -e.w;
        az(detail::idx(e.i), detail::idx(e.j)) = w;
        az(detail::idx(e.j), detail::idx(e.i)) = w;
    }
    Vector degree = generalized_degree(g, b);
    Matrix ag = generalized_adjacency(g, b, gamma);
    Matrix lg = detail::laplacian_from(ag, degree);
    Matrix lz = detail::laplacian_from(az, degree);
    return OperatorBundle{gamma,        b,         b.dominant_first_order(),
                          gauge_matrices(gamma, b), std::move(degree), std::move(ag),
                          std::move(lg), std::move(az), std::move(lz)};
}

// G_z: inter-subset edges flipped to cooperative, intra-subset edges unchanged.
inline SignedGraph z_transform_network(const OperatorBundle& bundle) {
    std::vector<Edge> edges;
    const auto n = bundle.adjacency_z.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double w = bundle.adjacency_z(i, j);
            if (w != 0.0) {
                edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), w});
            }
        }
    }
    return SignedGraph::from_edge_list(static_cast<std::size_t>(n), edges);
}

}  // namespace gqsb

#endif  // GQSB_OPERATORS_HPP
