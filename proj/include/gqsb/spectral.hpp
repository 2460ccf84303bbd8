#ifndef GQSB_SPECTRAL_HPP
#define GQSB_SPECTRAL_HPP

// Symmetric eigendecomposition, Moore-Penrose pseudoinverse, effective
// resistance over a negative-edge spanning forest, and the polarization
// certificate built from them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gqsb/error.hpp"
#include "gqsb/operators.hpp"
#include "gqsb/signed_graph.hpp"

namespace gqsb {

struct EigenDecomposition {
    Vector values;   // ascending
    Matrix vectors;  // orthonormal columns matching values
    double zero_tol = 0.0;

    std::size_t zero_count() const {
        return static_cast<std::size_t>((values.array().abs() <= zero_tol).count());
    }
    double min_value() const {
        return values.size() ? values(0) : std::numeric_limits<double>::infinity();
    }
    double max_abs_value() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

inline double default_zero_tol(double max_abs_eigenvalue) {
    return 1e-9 * std::max(1.0, max_abs_eigenvalue);
}

// tol < 0 selects default_zero_tol. Eigenvectors are sign-normalized so the
// entry of largest magnitude is positive, which makes output deterministic.
inline EigenDecomposition sym_eigen(const Matrix& m, double tol = -1.0) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "eigendecomposition of a non-square matrix");
    }
    EigenDecomposition out;
    if (m.size() == 0) {
        out.zero_tol = tol < 0.0 ? default_zero_tol(0.0) : tol;
        return out;
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NoConvergence, "symmetric eigensolver did not converge");
    }
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
        Eigen::Index at = 0;
        out.vectors.col(k).cwiseAbs().maxCoeff(&at);
        if (out.vectors(at, k) < 0.0) out.vectors.col(k) *= -1.0;
    }
    out.zero_tol = tol < 0.0 ? default_zero_tol(out.max_abs_value()) : tol;
    return out;
}

inline Matrix pseudoinverse(const EigenDecomposition& eig) {
    const auto n = eig.vectors.rows();
    Matrix pinv = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double lambda = eig.values(k);
        if (std::abs(lambda) > eig.zero_tol) {
            pinv.noalias() += (1.0 / lambda) * eig.vectors.col(k) * eig.vectors.col(k).transpose();
        }
    }
    return pinv;
}

inline Matrix pseudoinverse(const Matrix& m, double zero_tol = -1.0) {
    return pseudoinverse(sym_eigen(m, zero_tol));
}

// Γ = B_Fᵀ L† B_F. An empty forest gives a 0x0 matrix.
inline Matrix effective_resistance(const EigenDecomposition& laplacian_eig,
                                   const std::vector<Edge>& forest,
                                   const Matrix& forest_incidence) {
    const auto n = laplacian_eig.vectors.rows();
    if (forest_incidence.rows() != n ||
        forest_incidence.cols() != static_cast<Eigen::Index>(forest.size())) {
        throw Error(ErrorCode::DimensionMismatch,
                    "incidence block is " + std::to_string(forest_incidence.rows()) + "x" +
                        std::to_string(forest_incidence.cols()) + ", expected " +
                        std::to_string(n) + "x" + std::to_string(forest.size()));
    }
    Matrix gamma = forest_incidence.transpose() * pseudoinverse(laplacian_eig) * forest_incidence;
    // BᵀSB is symmetric in exact arithmetic; drop the rounding asymmetry
    return 0.5 * (gamma + gamma.transpose());
}

inline Matrix effective_resistance(const Matrix& laplacian, const std::vector<Edge>& forest,
                                   const Matrix& forest_incidence) {
    return effective_resistance(sym_eigen(laplacian), forest, forest_incidence);
}

inline bool psd_simple_zero(const EigenDecomposition& eig) {
    std::size_t zeros = 0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double lambda = eig.values(k);
        if (std::abs(lambda) <= eig.zero_tol) {
            ++zeros;
        } else if (lambda < 0.0) {
            return false;
        }
    }
    return zeros == 1;
}

inline bool psd_simple_zero(const Matrix& l, double tol = -1.0) {
    return psd_simple_zero(sym_eigen(l, tol));
}

enum class Verdict { AsymmetricPolarization, NeutralConsensus, Divergence, Consensus, Inconclusive };

inline const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::AsymmetricPolarization: return "AsymmetricPolarization";
        case Verdict::NeutralConsensus: return "NeutralConsensus";
        case Verdict::Divergence: return "Divergence";
        case Verdict::Consensus: return "Consensus";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct PolarizationCertificate {
    bool connected = false;
    Vector spectrum;  // σ(L_gz), ascending; equals σ(L_g) by similarity
    std::size_t zero_multiplicity = 0;
    double zero_tol = 0.0;
    double gamma = 1.0;
    std::vector<Edge> forest_edges;      // spanning forest of G_z's negative edges
    Matrix resistance;                   // Γ over forest_edges
    std::optional<double> resistance_min_eig;  // empty when the forest is empty
    Verdict verdict = Verdict::Inconclusive;
    Vector null_right;  // v_z, scaled to sum n; empty unless the zero eigenvalue is simple
    Vector null_left;   // w_z with w_zᵀ v_z = 1

    // Γ is PD, vacuously so for an empty forest
    bool resistance_positive_definite() const {
        return !resistance_min_eig || *resistance_min_eig > zero_tol;
    }
};

// Verdict precedence: connected with Γ PD -> AsymmetricPolarization; any
// eigenvalue below -tol -> Divergence; all eigenvalues above tol ->
// NeutralConsensus; otherwise (disconnected, or a repeated zero) Inconclusive.
// Consensus is never produced here.
inline PolarizationCertificate certify(const SignedGraph& g, const OperatorBundle& bundle) {
    if (bundle.node_count() != g.node_count()) {
        throw Error(ErrorCode::DimensionMismatch, "bundle built for a different graph");
    }
    PolarizationCertificate cert;
    cert.gamma = bundle.gamma;
    cert.connected = is_connected(g);

    const EigenDecomposition eig = sym_eigen(bundle.laplacian_z);
    cert.spectrum = eig.values;
    cert.zero_tol = eig.zero_tol;
    cert.zero_multiplicity = eig.zero_count();

    const SignedGraph gz = z_transform_network(bundle);
    const SignDecomposition dec = spanning_forest(gz);
    const IncidenceMatrix inc = incidence_matrix(gz, dec);
    cert.forest_edges = dec.forest_edges;
    cert.resistance = effective_resistance(eig, dec.forest_edges, inc.forest_block());
    if (cert.resistance.size() > 0) {
        cert.resistance_min_eig = sym_eigen(cert.resistance).min_value();
    }

    if (cert.connected && cert.resistance_positive_definite()) {
        cert.verdict = Verdict::AsymmetricPolarization;
    } else if (eig.min_value() < -eig.zero_tol) {
        cert.verdict = Verdict::Divergence;
    } else if (cert.zero_multiplicity == 0) {
        cert.verdict = Verdict::NeutralConsensus;
    } else {
        cert.verdict = Verdict::Inconclusive;
    }

    if (cert.zero_multiplicity == 1) {
        Eigen::Index at = 0;
        eig.values.cwiseAbs().minCoeff(&at);
        Vector u = eig.vectors.col(at);
        const double n = static_cast<double>(u.size());
        if (std::abs(u.sum()) > eig.zero_tol) {
            cert.null_right = u * (n / u.sum());
            cert.null_left = u / u.dot(cert.null_right);
        }
    }
    return cert;
}

inline PolarizationCertificate certify(const SignedGraph& g, const Bipartition& b, double gamma) {
    return certify(g, generalized_laplacian(g, b, gamma));
}

}  // namespace gqsb

#endif  // GQSB_SPECTRAL_HPP
