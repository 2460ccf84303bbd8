#ifndef GQSB_DYNAMICS_HPP
#define GQSB_DYNAMICS_HPP

// The generalized Laplacian flow dx/dt = -L_g x: fixed-step RK4 integration,
// the spectral closed form, the predicted polarized state, and classification
// of where a trajectory ended up.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gqsb/error.hpp"
#include "gqsb/operators.hpp"
#include "gqsb/spectral.hpp"

namespace gqsb {

enum class Termination { Converged, MaxTime, Diverged };

inline const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::Converged: return "Converged";
        case Termination::MaxTime: return "MaxTime";
        case Termination::Diverged: return "Diverged";
    }
    return "?";
}

struct IntegratorOptions {
    std::optional<double> dt;  // default 1e-3 / λmax(L_gz)
    double t_max = 1e3;
    double stop_tol = 1e-10;          // on ‖L_g x‖∞
    double divergence_bound = 1e12;   // on ‖x‖∞
    std::size_t store_stride = 1000;  // keep every k-th step; first and last always kept
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    Termination terminated = Termination::MaxTime;
    std::size_t steps = 0;
    double dt = 0.0;

    const Vector& final_state() const { return states.back(); }
};

inline double default_step(const OperatorBundle& bundle) {
    const double lambda_max = sym_eigen(bundle.laplacian_z).max_abs_value();
    return lambda_max > 0.0 ? 1e-3 / lambda_max : 1e-3;
}

inline Trajectory integrate(const OperatorBundle& bundle, const Vector& x0,
                            const IntegratorOptions& options = {}) {
    const double dt = options.dt ? *options.dt : default_step(bundle);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorCode::BadStep, "step size must be > 0, got " + std::to_string(dt));
    }
    if (x0.size() != static_cast<Eigen::Index>(bundle.node_count())) {
        throw Error(ErrorCode::DimensionMismatch, "initial state has " + std::to_string(x0.size()) +
                                                      " entries for " +
                                                      std::to_string(bundle.node_count()) + " nodes");
    }
    const std::size_t stride = std::max<std::size_t>(1, options.store_stride);
    const Matrix& l = bundle.laplacian_g;

    Trajectory traj;
    traj.dt = dt;
    Vector x = x0;
    double t = 0.0;
    traj.times.push_back(t);
    traj.states.push_back(x);

    Vector k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
    for (;;) {
        k1.noalias() = -l * x;
        if (k1.size() == 0 || k1.lpNorm<Eigen::Infinity>() <= options.stop_tol) {
            traj.terminated = Termination::Converged;
            break;
        }
        if (x.lpNorm<Eigen::Infinity>() > options.divergence_bound) {
            traj.terminated = Termination::Diverged;
            break;
        }
        if (t >= options.t_max) {
            traj.terminated = Termination::MaxTime;
            break;
        }
        k2.noalias() = -l * (x + 0.5 * dt * k1);
        k3.noalias() = -l * (x + 0.5 * dt * k2);
        k4.noalias() = -l * (x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++traj.steps;
        t = static_cast<double>(traj.steps) * dt;
        if (traj.steps % stride == 0) {
            traj.times.push_back(t);
            traj.states.push_back(x);
        }
    }
    if (traj.times.back() != t) {
        traj.times.push_back(t);
        traj.states.push_back(x);
    }
    return traj;
}

// x(t) = P^-1 V exp(-Λt) Vᵀ P x0 from the symmetric decomposition of L_gz.
class ClosedFormFlow {
public:
    explicit ClosedFormFlow(const OperatorBundle& bundle)
        : p_(bundle.gauge.p.diagonal()), eig_(sym_eigen(bundle.laplacian_z)) {}

    Vector state(const Vector& x0, double t) const {
        if (x0.size() != p_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "initial state size does not match network");
        }
        if (t == 0.0) return x0;
        const Vector z0 = p_.cwiseProduct(x0);
        const Vector modes = eig_.vectors.transpose() * z0;
        const Vector decayed = modes.cwiseProduct((-eig_.values.array() * t).exp().matrix());
        return (eig_.vectors * decayed).cwiseQuotient(p_);
    }

    const EigenDecomposition& decomposition() const noexcept { return eig_; }

private:
    Vector p_;
    EigenDecomposition eig_;
};

inline Vector closed_form_state(const OperatorBundle& bundle, const Vector& x0, double t) {
    return ClosedFormFlow(bundle).state(x0, t);
}

// 1ᵀ P x, conserved by the flow
inline double conserved_quantity(const OperatorBundle& bundle, const Vector& x) {
    return bundle.gauge.p.diagonal().dot(x);
}

// x_f = (1/n) P^-1 1 1ᵀ P x0: -γc on V1, c on V2 with c = (1/n) 1ᵀ P x0.
inline Vector predict_final(const OperatorBundle& bundle, const PolarizationCertificate& cert,
                            const Vector& x0) {
    if (cert.verdict != Verdict::AsymmetricPolarization) {
        throw Error(ErrorCode::NotPolarizing, std::string("certificate verdict is ") +
                                                  to_string(cert.verdict));
    }
    const auto n = static_cast<Eigen::Index>(bundle.node_count());
    if (x0.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "initial state size does not match network");
    }
    const double c = conserved_quantity(bundle, x0) / static_cast<double>(n);
    Vector xf(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        xf(i) = bundle.partition.in_v1(static_cast<NodeId>(i)) ? -bundle.gamma * c : c;
    }
    return xf;
}

enum class OutcomeKind {
    AsymmetricPolarization,
    SymmetricPolarization,
    NeutralConsensus,
    Consensus,
    Divergence,
    Inconclusive,
};

inline const char* to_string(OutcomeKind k) noexcept {
    switch (k) {
        case OutcomeKind::AsymmetricPolarization: return "AsymmetricPolarization";
        case OutcomeKind::SymmetricPolarization: return "SymmetricPolarization";
        case OutcomeKind::NeutralConsensus: return "NeutralConsensus";
        case OutcomeKind::Consensus: return "Consensus";
        case OutcomeKind::Divergence: return "Divergence";
        case OutcomeKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct OutcomeReport {
    OutcomeKind kind = OutcomeKind::Inconclusive;
    double v1_value = 0.0;  // mean final opinion on V1
    double v2_value = 0.0;  // mean final opinion on V2
    double ratio = 0.0;     // v1 / v2 (0 when v2 is 0)
    double defect = 0.0;    // max of within-side spread and |v1 + γ v2|
};

// Polarization tests are relative: residuals must be <= tol * max(1, |v1|).
inline OutcomeReport assess(const Trajectory& traj, const Bipartition& b, double gamma,
                            double tol = 1e-6) {
    OutcomeReport out;
    const Vector& x = traj.final_state();
    double sum1 = 0.0, sum2 = 0.0;
    for (NodeId i = 0; i < b.node_count(); ++i) {
        (b.in_v1(i) ? sum1 : sum2) += x(static_cast<Eigen::Index>(i));
    }
    out.v1_value = sum1 / static_cast<double>(b.dominant_size());
    out.v2_value = sum2 / static_cast<double>(b.node_count() - b.dominant_size());
    out.ratio = out.v2_value != 0.0 ? out.v1_value / out.v2_value : 0.0;

    double spread = 0.0;
    for (NodeId i = 0; i < b.node_count(); ++i) {
        const double centre = b.in_v1(i) ? out.v1_value : out.v2_value;
        spread = std::max(spread, std::abs(x(static_cast<Eigen::Index>(i)) - centre));
    }
    const double cross = std::abs(out.v1_value + gamma * out.v2_value);
    out.defect = std::max(spread, cross);

    if (traj.terminated == Termination::Diverged) {
        out.kind = OutcomeKind::Divergence;
        return out;
    }
    if (x.lpNorm<Eigen::Infinity>() <= tol) {
        out.kind = OutcomeKind::NeutralConsensus;
        return out;
    }
    const double scale = tol * std::max(1.0, std::abs(out.v1_value));
    if (spread <= scale && cross <= scale) {
        out.kind = gamma == 1.0 ? OutcomeKind::SymmetricPolarization
                                : OutcomeKind::AsymmetricPolarization;
    } else if (spread <= scale && std::abs(out.v1_value - out.v2_value) <= scale) {
        out.kind = OutcomeKind::Consensus;
    } else {
        out.kind = OutcomeKind::Inconclusive;
    }
    return out;
}

// Header "t,x0,...,x{n-1}", one row per stored state (every `stride`-th).
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride = 1) {
    stride = std::max<std::size_t>(1, stride);
    const auto n = traj.states.empty() ? 0 : traj.states.front().size();
    os << "t";
    for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i;
    os << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);
        os << buf;
    };
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        if (k % stride != 0 && k + 1 != traj.states.size()) continue;
        put(traj.times[k]);
        for (Eigen::Index i = 0; i < n; ++i) {
            os << ',';
            put(traj.states[k](i));
        }
        os << '\n';
    }
}

}  // namespace gqsb

#endif  // GQSB_DYNAMICS_HPP
