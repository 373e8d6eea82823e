#pragma once

/**
 * @brief Bipartite systems as tensor products of physical Hilbert spaces.
 *
 * Kronecker ordering: the A factor is the outer (slow) index, so the joint
 * coefficient of |phi^A_i> (x) |phi^B_j> sits at i * N_B + j.
 */

#include <algorithm>
#include <vector>

#include "ptqm/dynamics.hpp"
#include "ptqm/observable.hpp"

namespace ptqm {

inline constexpr double kCompositeBiorthogonalityTol = 1e-9;

struct CompositeFrame {
    FramePtr a;
    FramePtr b;
    FramePtr joint;
};

inline CompositeFrame tensor_frame(FramePtr a, FramePtr b) {
    if (!a || !b) throw Error(ErrorCode::InvalidArgument, "tensor_frame: null frame");
    FramePtr joint;
    try {
        joint = BiorthogonalFrame::from_pair(kron(a->u(), b->u()), kron(a->v(), b->v()),
                                             kCompositeBiorthogonalityTol);
    } catch (const Error& e) {
        throw Error(ErrorCode::IllConditioned, std::string("tensor_frame: ") + e.what());
    }
    return CompositeFrame{std::move(a), std::move(b), std::move(joint)};
}

/// Statistics of 1 (x) F_B on the joint state, one entry per distinct B outcome.
inline Outcomes marginal_statistics(const CompositeFrame& cf, const StateCoeffs& joint_state,
                                    const CMatrix& f_b) {
    require_same_frame(cf.joint, joint_state.frame(), "marginal_statistics");
    if (f_b.rows() != cf.b->dim() || f_b.cols() != cf.b->dim()) {
        throw Error(ErrorCode::DimensionMismatch, "marginal_statistics: B observable shape");
    }
    if (!(max_abs(f_b.adjoint() - f_b) <= kHermiticityTol)) {
        throw Error(ErrorCode::NotPhysical, "marginal_statistics: B array is not Hermitian");
    }
    const ObservableRep joint_obs(cf.joint, kron(CMatrix::Identity(cf.a->dim(), cf.a->dim()), f_b));
    return outcome_probabilities(joint_obs, joint_state);
}

/// Joint coefficients after evolving with H_A (x) 1 for time t.
inline StateCoeffs evolve_local_a(const CompositeFrame& cf, const HamiltonianSpec& h_a,
                                  const StateCoeffs& joint_state, double t) {
    require_same_frame(cf.a, h_a.frame(), "evolve_local_a");
    require_same_frame(cf.joint, joint_state.frame(), "evolve_local_a");
    const Eigen::Index nb = cf.b->dim();
    CVector c = joint_state.coeffs();
    for (Eigen::Index i = 0; i < cf.a->dim(); ++i) {
        const Complex phase = std::polar(1.0, -h_a.energies()[static_cast<std::size_t>(i)] * t);
        c.segment(i * nb, nb) *= phase;
    }
    return StateCoeffs(cf.joint, std::move(c));
}

struct NoSignallingReport {
    std::vector<double> times;
    std::vector<double> deviations;  // max_k |p_k(t) - p_k(0)| per time
    double max_deviation = 0.0;
    Outcomes initial;
};

/**
 * Sweeps the B-side outcome distribution while A evolves under a local
 * Hamiltonian. Any nonzero deviation beyond round-off would be a signal
 * sent from A to B.
 */
inline NoSignallingReport no_signalling_report(const CompositeFrame& cf, const StateCoeffs& joint_state,
                                               const HamiltonianSpec& h_a, const CMatrix& f_b,
                                               const std::vector<double>& times) {
    require_same_frame(cf.a, h_a.frame(), "no_signalling_report");
    NoSignallingReport report;
    report.initial = marginal_statistics(cf, joint_state, f_b);
    const std::vector<double>& p0 = report.initial.probabilities.p;

    for (double t : times) {
        const Outcomes now = marginal_statistics(cf, evolve_local_a(cf, h_a, joint_state, t), f_b);
        if (now.probabilities.p.size() != p0.size()) {
            throw Error(ErrorCode::DegenerateBasis, "no_signalling_report: outcome clustering changed over time");
        }
        double dev = 0.0;
        for (std::size_t k = 0; k < p0.size(); ++k) dev = std::max(dev, std::abs(now.probabilities.p[k] - p0[k]));
        report.times.push_back(t);
        report.deviations.push_back(dev);
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    return report;
}

}  // namespace ptqm
