#pragma once

// Closed-system evolution under H = u diag(E) u^-1 with real energies, hbar = 1.

#include <vector>

#include "ptqm/frame.hpp"

namespace ptqm {

class HamiltonianSpec {
public:
    HamiltonianSpec(FramePtr frame, std::vector<double> energies)
        : frame_(std::move(frame)), energies_(std::move(energies)) {
        if (!frame_) throw Error(ErrorCode::InvalidArgument, "hamiltonian: null frame");
        if (static_cast<Eigen::Index>(energies_.size()) != frame_->dim()) {
            throw Error(ErrorCode::DimensionMismatch, "hamiltonian: " + std::to_string(energies_.size()) +
                                                          " energies for dimension " +
                                                          std::to_string(frame_->dim()));
        }
        for (double e : energies_) {
            if (!std::isfinite(e)) throw Error(ErrorCode::InvalidArgument, "hamiltonian: non-finite energy");
        }
    }

    const FramePtr& frame() const { return frame_; }
    const std::vector<double>& energies() const { return energies_; }

    CMatrix matrix() const {
        CVector e(frame_->dim());
        for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = energies_[static_cast<std::size_t>(k)];
        return frame_->u() * e.asDiagonal() * frame_->v().adjoint();
    }

    /// diag(exp(-i E_n t))
    CMatrix phase_diagonal(double t) const {
        CVector d(frame_->dim());
        for (Eigen::Index k = 0; k < d.size(); ++k) {
            d(k) = std::polar(1.0, -energies_[static_cast<std::size_t>(k)] * t);
        }
        return d.asDiagonal();
    }

private:
    FramePtr frame_;
    std::vector<double> energies_;
};

/// U(t) = u diag(exp(-i E_n t)) u^-1
inline CMatrix propagator(const HamiltonianSpec& h, double t) {
    if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "propagator: non-finite time");
    const BiorthogonalFrame& frame = *h.frame();
    return frame.u() * h.phase_diagonal(t) * frame.v().adjoint();
}

/// exp(-i H t) through the matrix exponential; independent of the spectral route.
inline CMatrix propagator_matexp(const HamiltonianSpec& h, double t) {
    if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "propagator: non-finite time");
    return matexp((-kI * t) * h.matrix());
}

/// c_n(t) = c_n(0) exp(-i E_n t)
inline StateCoeffs evolve(const HamiltonianSpec& h, const StateCoeffs& s, double t) {
    require_same_frame(h.frame(), s.frame(), "evolve");
    if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "evolve: non-finite time");
    CVector c = s.coeffs();
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        c(k) *= std::polar(1.0, -h.energies()[static_cast<std::size_t>(k)] * t);
    }
    return StateCoeffs(s.frame(), std::move(c));
}

}  // namespace ptqm
