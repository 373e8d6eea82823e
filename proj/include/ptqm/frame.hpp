#pragma once

/**
 * @brief Biorthogonal frames {|phi_n>, |chi_n>} with <chi_n|phi_m> = delta_nm.
 *
 * Vectors are stored as columns in the standard computational basis {|e_n>}.
 * The matrix u has columns |phi_n>, v has columns |chi_n>, and v^dagger u = 1.
 * Frames are immutable and shared through FramePtr; states and observables
 * hold the pointer of the frame they are expanded in.
 */

#include <memory>
#include <span>
#include <string>

#include "ptqm/linalg.hpp"

namespace ptqm {

inline constexpr double kBiorthogonalityTol = 1e-10;

class BiorthogonalFrame;
using FramePtr = std::shared_ptr<const BiorthogonalFrame>;

class BiorthogonalFrame {
public:
    /// Frame whose phi vectors are the columns of u; chi is (u^dagger)^-1.
    static FramePtr from_columns(const CMatrix& u) {
        detail::require_square(u, "build_frame");
        if (u.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "build_frame: empty basis");
        if (!all_finite(u)) throw Error(ErrorCode::DegenerateBasis, "build_frame: non-finite entries");
        const double cond = condition_number(u);
        if (!(cond < kConditionCap)) {
            throw Error(ErrorCode::DegenerateBasis,
                        "build_frame: condition estimate " + std::to_string(cond) + " >= 1e12");
        }
        CMatrix v = inverse(u).adjoint();
        return validated(u, std::move(v));
    }

    /// Frame from explicit phi and chi columns; throws unless v^dagger u = 1.
    static FramePtr from_pair(const CMatrix& u, const CMatrix& v, double tol = kBiorthogonalityTol) {
        detail::require_square(u, "frame");
        if (u.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "frame: empty basis");
        if (v.rows() != u.rows() || v.cols() != u.cols()) {
            throw Error(ErrorCode::DimensionMismatch, "frame: u and v shapes differ");
        }
        if (!all_finite(u) || !all_finite(v)) {
            throw Error(ErrorCode::DegenerateBasis, "frame: non-finite entries");
        }
        const double cond = condition_number(u);
        if (!(cond < kConditionCap)) {
            throw Error(ErrorCode::DegenerateBasis,
                        "frame: condition estimate " + std::to_string(cond) + " >= 1e12");
        }
        return validated(u, v, tol);
    }

    static FramePtr orthonormal(Eigen::Index n) {
        if (n <= 0) throw Error(ErrorCode::DimensionMismatch, "frame: dimension must be positive");
        const CMatrix id = CMatrix::Identity(n, n);
        return validated(id, id);
    }

    Eigen::Index dim() const { return u_.rows(); }
    const CMatrix& u() const { return u_; }
    const CMatrix& v() const { return v_; }
    CVector phi(Eigen::Index n) const { return u_.col(checked(n)); }
    CVector chi(Eigen::Index n) const { return v_.col(checked(n)); }

    /// max |v^dagger u - 1|
    double biorthogonality_error() const {
        return max_abs(v_.adjoint() * u_ - CMatrix::Identity(dim(), dim()));
    }

    bool operator==(const BiorthogonalFrame& other) const {
        return u_.rows() == other.u_.rows() && u_ == other.u_ && v_ == other.v_;
    }

private:
    BiorthogonalFrame(CMatrix u, CMatrix v) : u_(std::move(u)), v_(std::move(v)) {}

    static FramePtr validated(CMatrix u, CMatrix v, double tol = kBiorthogonalityTol) {
        auto frame = std::shared_ptr<BiorthogonalFrame>(new BiorthogonalFrame(std::move(u), std::move(v)));
        const double err = frame->biorthogonality_error();
        if (!(err <= tol)) {
            throw Error(ErrorCode::DegenerateBasis,
                        "frame: max|v^dagger u - 1| = " + std::to_string(err) + " exceeds tolerance");
        }
        return frame;
    }

    Eigen::Index checked(Eigen::Index n) const {
        if (n < 0 || n >= dim()) {
            throw Error(ErrorCode::IndexOutOfRange, "frame: index " + std::to_string(n) + " out of range");
        }
        return n;
    }

    CMatrix u_;
    CMatrix v_;
};

inline FramePtr build_frame(const CMatrix& phi_columns) {
    return BiorthogonalFrame::from_columns(phi_columns);
}

inline FramePtr build_frame(std::span<const CVector> phis) {
    const auto n = static_cast<Eigen::Index>(phis.size());
    if (n == 0) throw Error(ErrorCode::DimensionMismatch, "build_frame: no vectors");
    CMatrix u(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const CVector& phi = phis[static_cast<std::size_t>(k)];
        if (phi.size() != n) {
            throw Error(ErrorCode::DimensionMismatch, "build_frame: vector " + std::to_string(k) +
                                                          " has length " + std::to_string(phi.size()));
        }
        u.col(k) = phi;
    }
    return BiorthogonalFrame::from_columns(u);
}

/// Frames are compared by identity first, then by exact content.
inline bool same_frame(const FramePtr& a, const FramePtr& b) {
    if (a == b) return true;
    return a && b && *a == *b;
}

/// Expansion coefficients c_n of |psi> = sum_n c_n |phi_n>.
class StateCoeffs {
public:
    StateCoeffs(FramePtr frame, CVector c) : frame_(std::move(frame)), c_(std::move(c)) {
        if (!frame_) throw Error(ErrorCode::InvalidArgument, "state: null frame");
        if (c_.size() != frame_->dim()) {
            throw Error(ErrorCode::DimensionMismatch, "state: " + std::to_string(c_.size()) +
                                                          " coefficients for dimension " +
                                                          std::to_string(frame_->dim()));
        }
        if (!c_.allFinite()) throw Error(ErrorCode::InvalidArgument, "state: non-finite coefficients");
        if (!(c_.squaredNorm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "state: zero vector");
    }

    const FramePtr& frame() const { return frame_; }
    const CVector& coeffs() const { return c_; }
    Eigen::Index dim() const { return c_.size(); }

    /// |psi> in the reference basis.
    CVector vector() const { return frame_->u() * c_; }

private:
    FramePtr frame_;
    CVector c_;
};

/// Positive Hermitian metric g = (u u^dagger)^-1, which maps |phi_n> to |chi_n>.
struct MetricOp {
    CMatrix g;
};

inline void require_same_frame(const FramePtr& a, const FramePtr& b, const char* op) {
    if (!same_frame(a, b)) throw Error(ErrorCode::FrameMismatch, std::string(op) + ": frames differ");
}

/// |psi~> = sum_n c_n |chi_n>
inline CVector associated_state(const BiorthogonalFrame& frame, const StateCoeffs& s) {
    if (s.dim() != frame.dim()) throw Error(ErrorCode::DimensionMismatch, "associated_state: dimension");
    return frame.v() * s.coeffs();
}

/// <phi~|psi> = sum_n conj(d_n) c_n
inline Complex physical_inner(const StateCoeffs& d, const StateCoeffs& c) {
    require_same_frame(d.frame(), c.frame(), "physical_inner");
    return d.coeffs().dot(c.coeffs());
}

inline double physical_norm(const StateCoeffs& s) {
    return s.coeffs().squaredNorm();
}

inline MetricOp metric(const BiorthogonalFrame& frame) {
    // v v^dagger = (u^dagger)^-1 u^-1; Hermitian and positive by construction.
    CMatrix g = frame.v() * frame.v().adjoint();
    g = (0.5 * (g + g.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 0.0)) {
        throw Error(ErrorCode::Singular, "metric: not positive definite");
    }
    const CMatrix check = g * frame.u() * frame.u().adjoint() - CMatrix::Identity(frame.dim(), frame.dim());
    if (!(max_abs(check) <= 1e-9)) throw Error(ErrorCode::Singular, "metric: g u u^dagger != 1");
    return MetricOp{std::move(g)};
}

/// K_n = <chi_n|chi_n><phi_n|phi_n> / |<chi_n|phi_n>|^2, zero-based index.
inline double petermann(const BiorthogonalFrame& frame, Eigen::Index n) {
    const CVector phi = frame.phi(n);
    const CVector chi = frame.chi(n);
    return chi.squaredNorm() * phi.squaredNorm() / std::norm(chi.dot(phi));
}

}  // namespace ptqm
