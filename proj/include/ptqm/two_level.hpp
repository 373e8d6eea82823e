#pragma once

/**
 * @brief The (xi, eta) family of two-level biorthogonal frames.
 *
 * With a = cos(xi/4), b = sin(xi/4) and N = 1/sqrt(2 sin(xi/2)):
 *
 *   phi_1 =  N [(a+b) e_1 + (a-b) e^{i eta} e_2]    chi_1 =  N [(a+b) e_1 - (a-b) e^{i eta} e_2]
 *   phi_2 =  N [(a-b) e_1 + (a+b) e^{i eta} e_2]    chi_2 = -N [(a-b) e_1 - (a+b) e^{i eta} e_2]
 *
 * All four vectors share the norm 1/sqrt(sin(xi/2)). xi = pi, eta = 0 is the
 * standard basis. The extended Pauli matrices are u sigma_k u^-1 for the
 * standard sigma_k, written out in closed form below.
 */

#include <array>
#include <cmath>
#include <numbers>

#include "ptqm/observable.hpp"

namespace ptqm::two_level {

inline constexpr double kSinHalfXiFloor = 1e-6;

enum class Axis { X, Y, Z };

struct TwoLevelParams {
    double xi = std::numbers::pi;
    double eta = 0.0;

    void validate() const {
        if (!std::isfinite(xi) || !std::isfinite(eta)) {
            throw Error(ErrorCode::InvalidArgument, "two-level: non-finite angle");
        }
        if (!(xi > 0.0 && xi < 2.0 * std::numbers::pi)) {
            throw Error(ErrorCode::IllConditioned, "two-level: xi must lie in (0, 2 pi)");
        }
        if (!(std::sin(0.5 * xi) >= kSinHalfXiFloor)) {
            throw Error(ErrorCode::IllConditioned, "two-level: sin(xi/2) below 1e-6");
        }
        if (!(eta >= 0.0 && eta < 2.0 * std::numbers::pi)) {
            throw Error(ErrorCode::InvalidArgument, "two-level: eta must lie in [0, 2 pi)");
        }
    }
};

/// Coefficients of F = t 1 + x sigma_x + y sigma_y + z sigma_z.
struct BlochObservableCoeffs {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;

    void validate() const {
        if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
            throw Error(ErrorCode::InvalidArgument, "bloch_state: theta must lie in [0, pi]");
        }
        if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
            throw Error(ErrorCode::InvalidArgument, "bloch_state: phi must lie in [0, 2 pi)");
        }
    }
};

inline FramePtr two_level_frame(const TwoLevelParams& p) {
    p.validate();
    const double a = std::cos(0.25 * p.xi);
    const double b = std::sin(0.25 * p.xi);
    const double norm = 1.0 / std::sqrt(2.0 * std::sin(0.5 * p.xi));
    const Complex phase = std::polar(1.0, p.eta);

    CMatrix u(2, 2);
    CMatrix v(2, 2);
    u(0, 0) = norm * (a + b);
    u(1, 0) = norm * (a - b) * phase;
    u(0, 1) = norm * (a - b);
    u(1, 1) = norm * (a + b) * phase;

    v(0, 0) = norm * (a + b);
    v(1, 0) = -norm * (a - b) * phase;
    v(0, 1) = -norm * (a - b);
    v(1, 1) = norm * (a + b) * phase;
    return BiorthogonalFrame::from_pair(u, v);
}

inline CMatrix standard_pauli(Axis axis) {
    CMatrix m = CMatrix::Zero(2, 2);
    switch (axis) {
        case Axis::X: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case Axis::Y: m(0, 1) = -kI; m(1, 0) = kI; break;
        case Axis::Z: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    }
    return m;
}

/// Extended Pauli matrix of the (xi, eta) frame, in closed form.
inline CMatrix pauli(Axis axis, const TwoLevelParams& p) {
    p.validate();
    const double csc = 1.0 / std::sin(0.5 * p.xi);
    const double cot = std::cos(0.5 * p.xi) * csc;
    const Complex up = std::polar(1.0, p.eta);
    const Complex down = std::conj(up);

    CMatrix m(2, 2);
    switch (axis) {
        case Axis::X:
            m << 0.0, down,
                 up, 0.0;
            break;
        case Axis::Y:
            m << kI * cot, -kI * csc * down,
                 kI * csc * up, -kI * cot;
            break;
        case Axis::Z:
            // lower-left carries e^{+i eta}; this is u sigma_z u^-1 for the frame above
            m << csc, -cot * down,
                 cot * up, -csc;
            break;
    }
    return m;
}

inline ObservableRep observable_from_bloch(const BlochObservableCoeffs& b, const TwoLevelParams& p) {
    const CMatrix f = b.t * CMatrix::Identity(2, 2) + b.x * standard_pauli(Axis::X) +
                      b.y * standard_pauli(Axis::Y) + b.z * standard_pauli(Axis::Z);
    return ObservableRep(two_level_frame(p), f);
}

/// |psi> = cos(theta/2) |phi_1> + sin(theta/2) e^{i phi} |phi_2>
inline StateCoeffs bloch_state(const BlochAngles& a, FramePtr frame) {
    a.validate();
    if (!frame || frame->dim() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "bloch_state: frame must be two-dimensional");
    }
    CVector c(2);
    c(0) = std::cos(0.5 * a.theta);
    c(1) = std::polar(std::sin(0.5 * a.theta), a.phi);
    return StateCoeffs(std::move(frame), std::move(c));
}

}  // namespace ptqm::two_level
