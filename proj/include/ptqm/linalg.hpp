#pragma once

/**
 * @brief Dense complex linear algebra for desk-scale problems (N <= 16).
 *
 * Thin contract layer over Eigen: eigendecomposition with deterministic
 * ordering and a checked residual, condition-capped inversion, and the
 * matrix exponential.
 */

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "ptqm/error.hpp"

namespace ptqm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr Eigen::Index kMaxDim = 16;
inline constexpr double kConditionCap = 1e12;
inline constexpr double kEigResidualBound = 1e-10;

struct EigenSystem {
    CVector values;   // sorted by (real, imag) ascending
    CMatrix vectors;  // column k pairs with values[k], unit 2-norm
    double residual_bound = 0.0;
};

namespace detail {

inline void require_square(const CMatrix& m, const char* op) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::NonSquare, std::string(op) + ": matrix is " + std::to_string(m.rows()) +
                                              "x" + std::to_string(m.cols()));
    }
}

inline void require_desk_scale(const CMatrix& m, const char* op) {
    if (m.rows() > kMaxDim) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(op) + ": dimension " + std::to_string(m.rows()) + " exceeds 16");
    }
}

}  // namespace detail

inline double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMatrix& m) {
    return m.allFinite();
}

inline double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

/// 2-norm condition number; +inf for exactly singular input.
inline double condition_number(const CMatrix& m) {
    detail::require_square(m, "condition_number");
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

inline EigenSystem eig(const CMatrix& m) {
    detail::require_square(m, "eig");
    detail::require_desk_scale(m, "eig");
    const Eigen::Index n = m.rows();
    EigenSystem out;
    if (n == 0) return out;
    if (!all_finite(m)) throw Error(ErrorCode::ConvergenceFailure, "eig: non-finite input");

    Eigen::ComplexEigenSolver<CMatrix> solver(m, true);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "eig: QR iteration did not converge");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const CVector& vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
        return vals(a).imag() < vals(b).imag();
    });

    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = vals(order[static_cast<std::size_t>(k)]);
        CVector v = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = v / v.norm();
    }

    const double norm = spectral_norm(m);
    double worst = 0.0;
    if (norm > 0.0) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double r = (m * out.vectors.col(k) - out.values(k) * out.vectors.col(k)).norm();
            worst = std::max(worst, r / norm);
        }
    }
    out.residual_bound = worst;
    if (!(worst <= kEigResidualBound) || !all_finite(out.vectors)) {
        throw Error(ErrorCode::ConvergenceFailure, "eig: residual " + std::to_string(worst) + " exceeds bound");
    }
    return out;
}

inline CMatrix inverse(const CMatrix& m) {
    detail::require_square(m, "inverse");
    const double cond = condition_number(m);
    if (!(cond < kConditionCap)) {
        throw Error(ErrorCode::Singular, "inverse: condition estimate " + std::to_string(cond) + " >= 1e12");
    }
    return m.partialPivLu().inverse();
}

inline CMatrix matexp(const CMatrix& m) {
    detail::require_square(m, "matexp");
    if (m.rows() == 0) return m;
    if (!all_finite(m)) throw Error(ErrorCode::ConvergenceFailure, "matexp: non-finite input");
    CMatrix out = m.exp();
    if (!all_finite(out)) throw Error(ErrorCode::ConvergenceFailure, "matexp: overflow");
    return out;
}

}  // namespace ptqm
