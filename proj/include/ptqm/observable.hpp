#pragma once

/**
 * @brief Observables in a biorthogonal frame and their measurement statistics.
 *
 * An observable is the array f_nm of F = sum_nm f_nm |phi_n><chi_m| = u f v^dagger.
 * It is physical iff the array is Hermitian, whatever the frame; F itself is
 * generally not Hermitian but satisfies the reality condition F^dagger g = g F.
 */

#include <cstdint>
#include <random>
#include <vector>

#include "ptqm/frame.hpp"

namespace ptqm {

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kRealityTol = 1e-9;
inline constexpr double kClusterRelTol = 1e-8;
inline constexpr double kNegativeClamp = -1e-12;
inline constexpr double kProbabilitySumTol = 1e-10;
inline constexpr double kImaginaryResidueTol = 1e-10;

class ObservableRep {
public:
    ObservableRep(FramePtr frame, CMatrix f_array) : frame_(std::move(frame)), f_(std::move(f_array)) {
        if (!frame_) throw Error(ErrorCode::InvalidArgument, "observable: null frame");
        if (f_.rows() != frame_->dim() || f_.cols() != frame_->dim()) {
            throw Error(ErrorCode::DimensionMismatch, "observable: array is " + std::to_string(f_.rows()) + "x" +
                                                          std::to_string(f_.cols()) + ", frame dimension " +
                                                          std::to_string(frame_->dim()));
        }
        if (!all_finite(f_)) throw Error(ErrorCode::InvalidArgument, "observable: non-finite array");
        matrix_ = frame_->u() * f_ * frame_->v().adjoint();
    }

    const FramePtr& frame() const { return frame_; }
    const CMatrix& f_array() const { return f_; }
    /// F = sum_nm f_nm |phi_n><chi_m| in the reference basis.
    const CMatrix& matrix() const { return matrix_; }

    double hermiticity_defect() const { return max_abs(f_.adjoint() - f_); }
    bool is_physical() const { return hermiticity_defect() <= kHermiticityTol; }

private:
    FramePtr frame_;
    CMatrix f_;
    CMatrix matrix_;
};

inline ObservableRep observable_from_array(FramePtr frame, CMatrix f_array) {
    return ObservableRep(std::move(frame), std::move(f_array));
}

struct ProbabilityVector {
    std::vector<double> p;

    double sum() const {
        double s = 0.0;
        for (double x : p) s += x;
        return s;
    }
};

/// Distinct outcome values (degenerate eigenvalues merged) and their probabilities.
struct Outcomes {
    std::vector<double> eigenvalues;
    ProbabilityVector probabilities;
};

namespace detail {

inline void require_physical(const ObservableRep& obs, const char* op) {
    if (!obs.is_physical()) {
        throw Error(ErrorCode::NotPhysical, std::string(op) + ": f array is not Hermitian (defect " +
                                                std::to_string(obs.hermiticity_defect()) + ")");
    }
}

}  // namespace detail

/// (sum_nm conj(c_n) c_m f_nm) / (sum_n |c_n|^2) without any reality check.
inline Complex expectation_complex(const ObservableRep& obs, const StateCoeffs& s) {
    require_same_frame(obs.frame(), s.frame(), "expectation");
    const CVector& c = s.coeffs();
    return c.dot(obs.f_array() * c) / c.squaredNorm();
}

inline double expectation(const ObservableRep& obs, const StateCoeffs& s) {
    detail::require_physical(obs, "expectation");
    const Complex value = expectation_complex(obs, s);
    const double scale = std::max(1.0, max_abs(obs.f_array()));
    if (std::abs(value.imag()) > kImaginaryResidueTol * scale) {
        throw Error(ErrorCode::NotPhysical, "expectation: imaginary residue " + std::to_string(value.imag()));
    }
    return value.real();
}

/// <psi~|F|psi> / <psi~|psi> for an operator given in the reference basis.
inline Complex operator_expectation(const CMatrix& op, const StateCoeffs& s) {
    const BiorthogonalFrame& frame = *s.frame();
    if (op.rows() != frame.dim() || op.cols() != frame.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operator_expectation: operator shape");
    }
    const CVector psi = s.vector();
    const CVector psi_tilde = associated_state(frame, s);
    return psi_tilde.dot(op * psi) / psi_tilde.dot(psi);
}

/**
 * Born weight of the eigenstate |f> = sum_n a_n |phi_n> in the state psi:
 *
 *   p = <f~|psi><psi~|f> / (<psi~|psi><f~|f>)
 *
 * evaluated with reference-basis vectors and their associated states.
 */
inline double born_weight(const BiorthogonalFrame& frame, const CVector& a, const StateCoeffs& s) {
    const CVector f = frame.u() * a;
    const CVector f_tilde = frame.v() * a;
    const CVector psi = s.vector();
    const CVector psi_tilde = associated_state(frame, s);
    const Complex num = f_tilde.dot(psi) * psi_tilde.dot(f);
    const Complex den = psi_tilde.dot(psi) * f_tilde.dot(f);
    return (num / den).real();
}

inline Outcomes outcome_probabilities(const ObservableRep& obs, const StateCoeffs& s) {
    detail::require_physical(obs, "outcome_probabilities");
    require_same_frame(obs.frame(), s.frame(), "outcome_probabilities");
    const BiorthogonalFrame& frame = *obs.frame();
    const Eigen::Index n = frame.dim();

    const EigenSystem es = eig(obs.matrix());
    const double tol = kClusterRelTol * spectral_norm(obs.matrix());

    Outcomes out;
    Eigen::Index begin = 0;
    while (begin < n) {
        Eigen::Index end = begin + 1;
        while (end < n && std::abs(es.values(end) - es.values(end - 1)) <= tol) ++end;
        const Eigen::Index m = end - begin;

        // Eigenvector coefficients in the frame: a = u^-1 w = v^dagger w.
        const CMatrix a = frame.v().adjoint() * es.vectors.middleCols(begin, m);
        double weight = 0.0;
        if (m == 1) {
            weight = born_weight(frame, a.col(0), s);
        } else {
            // Orthonormalize the cluster in the physical inner product so the
            // result does not depend on the solver's choice inside the eigenspace.
            Eigen::ColPivHouseholderQR<CMatrix> qr(a);
            qr.setThreshold(1e-8);
            if (qr.rank() < m) {
                throw Error(ErrorCode::DegenerateBasis,
                            "outcome_probabilities: eigenvectors of a degenerate cluster are not independent");
            }
            const CMatrix q = qr.householderQ() * CMatrix::Identity(n, m);
            for (Eigen::Index j = 0; j < m; ++j) weight += born_weight(frame, q.col(j), s);
        }

        if (weight < 0.0) {
            if (weight < kNegativeClamp) {
                throw Error(ErrorCode::PositivityViolation,
                            "outcome_probabilities: negative probability " + std::to_string(weight));
            }
            weight = 0.0;
        }

        double value = 0.0;
        for (Eigen::Index k = begin; k < end; ++k) value += es.values(k).real();
        out.eigenvalues.push_back(value / static_cast<double>(m));
        out.probabilities.p.push_back(weight);
        begin = end;
    }

    const double total = out.probabilities.sum();
    if (!(std::abs(total - 1.0) <= kProbabilitySumTol)) {
        throw Error(ErrorCode::DegenerateBasis,
                    "outcome_probabilities: probabilities sum to " + std::to_string(total));
    }
    return out;
}

/**
 * Multinomial counts from a probability vector.
 *
 * Generator: std::mt19937_64 seeded with `seed`. Each draw takes the top 53
 * bits of one 64-bit output as a uniform u in [0, 1) and selects the first
 * outcome whose cumulative probability exceeds u (the last outcome absorbs
 * rounding). Both pieces are fully specified by the standard, so counts are
 * reproducible for a given (probabilities, n_samples, seed).
 */
inline std::vector<std::uint64_t> sample_counts(const ProbabilityVector& probs, std::uint64_t n_samples,
                                                std::uint64_t seed) {
    const std::size_t k = probs.p.size();
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "sample_counts: empty distribution");
    std::vector<double> cumulative(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        acc += probs.p[i];
        cumulative[i] = acc;
    }

    std::vector<std::uint64_t> counts(k, 0);
    std::mt19937_64 gen(seed);
    for (std::uint64_t draw = 0; draw < n_samples; ++draw) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        std::size_t idx = 0;
        while (idx + 1 < k && !(u < cumulative[idx])) ++idx;
        ++counts[idx];
    }
    return counts;
}

inline std::vector<std::uint64_t> sample_outcomes(const ObservableRep& obs, const StateCoeffs& s,
                                                  std::uint64_t n_samples, std::uint64_t seed) {
    return sample_counts(outcome_probabilities(obs, s).probabilities, n_samples, seed);
}

struct RealityCheck {
    bool holds = false;
    double residual = 0.0;
};

/// F^dagger = g F g^-1, tested as max|F^dagger g - g F| <= 1e-9.
inline RealityCheck reality_check(const CMatrix& m, const MetricOp& g) {
    detail::require_square(m, "reality_check");
    if (g.g.rows() != m.rows() || g.g.cols() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "reality_check: metric shape differs from operator");
    }
    const double residual = max_abs(m.adjoint() * g.g - g.g * m);
    return RealityCheck{residual <= kRealityTol, residual};
}

/// Hermitian counterpart f = u^-1 F u in the reference basis.
inline CMatrix to_hermitian(const ObservableRep& obs) {
    const BiorthogonalFrame& frame = *obs.frame();
    return inverse(frame.u()) * obs.matrix() * frame.u();
}

}  // namespace ptqm
