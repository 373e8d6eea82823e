#pragma once

/**
 * @brief Driven qubit with incoherent gain and loss.
 *
 *   d rho / dt = -i [kappa sigma_x, rho] + sum_j (L_j rho L_j^dagger - 1/2 {L_j^dagger L_j, rho})
 *
 * with L_gain = sqrt(gamma_gain) sigma_+ and L_loss = sqrt(gamma_loss) sigma_-,
 * sigma_+ = |e_1><e_2|. Superoperators act on column-stacked vec(rho).
 *
 * For balanced rates gamma the Bloch components obey
 *   dx/dt = -gamma x,  dy/dt = -gamma y - 2 kappa z,  dz/dt = 2 kappa y - 2 gamma z,
 * so the (y, z) block has eigenvalues (-3 gamma +- sqrt(gamma^2 - 16 kappa^2)) / 2
 * and stops oscillating at gamma = 4 kappa.
 */

#include <cmath>
#include <string_view>
#include <vector>

#include "ptqm/linalg.hpp"

namespace ptqm::open_system {

using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kImagTol = 1e-8;
inline constexpr double kZeroModeTol = 1e-8;
inline constexpr double kCoalescenceTol = 1e-6;
inline constexpr double kCoalescenceAngle = 1e-3;
inline constexpr double kPositivityAbort = -1e-6;
inline constexpr double kDerivativeNoiseFloor = 1e-6;
inline constexpr double kDeviationFloor = 1e-12;

inline Matrix2 sigma_x() { Matrix2 m; m << 0.0, 1.0, 1.0, 0.0; return m; }
inline Matrix2 sigma_y() { Matrix2 m; m << 0.0, -kI, kI, 0.0; return m; }
inline Matrix2 sigma_z() { Matrix2 m; m << 1.0, 0.0, 0.0, -1.0; return m; }
inline Matrix2 sigma_plus() { Matrix2 m; m << 0.0, 1.0, 0.0, 0.0; return m; }
inline Matrix2 sigma_minus() { Matrix2 m; m << 0.0, 0.0, 1.0, 0.0; return m; }

struct LindbladModel {
    double kappa = 0.0;
    double gamma_gain = 0.0;
    double gamma_loss = 0.0;

    static LindbladModel balanced(double kappa, double gamma) { return LindbladModel{kappa, gamma, gamma}; }

    bool is_balanced() const { return gamma_gain == gamma_loss; }

    void validate() const {
        for (double r : {kappa, gamma_gain, gamma_loss}) {
            if (!std::isfinite(r) || r < 0.0) {
                throw Error(ErrorCode::InvalidArgument, "lindblad: rates must be finite and non-negative");
            }
        }
    }

    /// Largest rate in the model, floored at 1; sets the step-size cap.
    double rate_scale() const { return std::max({kappa, gamma_gain, gamma_loss, 1.0}); }

    Matrix2 hamiltonian() const { return kappa * sigma_x(); }

    std::vector<Matrix2> jump_operators() const {
        return {std::sqrt(gamma_gain) * sigma_plus(), std::sqrt(gamma_loss) * sigma_minus()};
    }
};

struct DensityMatrix {
    Matrix2 rho = Matrix2::Identity() / 2.0;

    static DensityMatrix pure(const Eigen::Vector2cd& psi) {
        const Eigen::Vector2cd n = psi / psi.norm();
        return DensityMatrix{n * n.adjoint()};
    }

    static DensityMatrix maximally_mixed() { return DensityMatrix{Matrix2::Identity() / 2.0}; }

    double trace_error() const { return std::abs(rho.trace() - Complex{1.0, 0.0}); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double purity() const { return (rho * rho).trace().real(); }

    double min_eigenvalue() const {
        const double a = rho(0, 0).real();
        const double d = rho(1, 1).real();
        const double off = std::abs(0.5 * (rho(0, 1) + std::conj(rho(1, 0))));
        return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + off * off);
    }

    /// (x, y, z) = Tr(rho sigma_k)
    Eigen::Vector3d bloch() const {
        return {(rho * sigma_x()).trace().real(), (rho * sigma_y()).trace().real(),
                (rho * sigma_z()).trace().real()};
    }

    void validate(double tol = 1e-10) const {
        if (!rho.allFinite()) throw Error(ErrorCode::InvalidArgument, "density matrix: non-finite entries");
        if (hermiticity_error() > tol) throw Error(ErrorCode::InvalidArgument, "density matrix: not Hermitian");
        if (trace_error() > tol) throw Error(ErrorCode::InvalidArgument, "density matrix: trace != 1");
        if (min_eigenvalue() < -1e-9) throw Error(ErrorCode::InvalidArgument, "density matrix: negative eigenvalue");
    }
};

inline Matrix2 lindblad_rhs(const LindbladModel& m, const Matrix2& rho) {
    const Matrix2 h = m.hamiltonian();
    Matrix2 out = -kI * (h * rho - rho * h);
    for (const Matrix2& l : m.jump_operators()) {
        const Matrix2 ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

/// 4x4 generator acting on column-stacked vec(rho); vec(A rho B) = (B^T (x) A) vec(rho).
inline CMatrix liouvillian(const LindbladModel& m) {
    m.validate();
    const CMatrix id = CMatrix::Identity(2, 2);
    const CMatrix h = m.hamiltonian();
    CMatrix gen = -kI * (kron(id, h) - kron(h.transpose(), id));
    for (const Matrix2& jump : m.jump_operators()) {
        const CMatrix l = jump;
        const CMatrix ldl = l.adjoint() * l;
        gen += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
    }
    return gen;
}

inline CVector vectorize(const Matrix2& rho) {
    CVector v(4);
    v << rho(0, 0), rho(1, 0), rho(0, 1), rho(1, 1);
    return v;
}

inline Matrix2 unvectorize(const CVector& v) {
    Matrix2 rho;
    rho << v(0), v(2), v(1), v(3);
    return rho;
}

/// Stationary state from L vec(rho) = 0 with the trace row replacing one equation.
inline DensityMatrix steady_state(const LindbladModel& m) {
    CMatrix a = liouvillian(m);
    CVector rhs = CVector::Zero(4);
    a.row(0) << 1.0, 0.0, 0.0, 1.0;
    rhs(0) = 1.0;
    Eigen::FullPivLU<CMatrix> lu(a);
    if (lu.rank() < 4) throw Error(ErrorCode::Singular, "steady_state: stationary state is not unique");
    return DensityMatrix{unvectorize(lu.solve(rhs))};
}

struct Trajectory {
    std::vector<double> t;
    std::vector<DensityMatrix> rho;
};

/**
 * Classical fourth-order Runge-Kutta with a fixed step h <= dt chosen so that
 * an integer number of steps lands exactly on t_max. Samples every `stride`
 * steps plus the endpoint.
 */
inline Trajectory evolve_density(const LindbladModel& m, const DensityMatrix& rho0, double t_max, double dt,
                                 std::size_t stride = 1) {
    m.validate();
    rho0.validate();
    if (!std::isfinite(t_max) || t_max < 0.0) throw Error(ErrorCode::InvalidArgument, "evolve_density: t_max");
    if (!std::isfinite(dt) || dt <= 0.0) throw Error(ErrorCode::InvalidArgument, "evolve_density: dt");
    if (stride == 0) throw Error(ErrorCode::InvalidArgument, "evolve_density: stride must be positive");
    const double cap = 0.01 / m.rate_scale();
    if (dt > cap * (1.0 + 1e-12)) {
        throw Error(ErrorCode::StepTooLarge,
                    "evolve_density: dt " + std::to_string(dt) + " exceeds cap " + std::to_string(cap));
    }

    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : t_max / static_cast<double>(steps);

    Trajectory traj;
    traj.t.reserve(steps / stride + 2);
    traj.rho.reserve(steps / stride + 2);

    auto check = [](const DensityMatrix& d, double t) {
        if (!d.rho.allFinite() || d.min_eigenvalue() < kPositivityAbort) {
            throw Error(ErrorCode::PositivityViolation,
                        "evolve_density: state lost positivity at t = " + std::to_string(t));
        }
    };

    Matrix2 rho = rho0.rho;
    traj.t.push_back(0.0);
    traj.rho.push_back(rho0);
    for (std::size_t k = 1; k <= steps; ++k) {
        const Matrix2 k1 = lindblad_rhs(m, rho);
        const Matrix2 k2 = lindblad_rhs(m, rho + 0.5 * h * k1);
        const Matrix2 k3 = lindblad_rhs(m, rho + 0.5 * h * k2);
        const Matrix2 k4 = lindblad_rhs(m, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (k % stride == 0 || k == steps) {
            const double t = k == steps ? t_max : static_cast<double>(k) * h;
            DensityMatrix d{rho};
            check(d, t);
            traj.t.push_back(t);
            traj.rho.push_back(d);
        }
    }
    return traj;
}

enum class Regime { Oscillatory, Exceptional, Overdamped };

constexpr std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Oscillatory: return "oscillatory";
        case Regime::Exceptional: return "exceptional";
        case Regime::Overdamped: return "overdamped";
    }
    return "unknown";
}

struct RegimeClass {
    Regime label = Regime::Overdamped;
    double spectral_gap = 0.0;           // slowest decay rate among nonzero modes
    double oscillation_frequency = 0.0;  // 0 unless oscillatory
    double max_im_eig = 0.0;             // max |Im lambda| over nonzero modes
};

inline RegimeClass classify_regime(const LindbladModel& m) {
    const EigenSystem es = eig(liouvillian(m));
    std::vector<Eigen::Index> modes;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        if (std::abs(es.values(k)) > kZeroModeTol) modes.push_back(k);
    }

    RegimeClass out;
    out.spectral_gap = modes.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (Eigen::Index k : modes) {
        out.spectral_gap = std::min(out.spectral_gap, -es.values(k).real());
        out.max_im_eig = std::max(out.max_im_eig, std::abs(es.values(k).imag()));
    }

    bool coalesced = false;
    for (std::size_t i = 0; i < modes.size() && !coalesced; ++i) {
        for (std::size_t j = i + 1; j < modes.size() && !coalesced; ++j) {
            const Eigen::Index a = modes[i];
            const Eigen::Index b = modes[j];
            if (std::abs(es.values(a) - es.values(b)) > kCoalescenceTol) continue;
            const CVector va = es.vectors.col(a);
            const CVector vb = es.vectors.col(b);
            const double sin_angle = (vb - va.dot(vb) * va).norm();
            coalesced = sin_angle < std::sin(kCoalescenceAngle);
        }
    }

    if (coalesced) {
        out.label = Regime::Exceptional;
    } else if (out.max_im_eig > kImagTol) {
        out.label = Regime::Oscillatory;
        out.oscillation_frequency = out.max_im_eig;
    } else {
        out.label = Regime::Overdamped;
    }
    return out;
}

/**
 * Counts sign changes of d<sigma_z>/dt along a trajectory, after discarding
 * t < 2 / max(gamma, kappa). A sample takes part only if the Bloch vector is
 * at least 1e-12 away from the steady state and |d<sigma_z>/dt| exceeds 1e-6
 * times that distance; this keeps round-off near equilibrium from
 * registering as motion while still following a decaying oscillation.
 */
inline int oscillation_sign_changes(const LindbladModel& m, const Trajectory& traj) {
    const double rate = std::max({m.kappa, m.gamma_gain, m.gamma_loss});
    const double transient = rate > 0.0 ? 2.0 / rate : 0.0;
    const Eigen::Vector3d r_ss = steady_state(m).bloch();
    const Matrix2 sz = sigma_z();

    int changes = 0;
    int last_sign = 0;
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        if (traj.t[k] < transient) continue;
        const double deviation = (traj.rho[k].bloch() - r_ss).norm();
        if (deviation <= kDeviationFloor) continue;
        const double dz = (sz * lindblad_rhs(m, traj.rho[k].rho)).trace().real();
        if (std::abs(dz) <= kDerivativeNoiseFloor * deviation) continue;
        const int sign = dz > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    return changes;
}

/// A trajectory oscillates when d<sigma_z>/dt turns around at least twice;
/// a sum of two decaying exponentials can turn around only once.
inline bool trajectory_oscillates(const LindbladModel& m, const Trajectory& traj) {
    return oscillation_sign_changes(m, traj) >= 2;
}

struct ScanRow {
    double gamma = 0.0;
    RegimeClass regime;
    bool osc_flag = false;
    int sign_changes = 0;
    DensityMatrix endpoint;
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;
};

inline std::vector<ScanRow> regime_scan(double kappa, const std::vector<double>& gamma_grid,
                                        const DensityMatrix& rho0, double t_max, double dt) {
    if (gamma_grid.empty()) throw Error(ErrorCode::InvalidArgument, "regime_scan: empty grid");
    if (!std::is_sorted(gamma_grid.begin(), gamma_grid.end())) {
        throw Error(ErrorCode::InvalidArgument, "regime_scan: grid must be sorted ascending");
    }
    std::vector<ScanRow> rows;
    rows.reserve(gamma_grid.size());
    for (double gamma : gamma_grid) {
        const LindbladModel model = LindbladModel::balanced(kappa, gamma);
        ScanRow row;
        row.gamma = gamma;
        row.regime = classify_regime(model);
        const Trajectory traj = evolve_density(model, rho0, t_max, dt);
        row.sign_changes = oscillation_sign_changes(model, traj);
        row.osc_flag = row.sign_changes >= 2;
        row.endpoint = traj.rho.back();
        for (const DensityMatrix& d : traj.rho) {
            row.max_trace_error = std::max(row.max_trace_error, d.trace_error());
            row.max_hermiticity_error = std::max(row.max_hermiticity_error, d.hermiticity_error());
        }
        rows.push_back(row);
    }
    return rows;
}

/// Index of the first overdamped row after the last oscillatory one, ignoring
/// rows labelled exceptional; -1 when the labels do not switch exactly once.
inline int single_transition_index(const std::vector<ScanRow>& rows) {
    int flips = 0;
    int index = -1;
    int previous = -1;  // 0 oscillatory, 1 overdamped
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Regime r = rows[k].regime.label;
        if (r == Regime::Exceptional) continue;
        const int cur = r == Regime::Oscillatory ? 0 : 1;
        if (previous != -1 && cur != previous) {
            ++flips;
            if (previous == 0) index = static_cast<int>(k);
        }
        previous = cur;
    }
    return flips == 1 ? index : -1;
}

}  // namespace ptqm::open_system
