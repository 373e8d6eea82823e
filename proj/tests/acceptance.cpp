// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "test_util.hpp"

using namespace ptqm;
using testutil::Rng;
using two_level::Axis;
using two_level::TwoLevelParams;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<TwoLevelParams> frame_grid(int n) {
    std::vector<TwoLevelParams> out;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out.push_back({2.0 * kPi * (i + 0.5) / n, 2.0 * kPi * j / n});
    }
    return out;
}

CMatrix sigma_z_array() {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Verdict metric_independence() {
    Rng rng(101);
    const std::vector<TwoLevelParams> grid = frame_grid(20);
    double worst_spread = 0.0;
    double worst_oracle = 0.0;
    for (int s = 0; s < 50; ++s) {
        const two_level::BlochAngles a{testutil::uniform(rng, 0.0, kPi), testutil::uniform(rng, 0.0, 2.0 * kPi)};
        const double oracle[3] = {std::sin(a.theta) * std::cos(a.phi), std::sin(a.theta) * std::sin(a.phi),
                                  std::cos(a.theta)};
        for (int axis = 0; axis < 3; ++axis) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const TwoLevelParams& p : grid) {
                const StateCoeffs st = two_level::bloch_state(a, two_level::two_level_frame(p));
                const double e = operator_expectation(two_level::pauli(static_cast<Axis>(axis), p), st).real();
                lo = std::min(lo, e);
                hi = std::max(hi, e);
                worst_oracle = std::max(worst_oracle, std::abs(e - oracle[axis]));
            }
            worst_spread = std::max(worst_spread, hi - lo);
        }
    }
    return {worst_spread <= 1e-10 && worst_oracle <= 1e-10,
            "max spread " + fmt("%.2e", worst_spread) + ", max deviation from Hermitian-limit value " +
                fmt("%.2e", worst_oracle) + " (limit 1e-10)"};
}

Verdict su2_algebra() {
    double comm = 0.0;
    double eig_err = 0.0;
    for (const TwoLevelParams& p : frame_grid(20)) {
        const CMatrix s[3] = {two_level::pauli(Axis::X, p), two_level::pauli(Axis::Y, p),
                              two_level::pauli(Axis::Z, p)};
        for (int a = 0; a < 3; ++a) {
            const int b = (a + 1) % 3;
            const int c = (a + 2) % 3;
            comm = std::max(comm, max_abs(s[a] * s[b] - s[b] * s[a] - 2.0 * kI * s[c]));
            const EigenSystem es = eig(s[a]);
            eig_err = std::max({eig_err, std::abs(es.values(0) + 1.0), std::abs(es.values(1) - 1.0)});
        }
    }
    return {comm <= 1e-10 && eig_err <= 1e-10, "max commutator residual " + fmt("%.2e", comm) +
                                                   ", max eigenvalue error " + fmt("%.2e", eig_err) +
                                                   " (limit 1e-10)"};
}

Verdict probability_consistency() {
    Rng rng(303);
    double sum_err = 0.0;
    double min_p = 1.0;
    double mean_err = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const FramePtr f = testutil::random_frame(rng, 1 + trial % 6);
        const ObservableRep obs(f, testutil::random_hermitian(rng, f->dim()));
        const StateCoeffs s = testutil::random_state(rng, f);
        const Outcomes o = outcome_probabilities(obs, s);
        double mean = 0.0;
        for (std::size_t k = 0; k < o.eigenvalues.size(); ++k) {
            min_p = std::min(min_p, o.probabilities.p[k]);
            mean += o.probabilities.p[k] * o.eigenvalues[k];
        }
        sum_err = std::max(sum_err, std::abs(o.probabilities.sum() - 1.0));
        mean_err = std::max(mean_err, std::abs(mean - expectation(obs, s)));
    }
    return {sum_err <= 1e-10 && min_p >= -1e-12 && mean_err <= 1e-9,
            "max |sum p - 1| " + fmt("%.2e", sum_err) + ", min p " + fmt("%.2e", min_p) +
                ", max |<F> - sum p f| " + fmt("%.2e", mean_err)};
}

Verdict indistinguishability() {
    Rng rng(404);
    const FramePtr hermitian = two_level::two_level_frame({kPi, 0.0});
    const FramePtr pt = two_level::two_level_frame({kPi / 2.0, 1.0});
    bool identical = true;
    double spread = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const CMatrix f = testutil::random_hermitian(rng, 2);
        const CVector c = testutil::random_vector(rng, 2);
        const Outcomes a = outcome_probabilities(ObservableRep(hermitian, f), StateCoeffs(hermitian, c));
        const Outcomes b = outcome_probabilities(ObservableRep(pt, f), StateCoeffs(pt, c));
        if (a.eigenvalues.size() != b.eigenvalues.size()) return {false, "outcome sets differ"};
        for (std::size_t k = 0; k < a.eigenvalues.size(); ++k) {
            spread = std::max(spread, std::abs(a.probabilities.p[k] - b.probabilities.p[k]));
        }
        const std::uint64_t seed = 7 + static_cast<std::uint64_t>(trial);
        identical = identical && sample_counts(a.probabilities, 1000000, seed) ==
                                     sample_counts(b.probabilities, 1000000, seed);
    }
    return {identical && spread <= 1e-10, std::string("counts identical: ") + (identical ? "yes" : "no") +
                                              ", max probability difference " + fmt("%.2e", spread) +
                                              " (limit 1e-10)"};
}

Verdict physical_unitarity() {
    Rng rng(505);
    double worst = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index n = 1 + trial % 6;
        const HamiltonianSpec h(testutil::random_frame(rng, n), testutil::random_energies(rng, n));
        const CMatrix g = metric(*h.frame()).g;
        std::vector<CVector> psi;
        for (int k = 0; k < 3; ++k) {
            const CVector c = testutil::random_vector(rng, n).normalized();
            psi.push_back(h.frame()->u() * c);
        }
        std::vector<Complex> initial;
        for (const CVector& a : psi) {
            for (const CVector& b : psi) initial.push_back(a.dot(g * b));
        }
        for (int step = 1; step <= 100; ++step) {
            const CMatrix u = propagator(h, 0.1 * step);
            std::size_t idx = 0;
            for (const CVector& a : psi) {
                for (const CVector& b : psi) {
                    const Complex now = (u * a).dot(g * (u * b));
                    worst = std::max(worst, std::abs(now - initial[idx++]));
                }
            }
        }
    }
    return {worst <= 1e-10, "max inner-product drift " + fmt("%.2e", worst) + " over 100 times (limit 1e-10)"};
}

Verdict similarity_equivalence() {
    Rng rng(606);
    double herm = 0.0;
    double spec = 0.0;
    double reality = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const FramePtr f = testutil::random_frame(rng, 1 + trial % 6);
        const ObservableRep obs(f, testutil::random_hermitian(rng, f->dim()));
        const CMatrix h = to_hermitian(obs);
        herm = std::max(herm, max_abs(h - h.adjoint()));
        const EigenSystem a = eig(h);
        const EigenSystem b = eig(obs.matrix());
        for (Eigen::Index k = 0; k < a.values.size(); ++k) spec = std::max(spec, std::abs(a.values(k) - b.values(k)));
        reality = std::max(reality, reality_check(obs.matrix(), metric(*f)).residual);
    }
    for (const TwoLevelParams& p : frame_grid(20)) {
        const MetricOp g = metric(*two_level::two_level_frame(p));
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) reality = std::max(reality, reality_check(two_level::pauli(a, p), g).residual);
    }
    return {herm <= 1e-10 && spec <= 1e-9 && reality <= 1e-9,
            "max anti-Hermitian part " + fmt("%.2e", herm) + ", max eigenvalue mismatch " + fmt("%.2e", spec) +
                ", max reality residual " + fmt("%.2e", reality)};
}

Verdict no_signalling() {
    Rng rng(707);
    const FramePtr b = two_level::two_level_frame({2.0, 0.7});
    std::vector<double> times;
    for (int k = 0; k < 20; ++k) times.push_back(0.5 * k);
    double worst = 0.0;
    for (const TwoLevelParams& p : frame_grid(10)) {
        const FramePtr a = two_level::two_level_frame(p);
        const CompositeFrame cf = tensor_frame(a, b);
        const HamiltonianSpec h(a, testutil::random_energies(rng, 2));
        const StateCoeffs s(cf.joint, testutil::random_vector(rng, 4));
        worst = std::max(worst, no_signalling_report(cf, s, h, sigma_z_array(), times).max_deviation);
    }
    return {worst <= 1e-9, "max B-marginal deviation " + fmt("%.2e", worst) + " (limit 1e-9)"};
}

Verdict open_system_shape() {
    using namespace open_system;
    const double kappa = 1.0;
    std::vector<double> grid;
    for (int k = 0; k < 40; ++k) grid.push_back(0.2 + (8.0 - 0.2) * k / 39.0);
    const double step = grid[1] - grid[0];
    double slowest = std::numeric_limits<double>::infinity();
    for (double g : grid) slowest = std::min(slowest, classify_regime(LindbladModel::balanced(kappa, g)).spectral_gap);
    const double t_max = std::max(20.0, 20.0 / slowest);
    const double dt = 0.01 / std::max({kappa, grid.back(), 1.0});
    const std::vector<ScanRow> rows =
        regime_scan(kappa, grid, DensityMatrix::pure(Eigen::Vector2cd(1.0, 0.0)), t_max, dt);

    int label_flips = 0;
    int flag_flips = 0;
    double label_flip_at = 0.0;
    double flag_flip_at = 0.0;
    int previous_label = -1;
    bool oracle_agrees = true;
    double trace = 0.0;
    double settle = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const ScanRow& r = rows[k];
        trace = std::max(trace, r.max_trace_error);
        settle = std::max(settle, max_abs(r.endpoint.rho - Matrix2::Identity() / 2.0));
        if (k > 0 && r.osc_flag != rows[k - 1].osc_flag) {
            ++flag_flips;
            flag_flip_at = r.gamma;
        }
        if (r.regime.label == Regime::Exceptional) continue;
        const int cur = r.regime.label == Regime::Oscillatory ? 0 : 1;
        oracle_agrees = oracle_agrees && (cur == 0) == testutil::bloch_block_oscillates(kappa, r.gamma);
        if (previous_label != -1 && cur != previous_label) {
            ++label_flips;
            label_flip_at = r.gamma;
        }
        previous_label = cur;
    }
    const double oracle_transition = 4.0 * kappa;
    const bool located = std::abs(label_flip_at - oracle_transition) <= step + 1e-9 &&
                         std::abs(flag_flip_at - oracle_transition) <= step + 1e-9;
    const bool pass = label_flips == 1 && flag_flips == 1 && located && oracle_agrees && trace <= 1e-8 &&
                      settle <= 1e-4;
    return {pass, "label flips " + std::to_string(label_flips) + " (at gamma " + fmt("%.2f", label_flip_at) +
                      "), trajectory flips " + std::to_string(flag_flips) + " (at gamma " +
                      fmt("%.2f", flag_flip_at) + "), max |Tr rho - 1| " + fmt("%.2e", trace) +
                      ", max distance to 1/2 " + fmt("%.2e", settle)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Verdict()> run;
    };
    const double none = std::numeric_limits<double>::infinity();
    const std::vector<Criterion> criteria{
        {1, "metric independence of expectations", 5.0, metric_independence},
        {2, "su(2) algebra and unit spectra", none, su2_algebra},
        {3, "probability consistency", none, probability_consistency},
        {4, "statistical indistinguishability", 10.0, indistinguishability},
        {5, "physical unitarity", none, physical_unitarity},
        {6, "similarity equivalence", none, similarity_equivalence},
        {7, "no-signalling", 30.0, no_signalling},
        {8, "open-system regime shape", 60.0, open_system_shape},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > c.budget_s) {
            v.pass = false;
            v.detail += "; over runtime budget " + fmt("%.0f s", c.budget_s);
        }
        if (!v.pass) ++failures;
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                    elapsed);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
