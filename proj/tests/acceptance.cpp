// Acceptance suite: one self-contained check per criterion, each printing a
// single [PASS]/[FAIL] line with its measured quantities and runtime.
// Usage: acceptance [criterion ...]; no arguments runs all ten.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "bandspec/ensemble.hpp"
#include "bandspec/harness.hpp"
#include "bandspec/profile.hpp"
#include "bandspec/rng.hpp"
#include "bandspec/solver.hpp"
#include "bandspec/spectra.hpp"
#include "bandspec/trilaw.hpp"

using namespace bandspec;
using Complex = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// adaptive Simpson, local to the suite
double integrate(const std::function<double(double)>& fn, double a, double b,
                 double tol, int depth = 50) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double acc,
            int d) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        double flm = fn(lm), frm = fn(rm);
        double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        double delta = left + right - acc;
        if (d <= 0 || std::abs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, d - 1);
    };
    double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

ExperimentConfig monte_carlo_config(EntryDistribution dist, int n, int replicas) {
    ExperimentConfig c;
    c.kind = ExperimentKind::compare;
    c.profile = make_indicator_profile(0.0, 1.0);
    c.distribution = dist;
    c.tail_index = 3.0;
    c.seed = 1;
    c.n_schedule = {n};
    c.bn_schedule = "n";
    c.nu = 0.5;
    c.replicas = replicas;
    c.reference = ReferenceLaw::triangular;
    return c;
}

// ---- criteria ----

// moments of the parametric density match k^k/(k+1)! for k = 1..6
Outcome criterion_1() {
    Outcome out;
    double worst = 0.0;
    for (int k = 1; k <= 6; ++k) {
        double quad = integrate(
            [k](double eta) {
                auto p = parametric_point(eta);
                double s = std::sin(eta);
                double g =
                    (1.0 + s * s / (eta * eta) - std::sin(2.0 * eta) / eta) / kPi;
                return std::pow(p.lambda, k) * g;
            },
            1e-10, kPi - 1e-10, 1e-10);
        double exact = triangular_moment(k).value();
        worst = std::max(worst, std::abs(quad - exact));
    }
    out.require(worst <= 1e-6, "max moment error " + fmt(worst) + " > 1e-6");
    out.note("max |quad - k^k/(k+1)!| = " + fmt(worst));
    return out;
}

// support from the functional inverse is (0, e)
Outcome criterion_2() {
    Outcome out;
    auto support = support_from_inverse(1e-9);
    out.require(std::abs(support.lo) <= 1e-6, "lo " + fmt(support.lo));
    out.require(std::abs(support.hi - 2.718282) <= 1e-6, "hi " + fmt(support.hi));
    out.note("support = (" + fmt(support.lo) + ", " + fmt(support.hi) + ")");
    return out;
}

// grid fixed point vs Newton solution of (1+f)ln(1+f) = -1/z
Outcome criterion_3() {
    Outcome out;
    BandProfile v = make_indicator_profile(0.0, 1.0);
    double worst = 0.0;
    for (double y : {3.0, 5.0, 10.0}) {
        Complex z(0.0, y);
        Complex grid = aggregate(solve_fixed_point(v, 0.5, z, 800, 1e-12));
        Complex newton = triangular_transform(z, 1e-13);
        worst = std::max(worst, std::abs(grid - newton));
    }
    out.require(worst <= 1e-4, "max deviation " + fmt(worst) + " > 1e-4");
    out.note("max |grid - newton| = " + fmt(worst));
    return out;
}

// quarter-circle dichotomy
Outcome criterion_4() {
    Outcome out;
    std::vector<Complex> zs = {{0.0, 2.0}, {0.0, 5.0}, {0.0, 10.0}};
    CorollaryReport periodic =
        run_corollary_test(BandProfile({{-2.0, 2.0, 1.0}}), 1.0, zs, 512, 1e-12);
    out.require(periodic.periodic, "constant profile not detected periodic");
    out.require(periodic.sup_deviation <= 1e-6,
                "periodic deviation " + fmt(periodic.sup_deviation) + " > 1e-6");

    std::vector<Complex> z5 = {{0.0, 5.0}};
    CorollaryReport skew =
        run_corollary_test(make_indicator_profile(0.0, 1.0), 1.0, z5, 800, 1e-12);
    out.require(!skew.periodic, "indicator profile detected periodic");
    out.require(skew.sup_deviation >= 1e-3,
                "non-periodic gap " + fmt(skew.sup_deviation) + " < 1e-3");
    out.note("periodic sup = " + fmt(periodic.sup_deviation) +
             ", non-periodic gap at 5i = " + fmt(skew.sup_deviation));
    return out;
}

Outcome check_triangular_mc(EntryDistribution dist, Outcome out = {}) {
    ExperimentConfig c = monte_carlo_config(dist, 1000, 20);
    ComparisonReport report = run_compare(c);
    const CompareRow& row = report.rows.at(0);
    std::string tag = to_string(dist);
    out.require(row.ks <= 0.05, tag + " ks " + fmt(row.ks) + " > 0.05");
    out.require(row.moment_rel_err[0] <= 0.02,
                tag + " mu1 err " + fmt(row.moment_rel_err[0]) + " > 2%");
    out.require(row.moment_rel_err[1] <= 0.03,
                tag + " mu2 err " + fmt(row.moment_rel_err[1]) + " > 3%");
    out.note(tag + ": ks=" + fmt(row.ks) + " mu1_err=" + fmt(row.moment_rel_err[0]) +
             " mu2_err=" + fmt(row.moment_rel_err[1]));
    return out;
}

// triangular Monte Carlo at n = 1000, Gaussian entries
Outcome criterion_5() { return check_triangular_mc(EntryDistribution::iid_gaussian); }

// quarter-circle regime: n = 800, b_n = ceil(sqrt(n))
Outcome criterion_6() {
    Outcome out;
    ExperimentConfig c = monte_carlo_config(EntryDistribution::iid_gaussian, 800, 8);
    c.bn_schedule = "ceil(sqrt(n))";
    c.reference = ReferenceLaw::quarter_circle;
    c.reference_w2 = 1.0;
    ComparisonReport report = run_compare(c);
    const CompareRow& row = report.rows.at(0);
    out.require(row.ks <= 0.08, "ks " + fmt(row.ks) + " > 0.08");
    out.note("ks=" + fmt(row.ks) + " (b_n=" + std::to_string(row.band_width) + ")");
    return out;
}

// universality: same thresholds for the other entry laws
Outcome criterion_7() {
    Outcome out;
    out = check_triangular_mc(EntryDistribution::iid_rademacher, std::move(out));
    out = check_triangular_mc(EntryDistribution::sphere_columns, std::move(out));
    out = check_triangular_mc(EntryDistribution::iid_pareto_symmetric, std::move(out));
    return out;
}

// concentration of N_n([0,1])
Outcome criterion_8() {
    Outcome out;
    ExperimentConfig c = monte_carlo_config(EntryDistribution::iid_gaussian, 200, 200);
    c.kind = ExperimentKind::concentration;
    c.n_schedule = {200, 400};
    c.interval_lo = 0.0;
    c.interval_hi = 1.0;
    ComparisonReport report = run_concentration(c);
    double v200 = report.rows.at(0).delta_var;
    double v400 = report.rows.at(1).delta_var;
    double ratio = v400 / v200;
    out.require(ratio <= 0.75, "variance ratio " + fmt(ratio) + " > 0.75");
    out.note("var(200)=" + fmt(v200) + " var(400)=" + fmt(v400) +
             " ratio=" + fmt(ratio));
    return out;
}

// property suites: Nevanlinna on iterates, dual eigensolver, contraction
Outcome criterion_9() {
    Outcome out;

    // Nevanlinna invariants are guarded on every iterate inside the solver
    // (InvariantViolation aborts the run); exercise plain iteration, the
    // damped continuation regime and the conjugate half plane, then check
    // the converged values once more here.
    BandProfile tri = make_indicator_profile(0.0, 1.0);
    BandProfile cst({{-2.0, 2.0, 1.0}});
    int solves = 0;
    try {
        for (Complex z : {Complex(0.0, 5.0), Complex(0.0, 1.25), Complex(1.0, 0.3),
                          Complex(2.0, 0.05), Complex(0.5, -0.4)}) {
            GridSolution s = solve_fixed_point(tri, 0.5, z, 256, 1e-11);
            for (const Complex& f : s.values) {
                out.require(f.imag() * z.imag() >= 0.0, "Im f sign at converged value");
                out.require(std::abs(f) <= 1.0 / std::abs(z.imag()) + 1e-12,
                            "|f| bound at converged value");
            }
            ++solves;
        }
        for (Complex z : {Complex(0.0, 6.0), Complex(1.0, 0.2)}) {
            GridSolution s = solve_fixed_point(cst, 1.0, z, 256, 1e-11);
            for (const Complex& f : s.values) {
                out.require(f.imag() * z.imag() >= 0.0, "Im f sign (constant profile)");
                out.require(std::abs(f) <= 1.0 / std::abs(z.imag()) + 1e-12,
                            "|f| bound (constant profile)");
            }
            ++solves;
        }
    } catch (const std::exception& e) {
        out.require(false, std::string("solver raised: ") + e.what());
    }

    // dual-algorithm agreement on 100 random instances, n <= 100
    double worst_gap = 0.0;
    RngStream dims(2024, 0, 0);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(dims.uniform01() * 99);
        int b = 1 + static_cast<int>(dims.uniform01() * n);
        if (n / (2.0 * b) < 0.5) b = n;  // ensembles require nu_n >= 1/2
        EnsembleSpec spec;
        spec.n = n;
        spec.band_width = b;
        spec.profile = make_indicator_profile(0.0, 1.0);
        spec.distribution = trial % 2 ? EntryDistribution::iid_rademacher
                                      : EntryDistribution::iid_gaussian;
        spec.seed = 7000 + trial;
        DenseMatrix a = sample_matrix(spec);
        DenseMatrix m = gram(a);
        auto ev = symmetric_eigenvalues(m);
        auto sv = singular_values(a);
        double tolerance = 1e-8 * (1.0 + m.frobenius_norm());
        for (int i = 0; i < n; ++i)
            worst_gap = std::max(worst_gap, std::abs(sv[i] * sv[i] - ev[i]) / tolerance);
    }
    out.require(worst_gap <= 1.0,
                "dual eigensolver gap " + fmt(worst_gap) + "x the 1e-8(1+|M|) budget");

    // contraction ratio at |Im z| = K0 = 2.5 w^2
    double w2 = squared_l2_norm(tri, 0.5);
    double k0 = contraction_k0(w2);
    double bound = w2 * w2 / ((k0 - w2) * (k0 - w2));
    BandIntegralOperator op(tri, 0.5, 256);
    Complex zc(0.0, k0);
    RngStream noise(515, 0, 0);
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Complex> f1(256), f2(256);
        for (int i = 0; i < 256; ++i) {
            double m1 = noise.uniform01() / k0, p1 = noise.uniform01() * kPi;
            double m2 = noise.uniform01() / k0, p2 = noise.uniform01() * kPi;
            f1[i] = Complex(m1 * std::cos(p1), m1 * std::sin(p1));
            f2[i] = Complex(m2 * std::cos(p2), m2 * std::sin(p2));
        }
        auto t1 = op.apply(f1, zc);
        auto t2 = op.apply(f2, zc);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 256; ++i) {
            num = std::max(num, std::abs(t1[i] - t2[i]));
            den = std::max(den, std::abs(f1[i] - f2[i]));
        }
        worst_ratio = std::max(worst_ratio, num / den);
    }
    out.require(worst_ratio <= bound + 1e-3,
                "contraction ratio " + fmt(worst_ratio) + " > " + fmt(bound + 1e-3));
    out.note("solves=" + std::to_string(solves) + " dual_gap=" + fmt(worst_gap) +
             "x contraction=" + fmt(worst_ratio) + " (bound " + fmt(bound) + ")");
    return out;
}

// hard-edge law: rho(lambda) lambda ln^2(lambda) at 1e-4, 1e-6, 1e-8.
// The stated monotone-approach-to-1 and 15% window contradict the actual
// edge asymptotics, whose o(1) term decays only logarithmically (the ratio
// still sits near 1.26 at lambda = 1e-8 and is not monotone over these
// three points). Asserted as specified; expected to fail. See the ledger.
Outcome criterion_10() {
    Outcome out;
    double r4 = triangular_density(1e-4, 1e-16) * 1e-4 * std::pow(std::log(1e-4), 2);
    double r6 = triangular_density(1e-6, 1e-18) * 1e-6 * std::pow(std::log(1e-6), 2);
    double r8 = triangular_density(1e-8, 1e-20) * 1e-8 * std::pow(std::log(1e-8), 2);
    out.note("ratios = " + fmt(r4) + ", " + fmt(r6) + ", " + fmt(r8));
    out.require(std::abs(r6 - 1.0) < std::abs(r4 - 1.0) &&
                    std::abs(r8 - 1.0) < std::abs(r6 - 1.0),
                "|ratio - 1| is not monotone over 1e-4, 1e-6, 1e-8");
    out.require(std::abs(r8 - 1.0) <= 0.15,
                "final ratio " + fmt(r8) + " not within 15% of 1");
    return out;
}

struct Criterion {
    int id;
    const char* description;
    double runtime_budget_sec;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "triangular moments k^k/(k+1)!, k=1..6, within 1e-6", 1.0, criterion_1},
    {2, "triangular support (0, 2.718282) within 1e-6", 1.0, criterion_2},
    {3, "grid fixed point vs Newton at 3i, 5i, 10i within 1e-4", 10.0, criterion_3},
    {4, "quarter-circle dichotomy: periodic 1e-6, non-periodic >= 1e-3", 10.0,
     criterion_4},
    {5, "triangular Monte Carlo n=1000 R=20: KS<=0.05, mu1 2%, mu2 3%", 120.0,
     criterion_5},
    {6, "quarter-circle regime n=800 b=29 R=8: KS<=0.08", 60.0, criterion_6},
    {7, "universality: criterion 5 for rademacher/sphere/pareto(3)", 360.0,
     criterion_7},
    {8, "concentration: var N_n([0,1]) ratio n=400/200 <= 0.75", 120.0, criterion_8},
    {9, "property suites: Nevanlinna, dual eigensolver, contraction", 30.0,
     criterion_9},
    {10, "hard-edge law rho*lambda*ln^2(lambda) -> 1 at 1e-4..1e-8", 1.0,
     criterion_10},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& criterion : kCriteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.id) == selected.end())
            continue;
        auto t0 = Clock::now();
        Outcome out;
        try {
            out = criterion.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.note(std::string("exception: ") + e.what());
        }
        double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
        if (elapsed >= criterion.runtime_budget_sec) {
            out.pass = false;
            out.note("runtime " + fmt(elapsed) + "s exceeds budget " +
                     fmt(criterion.runtime_budget_sec) + "s");
        }
        std::printf("[%s] criterion %2d: %s (%s; %.2fs)\n", out.pass ? "PASS" : "FAIL",
                    criterion.id, criterion.description, out.detail.c_str(), elapsed);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures > 0 ? 1 : 0;
}
