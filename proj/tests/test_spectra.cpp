#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "bandspec/ensemble.hpp"
#include "bandspec/spectra.hpp"
#include "oracles.hpp"

using namespace bandspec;

namespace {

DenseMatrix random_symmetric(int n, uint64_t seed) {
    RngStream stream(seed, 0, 0);
    DenseMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = stream.normal();
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

DenseMatrix random_band_sample(int n, int b, uint64_t seed, uint32_t replica) {
    EnsembleSpec spec;
    spec.n = n;
    spec.band_width = b;
    spec.profile = make_indicator_profile(0.0, 1.0);
    spec.distribution = EntryDistribution::iid_gaussian;
    spec.seed = seed;
    return sample_matrix(spec, replica);
}

}  // namespace

TEST_SUITE_BEGIN("spectra");

TEST_CASE("symmetric eigenvalues of small closed-form matrices") {
    DenseMatrix d(3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 3.0;
    auto ev = symmetric_eigenvalues(d);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ev[2] == doctest::Approx(3.0).epsilon(1e-14));

    DenseMatrix m(2);
    m(0, 0) = 2.0;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(1, 1) = 2.0;
    ev = symmetric_eigenvalues(m);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("non-symmetric input is rejected") {
    DenseMatrix m(2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(symmetric_eigenvalues(m), std::invalid_argument);
}

TEST_CASE("genuine negative eigenvalues survive the roundoff clamp") {
    DenseMatrix m(2);
    m(0, 0) = -5.0;
    m(1, 1) = 4.0;
    auto ev = symmetric_eigenvalues(m);
    CHECK(ev[0] == doctest::Approx(-5.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("gram spectra are clamped nonnegative") {
    // nearly rank-deficient A: the smallest gram eigenvalue is pure roundoff
    DenseMatrix a(3);
    a(0, 0) = 1.0;
    a(1, 0) = 1.0 + 1e-15;
    a(2, 0) = 1.0 - 1e-15;
    auto ev = symmetric_eigenvalues(gram(a));
    for (double v : ev) CHECK(v >= 0.0);
}

TEST_CASE("singular values of closed-form matrices") {
    DenseMatrix a(2);
    a(0, 0) = 3.0;
    a(1, 0) = 4.0;
    auto sv = singular_values(a);
    CHECK(sv[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sv[1] == doctest::Approx(5.0).epsilon(1e-14));

    sv = singular_values(DenseMatrix::identity(2));
    CHECK(sv[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sv[1] == doctest::Approx(1.0).epsilon(1e-14));

    DenseMatrix t(2);
    t(0, 0) = 1.0;
    t(0, 1) = 1.0;
    t(1, 1) = 1.0;
    sv = singular_values(t);
    double golden = std::sqrt(5.0);
    CHECK(sv[0] * sv[0] == doctest::Approx((3.0 - golden) / 2.0).epsilon(1e-12));
    CHECK(sv[1] * sv[1] == doctest::Approx((3.0 + golden) / 2.0).epsilon(1e-12));
}

TEST_CASE("dual-route oracle: singular values squared equal gram eigenvalues") {
    for (uint64_t seed = 0; seed < 6; ++seed) {
        int n = 20 + static_cast<int>(seed) * 13;
        DenseMatrix a = random_band_sample(n, std::max(1, n / 3), seed, 0);
        DenseMatrix m = gram(a);
        auto ev = symmetric_eigenvalues(m);
        auto sv = singular_values(a);
        double scale = 1e-8 * (1.0 + m.frobenius_norm());
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(sv[i] * sv[i] - ev[i]) <= scale);
    }
}

TEST_CASE("both routes agree with a Jacobi oracle") {
    DenseMatrix s = random_symmetric(24, 17);
    auto ql = symmetric_eigenvalues(s);
    auto jac = oracles::jacobi_eigenvalues(s);
    for (int i = 0; i < 24; ++i)
        CHECK(ql[i] == doctest::Approx(jac[i]).epsilon(1e-10));

    DenseMatrix a = random_band_sample(24, 9, 23, 1);
    auto sv = singular_values(a);
    auto jac2 = oracles::jacobi_eigenvalues(gram(a));
    for (int i = 0; i < 24; ++i)
        CHECK(sv[i] * sv[i] == doctest::Approx(std::max(jac2[i], 0.0))
                                   .epsilon(1e-9)
                                   .scale(1.0 + std::abs(jac2[i])));
}

TEST_CASE("trace and Frobenius norm are conserved by the spectrum") {
    for (uint64_t seed = 40; seed < 44; ++seed) {
        DenseMatrix a = random_band_sample(40, 11, seed, 0);
        DenseMatrix m = gram(a);
        auto ev = symmetric_eigenvalues(m);
        double sum = 0.0, sum2 = 0.0;
        for (double v : ev) {
            sum += v;
            sum2 += v * v;
        }
        double fro2 = m.frobenius_norm() * m.frobenius_norm();
        CHECK(std::abs(sum - m.trace()) <= 1e-9 * 40 * m.frobenius_norm());
        CHECK(std::abs(sum2 - fro2) <= 1e-9 * 40 * fro2);
    }
}

TEST_CASE("empirical measure basics") {
    EmpiricalMeasure m({3.0, 1.0});
    CHECK(m.cdf(2.0) == 0.5);
    CHECK(m.cdf(3.0) == 1.0);   // right-continuity
    CHECK(m.cdf_left(3.0) == 0.5);
    CHECK(m.cdf(0.5) == 0.0);

    EmpiricalMeasure single({5.0});
    CHECK(single.count_in(0.0, 10.0) == 1.0);

    CHECK_THROWS_AS(EmpiricalMeasure({}), std::invalid_argument);
}

TEST_CASE("empirical moments") {
    EmpiricalMeasure m({1.0, 3.0});
    CHECK(m.moment(1) == doctest::Approx(2.0));
    CHECK(m.moment(2) == doctest::Approx(5.0));
    EmpiricalMeasure c({2.5, 2.5, 2.5});
    for (int k = 1; k <= 4; ++k)
        CHECK(c.moment(k) == doctest::Approx(std::pow(2.5, k)).epsilon(1e-14));
}

TEST_CASE("empirical stieltjes transform") {
    EmpiricalMeasure m({1.0, 3.0});
    auto g = m.stieltjes({0.0, 1.0});
    CHECK(g.real() == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(g.imag() == doctest::Approx(0.3).epsilon(1e-14));

    EmpiricalMeasure zero({0.0});
    auto gz = zero.stieltjes({0.0, 1.0});
    CHECK(gz.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(gz.imag() == doctest::Approx(1.0).epsilon(1e-15));

    // leading asymptotic |g + 1/z| <= max(lambda)/|z|^2
    std::complex<double> far(0.0, 1e6);
    auto gf = m.stieltjes(far);
    CHECK(std::abs(gf + 1.0 / far) <= 3.0 / (1e6 * 1e6));

    CHECK_THROWS_AS(m.stieltjes({1.0, 0.0}), std::domain_error);
}

TEST_CASE("empirical stieltjes is Nevanlinna off the real axis") {
    EmpiricalMeasure m({0.2, 0.9, 1.4, 2.7});
    for (std::complex<double> z :
         {std::complex<double>(0.5, 0.3), std::complex<double>(-1.0, 2.0),
          std::complex<double>(1.5, -0.7)}) {
        auto g = m.stieltjes(z);
        CHECK(g.imag() * z.imag() > 0.0);
        CHECK(std::abs(g) <= 1.0 / std::abs(z.imag()) + 1e-15);
    }
}

TEST_CASE("counting in closed intervals") {
    EmpiricalMeasure m({1.0, 2.0, 3.0});
    CHECK(m.count_in(1.5, 3.0) == doctest::Approx(2.0 / 3.0));
    CHECK(m.count_in(4.0, 9.0) == 0.0);
    CHECK(m.count_in(0.0, 5.0) == 1.0);
}

TEST_CASE("ks distance examples") {
    EmpiricalMeasure m({1.0, 2.0, 4.0, 8.0});
    CHECK(ks_distance(m, [&](double x) { return m.cdf(x); }) == 0.0);

    EmpiricalMeasure half({0.5});
    CHECK(ks_distance(half, [](double x) { return std::clamp(x, 0.0, 1.0); }) ==
          doctest::Approx(0.5));
}

TEST_CASE("ks distance of a sample from its own law") {
    // inverse-CDF sample of the uniform law on [0,1]; Kolmogorov quantile
    // at the 1% level for n = 1e4 is 0.0163
    std::vector<double> xs(10000);
    RngStream stream(31337, 0, 0);
    for (double& x : xs) x = stream.uniform01();
    EmpiricalMeasure m(std::move(xs));
    double d = ks_distance(m, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK(d <= 0.03);
}

TEST_SUITE_END();
