#include "bandspec/trilaw.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bandspec/errors.hpp"

namespace bandspec {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// One Halley step for c e^c = y. Cubic convergence and markedly more
// robust than Newton near the branch point c = -1.
Complex halley_step(Complex c, Complex y) {
    Complex ec = std::exp(c);
    Complex f = c * ec - y;
    Complex fp = ec * (c + 1.0);
    Complex fpp = ec * (c + 2.0);
    Complex denom = fp - f * fpp / (2.0 * fp);
    return c - f / denom;
}

// Starting guess for the principal branch of c e^c = y.
Complex lambert_start(Complex y) {
    double ay = std::abs(y);
    if (ay < 0.25) {
        // series W(y) = y - y^2 + (3/2) y^3 - ...
        return y * (1.0 - y + 1.5 * y * y);
    }
    if (ay > 3.0) {
        Complex l1 = std::log(y);
        return l1 - std::log(l1);
    }
    return std::log(1.0 + y);  // adequate in the middle zone
}

// Principal-branch solve of c e^c = y by damped Halley iteration.
// Returns c or NaN on stagnation.
Complex lambert_principal(Complex y, int max_steps, Complex warm,
                          bool have_warm) {
    Complex c = have_warm ? warm : lambert_start(y);
    double best = std::numeric_limits<double>::infinity();
    Complex best_c = c;
    for (int i = 0; i < max_steps; ++i) {
        Complex next = halley_step(c, y);
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
        double res = std::abs(next * std::exp(next) - y);
        if (res < best) {
            best = res;
            best_c = next;
        }
        if (std::abs(next - c) <= 1e-16 * (1.0 + std::abs(next))) {
            return next;
        }
        c = next;
    }
    return best_c;
}

double residual_f_form(Complex f, Complex z) {
    return std::abs((1.0 + f) * std::log(1.0 + f) + 1.0 / z);
}

}  // namespace

std::complex<double> triangular_transform(std::complex<double> z, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (z == 0.0) throw std::domain_error("triangular transform undefined at z = 0");
    if (z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= kE)
        throw std::domain_error(
            "z on the support [0, e]; evaluate at z + i*eps instead");

    // The iteration can settle on another branch of c e^c = -1/z with a
    // perfect c-space residual. The branch forced by f -> -1/z at infinity
    // has ln(1+f) in the principal strip with Im matching the half plane of
    // z (a real c >= -1 on the real axis), and that is what gets accepted.
    auto branch_ok = [&z](Complex f) {
        Complex cp = std::log(1.0 + f);
        if (z.imag() > 0.0) return cp.imag() >= -1e-12;
        if (z.imag() < 0.0) return cp.imag() <= 1e-12;
        return std::abs(cp.imag()) <= 1e-12 && cp.real() >= -1.0 - 1e-12;
    };

    const Complex y = -1.0 / z;
    Complex c = lambert_principal(y, 100, Complex{}, false);
    Complex f = std::exp(c) - 1.0;

    if (!(residual_f_form(f, z) <= tol) || !branch_ok(f)) {
        // near the support the direct start lands next to the branch cut of
        // the principal W; descend to z vertically through the half plane
        // containing z, warm-starting along the way
        double side = z.imag() < 0.0 ? -1.0 : 1.0;
        double gap = std::max(3.0, 2.0 * std::abs(z));
        Complex warm{};
        bool have_warm = false;
        for (; gap > 1e-9 * (1.0 + std::abs(z)); gap *= 0.7) {
            Complex zs = z + Complex(0.0, side * gap);
            warm = lambert_principal(-1.0 / zs, 100, warm, have_warm);
            have_warm = true;
        }
        c = lambert_principal(y, 100, warm, have_warm);
        f = std::exp(c) - 1.0;
    }

    double res_f = residual_f_form(f, z);
    if (!(res_f <= tol))
        throw ConvergenceError("triangular transform Newton stagnated", res_f);
    if (!branch_ok(f))
        throw ConvergenceError("triangular transform settled on a wrong branch",
                               res_f);
    return f;
}

ParametricPoint parametric_point(double eta) {
    if (!(eta > 0.0) || !(eta < kPi))
        throw std::domain_error("parametric point requires eta in (0, pi)");
    double s = std::sin(eta);
    double lambda = std::exp(eta * std::cos(eta) / s) * s / eta;
    double rho = s * s / (kPi * lambda * eta);
    return {lambda, rho};
}

namespace {

double lambda_of_eta(double eta) { return parametric_point(eta).lambda; }

// lambda(eta) decreases from e (eta -> 0) to 0 (eta -> pi). Checked once at
// startup on a dense grid rather than assumed. Exp underflow sends the far
// tail to exactly 0, so strictness is only required above the underflow
// floor.
void ensure_parametric_monotone() {
    static const bool ok = [] {
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 1; i < 10000; ++i) {
            double eta = kPi * i / 10000.0;
            double l = lambda_of_eta(eta);
            if (l < 1e-290) break;
            if (!(l < prev)) return false;
            prev = l;
        }
        return true;
    }();
    if (!ok)
        throw InvariantViolation("parametric map lambda(eta) is not monotone");
}

// eta with lambda(eta) = lambda, |lambda(eta) - lambda| <= tol.
double eta_of_lambda(double lambda, double tol) {
    ensure_parametric_monotone();
    double lo = 1e-15, hi = kPi - 1e-15;
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        double l = lambda_of_eta(mid);
        if (std::abs(l - lambda) <= tol) return mid;
        if (l > lambda)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 4.0 * std::numeric_limits<double>::epsilon() * kPi) break;
    }
    if (std::abs(lambda_of_eta(mid) - lambda) >
        std::max(tol, 1e-12 * std::max(1.0, lambda)))
        throw ConvergenceError("parametric inversion did not reach tolerance",
                               std::abs(lambda_of_eta(mid) - lambda));
    return mid;
}

// CDF integrand in eta: rho(lambda(eta)) |dlambda/deta| reduces to
// (1 + sin^2(eta)/eta^2 - sin(2 eta)/eta) / pi, smooth on (0, pi].
double cdf_integrand(double eta) {
    double s = std::sin(eta);
    return (1.0 + s * s / (eta * eta) - std::sin(2.0 * eta) / eta) / kPi;
}

double adaptive_simpson(double (*fn)(double), double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = fn(lm), frm = fn(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0)
        throw ConvergenceError("adaptive quadrature recursion exhausted",
                               std::abs(delta));
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(double (*fn)(double), double a, double b, double tol) {
    if (b <= a) return 0.0;
    double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(fn, a, b, fa, fm, fb, whole, tol, 60);
}

}  // namespace

double triangular_density(double lambda, double tol) {
    if (lambda <= 0.0)
        throw std::domain_error("hard edge: density undefined for lambda <= 0");
    if (lambda >= kE) return 0.0;
    double eta = eta_of_lambda(lambda, tol);
    double s = std::sin(eta);
    return s * s / (kPi * lambda * eta);
}

double triangular_cdf(double lambda, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (lambda <= 0.0) return 0.0;
    if (lambda >= kE) return 1.0;
    ensure_parametric_monotone();
    // eta error propagates with |d cdf/d eta| = integrand <= ~0.36
    double eta = eta_of_lambda(lambda, std::max(1e-14, tol));
    return integrate(&cdf_integrand, eta, kPi, 0.5 * tol);
}

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

std::string int128_str(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    std::string s;
    while (u > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    return neg ? "-" + s : s;
}

}  // namespace

double Rational::value() const {
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::str() const { return int128_str(num) + "/" + int128_str(den); }

Rational triangular_moment(int k) {
    if (k < 1) throw std::invalid_argument("moment order must be >= 1");
    if (k > 20)
        throw std::out_of_range("moment order above 20 overflows exact arithmetic");
    __int128 num = 1;
    for (int i = 0; i < k; ++i) num *= k;
    __int128 den = 1;
    for (int i = 2; i <= k + 1; ++i) den *= i;
    __int128 g = gcd128(num, den);
    return {num / g, den / g};
}

double inverse_x(double f) {
    if (f <= -1.0 || f == 0.0)
        throw std::domain_error("inverse_x requires f > -1, f != 0");
    return -1.0 / ((1.0 + f) * std::log1p(f));
}

double inverse_x_derivative(double f) {
    if (f <= -1.0 || f == 0.0)
        throw std::domain_error("inverse_x_derivative requires f > -1, f != 0");
    double g = (1.0 + f) * std::log1p(f);
    return (std::log1p(f) + 1.0) / (g * g);
}

SupportInterval support_from_inverse(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    // critical point of (1+f)ln(1+f): ln(1+f) + 1 = 0, bisected to machine
    // precision; x has a quadratic extremum there so x(f*) is fully accurate
    double lo = -1.0 + 1e-12, hi = -1e-12;
    for (int i = 0; i < 200 && hi - lo > std::numeric_limits<double>::epsilon(); ++i) {
        double mid = 0.5 * (lo + hi);
        if (std::log1p(mid) + 1.0 < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double f_star = 0.5 * (lo + hi);
    double upper = inverse_x(f_star);

    // x increases on (f*, 0) up to +inf and on (0, inf) up to 0-; the edge
    // of the second image is the large-f limit of x
    double f_large = std::max(1e12, 1.0 / tol);
    double lower = inverse_x(f_large);
    return {lower, upper};
}

}  // namespace bandspec
