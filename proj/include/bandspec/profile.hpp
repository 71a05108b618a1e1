#pragma once

#include <cstddef>
#include <vector>

namespace bandspec {

struct ProfilePiece {
    double lo, hi;  // interval [lo, hi)
    double value;
};

// Piecewise-constant band shape v with compact support. Restricting to
// piecewise-constant v keeps every derived integral (w^2, u, expansion
// coefficients) in exact arithmetic and makes the periodicity test
// decidable on the representation itself.
//
// Evaluation convention: pieces are half-open [lo, hi), except that the
// right endpoint of a piece with no successor piece starting there takes
// the value of that piece. An indicator built from a single piece is
// therefore closed at both ends, so the band produced by v = indicator
// on [0,1] includes the principal diagonal and the full sub-band edge.
class BandProfile {
public:
    BandProfile() = default;  // identically zero
    explicit BandProfile(std::vector<ProfilePiece> pieces);

    double evaluate(double t) const;          // v(t)
    double evaluate_squared(double t) const;  // v^2(t)

    const std::vector<ProfilePiece>& pieces() const { return pieces_; }
    std::vector<ProfilePiece> squared_pieces() const;

    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }
    double support_length() const { return support_hi_ - support_lo_; }
    double sup_squared() const;  // K = max_t v^2(t)
    bool is_zero() const;

private:
    std::vector<ProfilePiece> pieces_;  // sorted, disjoint, nonzero values
    double support_lo_ = 0.0;
    double support_hi_ = 0.0;
};

// v = indicator of [a, b], closed at both endpoints. Throws
// std::invalid_argument unless a < b.
BandProfile make_indicator_profile(double a, double b);

// w^2 = integral of v^2 over [-nu, nu]; nu may be +infinity.
double squared_l2_norm(const BandProfile& profile, double nu);

// Continuous piecewise-affine function, stored as breakpoints and nodal
// values (affine between nodes, so continuity is structural).
class PiecewiseFunction {
public:
    PiecewiseFunction(std::vector<double> breakpoints, std::vector<double> values);

    double evaluate(double t) const;
    double domain_lo() const { return breakpoints_.front(); }
    double domain_hi() const { return breakpoints_.back(); }
    std::size_t segment_count() const { return breakpoints_.size() - 1; }
    double segment_slope(std::size_t i) const;
    double segment_intercept(std::size_t i) const;
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }

    double min_value() const;
    double max_value() const;
    double integral() const;            // exact
    double integral_of_square() const;  // exact (piecewise quadratic)
    PiecewiseFunction reflected() const;  // t -> f(-t)

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

// u(t) = integral over [-nu, nu] of v^2(t - tau) d tau, as an exact
// piecewise-affine function on [-nu, nu]. Requires finite nu.
PiecewiseFunction convolution_u(const BandProfile& profile, double nu);

// True iff v^2 restricted to [-2 nu, 2 nu] is the restriction of a
// 2 nu-periodic function: sup over segment overlaps of
// |v^2(t) - v^2(t + 2 nu)| on [-2 nu, 0] is <= tol.
bool is_periodic_square(const BandProfile& profile, double nu, double tol = 0.0);

struct ExpansionCoefficients {
    double a1;        // (2 nu)^-1 int u
    double a2_paper;  // (2 nu)^-1 int u^2
    double mu2;       // a2_paper plus the convolution cross term; the true
                      // second moment of the limit law
};

// Large-|z| expansion data of the limiting Stieltjes transform, computed
// exactly from the piecewise representation. mu2 adds to a2_paper the
// cross term (2 nu)^-1 int int v^2(t-tau) u(-tau) d tau d t, which the
// inner-integral identity int_{[-nu,nu]} v^2(t-tau) dt = u(-tau) reduces
// to a second copy of (2 nu)^-1 int u^2.
ExpansionCoefficients expansion_coefficients(const BandProfile& profile, double nu);

}  // namespace bandspec
