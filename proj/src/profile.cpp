#include "bandspec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bandspec {

namespace {

// Antiderivative of a piecewise-constant function given by sorted disjoint
// pieces; W(x) = int_{-inf}^{x}. Continuous and piecewise affine.
double antiderivative(const std::vector<ProfilePiece>& pieces, double x) {
    double acc = 0.0;
    for (const auto& p : pieces) {
        if (x <= p.lo) break;
        acc += p.value * (std::min(x, p.hi) - p.lo);
    }
    return acc;
}

}  // namespace

BandProfile::BandProfile(std::vector<ProfilePiece> pieces) {
    for (const auto& p : pieces) {
        if (!(p.lo < p.hi))
            throw std::invalid_argument("profile piece must have lo < hi");
        if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !std::isfinite(p.value))
            throw std::invalid_argument("profile piece must be finite");
    }
    std::erase_if(pieces, [](const ProfilePiece& p) { return p.value == 0.0; });
    std::sort(pieces.begin(), pieces.end(),
              [](const ProfilePiece& a, const ProfilePiece& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        if (pieces[i].lo < pieces[i - 1].hi)
            throw std::invalid_argument("profile pieces must be disjoint");
    }
    pieces_ = std::move(pieces);
    if (!pieces_.empty()) {
        support_lo_ = pieces_.front().lo;
        support_hi_ = pieces_.back().hi;
    }
}

double BandProfile::evaluate(double t) const {
    for (const auto& p : pieces_) {
        if (t < p.lo) return 0.0;
        if (t < p.hi) return p.value;
        // right-closed unless the next piece starts exactly at p.hi
        if (t == p.hi) {
            const ProfilePiece* next = (&p == &pieces_.back()) ? nullptr : &p + 1;
            if (!next || next->lo > t) return p.value;
        }
    }
    return 0.0;
}

double BandProfile::evaluate_squared(double t) const {
    double v = evaluate(t);
    return v * v;
}

std::vector<ProfilePiece> BandProfile::squared_pieces() const {
    std::vector<ProfilePiece> out = pieces_;
    for (auto& p : out) p.value *= p.value;
    return out;
}

double BandProfile::sup_squared() const {
    double k = 0.0;
    for (const auto& p : pieces_) k = std::max(k, p.value * p.value);
    return k;
}

bool BandProfile::is_zero() const { return pieces_.empty(); }

BandProfile make_indicator_profile(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("indicator profile requires a < b");
    return BandProfile({{a, b, 1.0}});
}

double squared_l2_norm(const BandProfile& profile, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
    double acc = 0.0;
    for (const auto& p : profile.pieces()) {
        double lo = std::max(p.lo, -nu);
        double hi = std::min(p.hi, nu);
        if (hi > lo) acc += p.value * p.value * (hi - lo);
    }
    return acc;
}

PiecewiseFunction::PiecewiseFunction(std::vector<double> breakpoints,
                                     std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.size() < 2 || breakpoints_.size() != values_.size())
        throw std::invalid_argument("piecewise function needs >= 2 matching nodes");
    if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()))
        throw std::invalid_argument("breakpoints must be sorted");
}

double PiecewiseFunction::evaluate(double t) const {
    if (t < domain_lo() || t > domain_hi())
        throw std::domain_error("piecewise function evaluated outside its domain");
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t i = (it == breakpoints_.end()) ? breakpoints_.size() - 2
                                               : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    double x0 = breakpoints_[i], x1 = breakpoints_[i + 1];
    double w = (t - x0) / (x1 - x0);
    return values_[i] * (1.0 - w) + values_[i + 1] * w;
}

double PiecewiseFunction::segment_slope(std::size_t i) const {
    return (values_[i + 1] - values_[i]) / (breakpoints_[i + 1] - breakpoints_[i]);
}

double PiecewiseFunction::segment_intercept(std::size_t i) const {
    return values_[i] - segment_slope(i) * breakpoints_[i];
}

double PiecewiseFunction::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double PiecewiseFunction::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double PiecewiseFunction::integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        acc += 0.5 * (values_[i] + values_[i + 1]) * (breakpoints_[i + 1] - breakpoints_[i]);
    return acc;
}

double PiecewiseFunction::integral_of_square() const {
    // int_0^L (y0 + s (y1-y0)/L)^2 ds = L (y0^2 + y0 y1 + y1^2) / 3
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
        double y0 = values_[i], y1 = values_[i + 1];
        acc += (breakpoints_[i + 1] - breakpoints_[i]) * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0;
    }
    return acc;
}

PiecewiseFunction PiecewiseFunction::reflected() const {
    std::vector<double> bp(breakpoints_.rbegin(), breakpoints_.rend());
    for (double& x : bp) x = -x;
    std::vector<double> vals(values_.rbegin(), values_.rend());
    return PiecewiseFunction(std::move(bp), std::move(vals));
}

PiecewiseFunction convolution_u(const BandProfile& profile, double nu) {
    if (!std::isfinite(nu))
        throw std::invalid_argument("convolution_u requires finite nu");
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");

    // u(t) = W(t + nu) - W(t - nu) where W is the antiderivative of v^2,
    // so u is affine between points where t +- nu crosses a v^2 breakpoint.
    auto sq = profile.squared_pieces();
    std::vector<double> knots = {-nu, nu};
    for (const auto& p : sq) {
        for (double edge : {p.lo, p.hi}) {
            for (double shift : {-nu, nu}) {
                double t = edge - shift;
                if (t > -nu && t < nu) knots.push_back(t);
            }
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    std::vector<double> vals(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i)
        vals[i] = antiderivative(sq, knots[i] + nu) - antiderivative(sq, knots[i] - nu);
    return PiecewiseFunction(std::move(knots), std::move(vals));
}

bool is_periodic_square(const BandProfile& profile, double nu, double tol) {
    if (!std::isfinite(nu) || !(nu > 0.0))
        throw std::invalid_argument("is_periodic_square requires finite positive nu");
    if (tol < 0.0) throw std::invalid_argument("tol must be >= 0");

    // Essential sup of |v^2(t) - v^2(t + 2 nu)| over t in [-2 nu, 0]:
    // decompose into segments on which both evaluations are constant and
    // compare at segment midpoints.
    auto sq = profile.squared_pieces();
    std::vector<double> cuts = {-2.0 * nu, 0.0};
    for (const auto& p : sq) {
        for (double edge : {p.lo, p.hi}) {
            for (double shift : {0.0, 2.0 * nu}) {
                double t = edge - shift;
                if (t > -2.0 * nu && t < 0.0) cuts.push_back(t);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double sup = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        sup = std::max(sup, std::abs(profile.evaluate_squared(mid) -
                                     profile.evaluate_squared(mid + 2.0 * nu)));
    }
    return sup <= tol;
}

ExpansionCoefficients expansion_coefficients(const BandProfile& profile, double nu) {
    PiecewiseFunction u = convolution_u(profile, nu);
    double inv2nu = 1.0 / (2.0 * nu);
    double a1 = inv2nu * u.integral();
    double a2 = inv2nu * u.integral_of_square();
    // cross term: (2 nu)^-1 int u(-tau)^2 d tau, via the reflected function
    double cross = inv2nu * u.reflected().integral_of_square();
    return {a1, a2, a2 + cross};
}

}  // namespace bandspec
