#ifndef CQED_NUMERICS_SPLINE_HPP
#define CQED_NUMERICS_SPLINE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace cqed::numerics {

// Cubic spline with prescribed first derivatives at both ends (clamped).
// Knots need not be uniform. Outside [x_front, x_back] the spline is not
// extrapolated; callers clamp or zero-extend as they need.
class ClampedCubicSpline
{
public:
    ClampedCubicSpline(std::span<const double> x, std::span<const double> y,
                       double slope_front = 0.0, double slope_back = 0.0);

    double value(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    // Exact \int s(t)^2 dt over the knot range (4-point Gauss per segment).
    double integral_of_square() const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }

private:
    std::size_t segment(double t) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_; // second derivatives at the knots
};

} // namespace cqed::numerics

#endif
