#include <cqed/numerics/spline.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace cqed::numerics {

ClampedCubicSpline::ClampedCubicSpline(std::span<const double> x, std::span<const double> y,
                                       double slope_front, double slope_back)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), m_(x.size(), 0.0)
{
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw std::invalid_argument("ClampedCubicSpline: need >= 2 knots and matching values");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("ClampedCubicSpline: knots must be strictly ascending");

    // Tridiagonal system for the knot curvatures (Thomas algorithm).
    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
    const double h0 = x_[1] - x_[0];
    diag[0] = h0 / 3.0;
    sup[0] = h0 / 6.0;
    rhs[0] = (y_[1] - y_[0]) / h0 - slope_front;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        sub[i] = hl / 6.0;
        diag[i] = (hl + hr) / 3.0;
        sup[i] = hr / 6.0;
        rhs[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    const double hn = x_[n - 1] - x_[n - 2];
    sub[n - 1] = hn / 6.0;
    diag[n - 1] = hn / 3.0;
    rhs[n - 1] = slope_back - (y_[n - 1] - y_[n - 2]) / hn;

    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    m_[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
}

std::size_t ClampedCubicSpline::segment(double t) const
{
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    if (i == 0)
        return 0;
    return std::min(i - 1, x_.size() - 2);
}

double ClampedCubicSpline::value(double t) const
{
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1]
        + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double ClampedCubicSpline::derivative(double t) const
{
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h
        - (3.0 * a * a - 1.0) / 6.0 * h * m_[i]
        + (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
}

double ClampedCubicSpline::second_derivative(double t) const
{
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

double ClampedCubicSpline::integral_of_square() const
{
    static constexpr std::array<double, 2> nodes = {0.3399810435848562648026658,
                                                    0.8611363115940525752239465};
    static constexpr std::array<double, 2> weights = {0.6521451548625461426269361,
                                                      0.3478548451374538573730639};
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const double mid = 0.5 * (x_[i] + x_[i + 1]);
        const double half = 0.5 * (x_[i + 1] - x_[i]);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double lo = value(mid - half * nodes[k]);
            const double hi = value(mid + half * nodes[k]);
            sum += half * weights[k] * (lo * lo + hi * hi);
        }
    }
    return sum;
}

} // namespace cqed::numerics
