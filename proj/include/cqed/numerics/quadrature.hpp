#ifndef CQED_NUMERICS_QUADRATURE_HPP
#define CQED_NUMERICS_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace cqed::numerics {

// Composite Simpson rule on uniformly spaced samples. The sample count must
// be odd and at least 3.
inline double simpson(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("simpson: need an odd number (>= 3) of samples");
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < n; i += 2)
        odd += f[i];
    for (std::size_t i = 2; i + 1 < n; i += 2)
        even += f[i];
    return h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[n - 1]);
}

// Running integral I[i] = \int_{t_0}^{t_i} f, on uniformly spaced samples.
// Even nodes accumulate whole Simpson panels; odd nodes add the first half of
// the quadratic through (i-1, i, i+1), which keeps every node O(h^4) and makes
// the last entry agree with simpson().
inline std::vector<double> cumulative_simpson(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("cumulative_simpson: need an odd number (>= 3) of samples");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 2; i < n; i += 2)
        out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    for (std::size_t i = 1; i < n; i += 2) {
        out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        // The half panel can undershoot for steep non-negative data; keep the
        // running integral monotone in that case.
        if (f[i - 1] >= 0.0 && f[i] >= 0.0 && f[i + 1] >= 0.0)
            out[i] = std::clamp(out[i], out[i - 1], out[i + 1]);
    }
    return out;
}

namespace detail {
// 8-point Gauss-Legendre on [-1, 1]
inline constexpr std::array<double, 4> gl8_nodes = {
    0.1834346424956498049394761, 0.5255324099163289858177390,
    0.7966664774136267395915539, 0.9602898564975362316835609};
inline constexpr std::array<double, 4> gl8_weights = {
    0.3626837833783619829651504, 0.3137066458778872873379622,
    0.2223810344533744705443560, 0.1012285362903762591525314};
} // namespace detail

// Composite 8-point Gauss-Legendre over `panels` equal sub-intervals.
template <class F>
double gauss_legendre(F&& f, double a, double b, std::size_t panels = 64)
{
    if (panels == 0)
        throw std::invalid_argument("gauss_legendre: panels must be positive");
    const double w = (b - a) / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * w;
        const double half = 0.5 * w;
        double s = 0.0;
        for (std::size_t k = 0; k < detail::gl8_nodes.size(); ++k) {
            const double dx = half * detail::gl8_nodes[k];
            s += detail::gl8_weights[k] * (f(mid - dx) + f(mid + dx));
        }
        sum += half * s;
    }
    return sum;
}

} // namespace cqed::numerics

#endif
