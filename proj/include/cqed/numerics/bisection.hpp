#ifndef CQED_NUMERICS_BISECTION_HPP
#define CQED_NUMERICS_BISECTION_HPP

#include <cmath>
#include <stdexcept>

namespace cqed::numerics {

struct Bracket {
    double lo;
    double hi;
};

// Locates the boundary of a monotone predicate: `holds(lo)` must be true and
// `holds(hi)` false. Returns the final bracket with hi - lo <= tol; lo is
// always a point where the predicate holds.
template <class Pred>
Bracket bisect_boundary(Pred&& holds, double lo, double hi, double tol, int max_iter = 200)
{
    if (!(lo < hi))
        throw std::invalid_argument("bisect_boundary: empty bracket");
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid))
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

// Root of a continuous f with a sign change on [a, b].
template <class F>
double bisect_root(F&& f, double a, double b, double tol, int max_iter = 200)
{
    double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (std::signbit(fa) == std::signbit(fb))
        throw std::invalid_argument("bisect_root: no sign change on bracket");
    for (int it = 0; it < max_iter && b - a > tol; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0)
            return m;
        if (std::signbit(fm) == std::signbit(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace cqed::numerics

#endif
