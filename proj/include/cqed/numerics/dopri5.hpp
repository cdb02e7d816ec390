#ifndef CQED_NUMERICS_DOPRI5_HPP
#define CQED_NUMERICS_DOPRI5_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqed::numerics {

class StepSizeUnderflow : public std::runtime_error
{
public:
    explicit StepSizeUnderflow(double t)
        : std::runtime_error("dopri5: step size underflow at t = " + std::to_string(t)), time(t)
    {
    }
    double time;
};

struct Dopri5Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double min_step = 1e-14;
    double max_step = 0.0; // 0 means unbounded
};

// Dormand-Prince 5(4) embedded pair with the usual PI-free step controller.
// The state is a fixed-size real vector; complex systems pack re/im parts.
template <std::size_t N>
class Dopri5
{
public:
    using State = std::array<double, N>;

    explicit Dopri5(Dopri5Options opt = {}) : opt_(opt) {}

    // Integrates y from t to t_end in place. `h` carries the step size
    // suggestion between calls. Returns the number of accepted steps.
    template <class Rhs>
    std::size_t advance(Rhs&& rhs, double& t, State& y, double t_end, double& h) const
    {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        // b - b* (difference to the embedded 4th-order weights)
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        std::size_t accepted = 0;
        if (h <= 0.0)
            h = (t_end - t);
        State k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
        rhs(t, y, k1);
        while (t < t_end) {
            if (opt_.max_step > 0.0)
                h = std::min(h, opt_.max_step);
            bool last = false;
            const double h_full = h;
            if (t + h >= t_end) {
                h = t_end - t;
                last = true;
            }
            if (h < opt_.min_step && !last)
                throw StepSizeUnderflow(t);

            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * a21 * k1[i];
            rhs(t + c2 * h, tmp, k2);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            rhs(t + c3 * h, tmp, k3);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            rhs(t + c4 * h, tmp, k4);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            rhs(t + c5 * h, tmp, k5);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i]
                    + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            rhs(t + h, tmp, k6);
            for (std::size_t i = 0; i < N; ++i)
                ynew[i] = y[i]
                    + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            rhs(t + h, ynew, k7);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double e = h
                    * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i]
                       + e7 * k7[i]);
                const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err = std::max(err, std::abs(e) / sc);
            }

            if (err <= 1.0) {
                t = last ? t_end : t + h;
                y = ynew;
                k1 = k7; // first-same-as-last
                ++accepted;
                const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                if (!last)
                    h *= fac;
                else
                    h = std::max(h * fac, h_full);
            } else {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
                if (h < opt_.min_step)
                    throw StepSizeUnderflow(t);
            }
        }
        return accepted;
    }

private:
    Dopri5Options opt_;
};

} // namespace cqed::numerics

#endif
