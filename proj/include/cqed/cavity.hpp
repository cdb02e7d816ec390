#ifndef CQED_CAVITY_HPP
#define CQED_CAVITY_HPP

#include <limits>
#include <numbers>
#include <stdexcept>

namespace cqed {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Converts a frequency quoted as "2pi x f MHz" into angular frequency in rad/us.
constexpr double angular_from_mhz(double f_mhz) { return two_pi * f_mhz; }
constexpr double mhz_from_angular(double w) { return w / two_pi; }

// Atom-cavity constants, all angular frequencies in rad/us.
//   g      atom-cavity coupling (|x,0> <-> |g,1>, effective Rabi frequency 2g)
//   kappa  cavity field decay rate
//   gamma  atomic polarisation decay rate of |x,0>
struct CavityParams {
    double g;
    double kappa;
    double gamma;

    static CavityParams from_mhz(double g_mhz, double kappa_mhz, double gamma_mhz)
    {
        return CavityParams{angular_from_mhz(g_mhz), angular_from_mhz(kappa_mhz),
                            angular_from_mhz(gamma_mhz)}
            .checked();
    }

    CavityParams checked() const
    {
        if (!(g > 0.0))
            throw std::invalid_argument("cavity: g must be positive");
        if (!(kappa > 0.0))
            throw std::invalid_argument("cavity: kappa must be positive");
        if (!(gamma >= 0.0))
            throw std::invalid_argument("cavity: gamma must be non-negative");
        return *this;
    }

    bool lossless() const { return gamma == 0.0; }

    // 2C = g^2 / (kappa gamma); infinite for a lossless atom.
    double two_c() const
    {
        return lossless() ? std::numeric_limits<double>::infinity() : g * g / (kappa * gamma);
    }
};

} // namespace cqed

#endif
