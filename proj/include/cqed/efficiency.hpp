#ifndef CQED_EFFICIENCY_HPP
#define CQED_EFFICIENCY_HPP

#include <cqed/cavity.hpp>
#include <cqed/inverse.hpp>
#include <cqed/shape.hpp>

#include <optional>
#include <stdexcept>

namespace cqed {

inline constexpr double eta_max_tolerance = 1e-8;
inline constexpr double eta_search_floor = 1e-6;

// Thrown when the closed-form bound is requested for a waveform that does not
// return to zero with zero slope.
class NotSmoothEnd : public std::domain_error
{
public:
    NotSmoothEnd()
        : std::domain_error("shape does not end smoothly; closed-form eta_sup does not apply, "
                            "use eta_max")
    {
    }
};

struct EfficiencyReport {
    double cooperativity_2c;        // +inf for a lossless atom
    double eta_cav;
    std::optional<double> eta_sup;  // only for smoothly ending shapes
    double eta_max;
    std::optional<double> t_m;      // time of minimum rho_ee at eta_max, us
    bool lossless = false;
};

// 2C / (2C + 1); exactly 1 when gamma = 0.
double eta_cav(const CavityParams& cavity);

// [1 + (1 / 2C) (1 + \int (dpsi_0/dt / kappa)^2 dt)]^-1
double eta_sup(const PhotonShape& shape, const CavityParams& cavity);

// The \int (dpsi_0/dt / kappa)^2 dt term of eta_sup.
double shape_penalty(const PhotonShape& shape, const CavityParams& cavity);

struct MaxEfficiency {
    double eta;
    double t_m;
    double min_rho_ee; // minimum of rho_ee over the grid at eta
};

// Largest eta keeping rho_ee >= -conservation_tolerance on the grid, by
// bisection on [eta_search_floor, eta_cav].
MaxEfficiency eta_max(const PhotonShape& shape, const CavityParams& cavity, const UniformGrid& grid);

inline MaxEfficiency eta_max(const PhotonShape& shape, const CavityParams& cavity)
{
    return eta_max(shape, cavity, UniformGrid::over(shape.support()));
}

// Aggregates the three bounds and checks eta_max <= eta_sup <= eta_cav.
EfficiencyReport report(const PhotonShape& shape, const CavityParams& cavity, const UniformGrid& grid);

inline EfficiencyReport report(const PhotonShape& shape, const CavityParams& cavity)
{
    return report(shape, cavity, UniformGrid::over(shape.support()));
}

} // namespace cqed

#endif
