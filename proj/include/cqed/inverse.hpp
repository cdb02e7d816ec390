#ifndef CQED_INVERSE_HPP
#define CQED_INVERSE_HPP

#include <cqed/cavity.hpp>
#include <cqed/shape.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace cqed {

inline constexpr std::size_t default_grid_points = 4001;

// Population bookkeeping tolerance: rho_ee in (-tol, 0) is roundoff and
// clamped, anything below signals depletion.
inline constexpr double conservation_tolerance = 1e-8;

// Uniform time grid; the point count must be odd for Simpson quadrature.
struct UniformGrid {
    double start = 0.0;
    double end = 0.0;
    std::size_t points = 0;

    static UniformGrid over(const Support& support, std::size_t points = default_grid_points);

    double step() const { return (end - start) / static_cast<double>(points - 1); }
    double at(std::size_t i) const
    {
        return i + 1 == points ? end : start + static_cast<double>(i) * step();
    }
    std::vector<double> times() const;
};

// Time-sampled amplitudes of |e,0>, |x,0>, |g,1>. c_x is purely imaginary in
// the resonant real-shape problem and is stored as c_x = i * c_x_im.
struct AmplitudeTrajectory {
    std::vector<double> grid;
    std::vector<double> c_e;
    std::vector<double> c_x_im;
    std::vector<double> c_g;
    std::vector<double> loss_gamma; // \int 2 gamma rho_xx
    std::vector<double> loss_kappa; // \int 2 kappa rho_gg
    // Set by the inverse chain when rho_ee crossed zero before the end.
    std::optional<double> depletion_time;

    std::size_t size() const { return grid.size(); }
    double rho_ee(std::size_t i) const { return c_e[i] * c_e[i]; }
    double rho_xx(std::size_t i) const { return c_x_im[i] * c_x_im[i]; }
    double rho_gg(std::size_t i) const { return c_g[i] * c_g[i]; }

    // max_i |rho_ee + rho_xx + rho_gg + loss_gamma + loss_kappa - 1|
    double conservation_residual() const;
};

// Designed Rabi frequency (rad/us). Sign changes encode pi phase jumps.
// Samples at or after a depletion time are NaN.
struct DrivePulse {
    std::vector<double> grid;
    std::vector<double> omega;
    std::optional<double> depleted_at;

    bool all_finite() const;
    int sign_changes() const;
};

// Pointwise evaluation of the analytic amplitude chain
//   c_g = sqrt(eta / 2 kappa) psi_0
//   c_x = i x,  x = -(dc_g/dt + kappa c_g) / g
//   rho_ee = 1 - rho_xx - rho_gg - \int (2 gamma rho_xx + 2 kappa rho_gg)
//   Omega = -2 (dc_e/dt) / x = -(drho_ee/dt) / (x sqrt(rho_ee))
class InverseChain
{
public:
    InverseChain(const PhotonShape& shape, double eta, const CavityParams& cavity);

    struct Local {
        double c_g;
        double c_g_dot;
        double x;
        double x_dot;
        double in_flight;  // rho_xx + rho_gg
        double loss_rate;  // 2 gamma rho_xx + 2 kappa rho_gg
        double rho_ee_dot; // analytic time derivative of rho_ee
    };

    Local at(double t) const;

    // rho_ee at an arbitrary time, continuing the grid bookkeeping of `traj`
    // from the nearest node at or before t.
    double rho_ee_at(const AmplitudeTrajectory& traj, double t) const;
    // Omega from the closed-form ratio (no regularisation).
    double omega_at(const AmplitudeTrajectory& traj, double t) const;

    const PhotonShape& shape() const { return shape_; }
    double eta() const { return eta_; }
    const CavityParams& cavity() const { return cavity_; }

private:
    PhotonShape shape_;
    double eta_;
    CavityParams cavity_;
    double amp_; // sqrt(eta / 2 kappa)
};

AmplitudeTrajectory compute_trajectory(const PhotonShape& shape, double eta,
                                       const CavityParams& cavity, const UniformGrid& grid);

DrivePulse compute_drive(const AmplitudeTrajectory& traj, const PhotonShape& shape, double eta,
                         const CavityParams& cavity);

struct Design {
    AmplitudeTrajectory trajectory;
    DrivePulse drive;
};

Design solve(const PhotonShape& shape, double eta, const CavityParams& cavity,
             const UniformGrid& grid);

inline Design solve(const PhotonShape& shape, double eta, const CavityParams& cavity)
{
    return solve(shape, eta, cavity, UniformGrid::over(shape.support()));
}

} // namespace cqed

#endif
