#ifndef CQED_FORWARD_HPP
#define CQED_FORWARD_HPP

#include <cqed/cavity.hpp>
#include <cqed/inverse.hpp>
#include <cqed/shape.hpp>

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cqed {

// Forward integration of the three-level non-Hermitian Schroedinger equation
//   dc_e/dt = (i/2) Omega c_x
//   dc_x/dt = (i/2) Omega c_e - gamma c_x + i g c_g
//   dc_g/dt = i g c_x - kappa c_g
// with the two decay channels accumulated alongside as extra states.

struct Amplitudes {
    std::complex<double> e{1.0, 0.0};
    std::complex<double> x{0.0, 0.0};
    std::complex<double> g{0.0, 0.0};
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
};

// Allowed magnitude of imaginary parts in c_e, c_g and real part in c_x.
inline constexpr double imaginary_leakage_limit = 1e-9;

class DepletedDrive : public std::invalid_argument
{
public:
    explicit DepletedDrive(double t);
    double time;
};

// C^1 cubic Hermite interpolant of the drive samples, slopes from 3-point
// (one-sided at the ends) finite differences.
class DriveInterpolant
{
public:
    explicit DriveInterpolant(const DrivePulse& drive);
    double operator()(double t) const;

private:
    std::vector<double> t_;
    std::vector<double> w_;
    std::vector<double> m_;
};

struct Window {
    double start;
    double end;
};

// Integrates from the drive grid node at (or after) window.start, sampling
// the state on every drive grid node inside the window. Losses start at 0.
AmplitudeTrajectory integrate(const DrivePulse& drive, const CavityParams& cavity,
                              const Amplitudes& initial, std::optional<Window> window = std::nullopt,
                              const IntegratorOptions& options = {});

struct ForwardResult {
    AmplitudeTrajectory trajectory;
    std::vector<double> target;  // sqrt(eta) psi_0
    std::vector<double> emitted; // sqrt(2 kappa) c_g, us^(-1/2)
    double eta_achieved = 0.0;
    double shape_error_l2 = 0.0;
    double conservation_residual = 0.0;
    // \int emitted dt relative to sqrt(T) * ||emitted||_2 (0 for zero-area pulses)
    double emitted_area_rel = 0.0;
};

ForwardResult verify(const PhotonShape& shape, double eta, const CavityParams& cavity,
                     const DrivePulse& drive, const IntegratorOptions& options = {});

struct LossBudget {
    double gamma_total;
    double kappa_total;
};

LossBudget loss_budget(const ForwardResult& result);

} // namespace cqed

#endif
