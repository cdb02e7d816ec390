#ifndef CQED_SHAPE_HPP
#define CQED_SHAPE_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

// Target single-photon waveforms psi_0(t). Times are in microseconds and
// amplitudes in us^(-1/2), so \int psi_0^2 dt = 1 over the support.

enum class ShapeKind { sin2, tophat, twinpeak, twinpeak_pi, gaussian, sampled };

std::string_view to_string(ShapeKind kind);
ShapeKind parse_shape_kind(std::string_view name);

struct Support {
    double start;
    double end;
    double length() const { return end - start; }
    bool contains(double t) const { return t >= start && t <= end; }
};

// Admissibility thresholds. Start/end thresholds are made dimensionless with
// the support length T: |psi|*sqrt(T) and |dpsi/dt|*T^(3/2).
inline constexpr double normalization_tolerance = 1e-8;
inline constexpr double edge_value_tolerance = 1e-6;
inline constexpr double edge_slope_tolerance = 1e-4;
inline constexpr double c1_tolerance = 1e-4;
inline constexpr std::size_t default_validation_points = 2001;

// Immutable waveform: value, first derivative and (optionally analytic)
// second derivative. Everything evaluates to zero outside the support.
class PhotonShape
{
public:
    using Fn = std::function<double(double)>;

    PhotonShape(ShapeKind kind, Support support, Fn value, Fn derivative, Fn second = {},
                int phase_flips = 0);

    double value(double t) const;
    double derivative(double t) const;
    // Falls back to a 5-point central difference of derivative() when no
    // analytic second derivative was supplied.
    double second_derivative(double t) const;
    bool has_analytic_second_derivative() const { return static_cast<bool>(second_); }

    ShapeKind kind() const { return kind_; }
    const Support& support() const { return support_; }
    double duration() const { return support_.length(); }
    // Number of pi phase jumps (sign changes) built into the waveform.
    int phase_flips() const { return phase_flips_; }

    PhotonShape scaled(double factor) const;

    // \int psi^2 over the support by composite Gauss-Legendre.
    double norm_squared(std::size_t panels = 512) const;

private:
    ShapeKind kind_;
    Support support_;
    Fn value_;
    Fn derivative_;
    Fn second_;
    int phase_flips_;
    double scale_ = 1.0;
};

// Rescales so that \int psi^2 = 1.
PhotonShape normalized(const PhotonShape& shape);

// Family-specific parameters for make_catalog_shape. Gaussian defaults:
// centre T/2, width T/(2 * window_sigmas), i.e. the window spans [0, T].
struct CatalogExtras {
    std::optional<double> t0_us;
    std::optional<double> sigma_us;
    double window_sigmas = 8.0;
};

PhotonShape make_catalog_shape(ShapeKind kind, double duration_us, const CatalogExtras& extras = {});

// C^1 interpolant (clamped cubic spline, zero end slopes) through samples
// rescaled to unit norm. Rejects inputs violating the start condition.
PhotonShape from_samples(std::span<const double> times, std::span<const double> values);

// Same interpolant without the start-condition check; used to inspect
// deliberately inadmissible data.
PhotonShape interpolate_samples(std::span<const double> times, std::span<const double> values);

struct ShapeSamples {
    std::vector<double> times;
    std::vector<double> values;
};

// Two-column CSV with header `t_us,psi0`.
ShapeSamples read_shape_csv(const std::filesystem::path& path);

struct ValidationReport {
    bool normalized = false;
    bool start_conditions_ok = false;
    bool c1_ok = false;
    double norm_squared = 0.0;
    double max_deriv_mismatch = 0.0;
    std::vector<std::string> messages;

    bool admissible() const { return normalized && start_conditions_ok && c1_ok; }
};

ValidationReport validate_shape(const PhotonShape& shape,
                                std::size_t grid_points = default_validation_points);

// psi_0(t_end) = dpsi_0/dt(t_end) = 0 within the edge tolerances.
bool ends_smoothly(const PhotonShape& shape);

} // namespace cqed

#endif
