#ifndef CQED_APP_CONFIG_HPP
#define CQED_APP_CONFIG_HPP

#include <cqed/cavity.hpp>
#include <cqed/inverse.hpp>
#include <cqed/shape.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace cqed::app {

// Flat `key = value` run configuration. Frequencies are quoted in MHz in the
// 2pi x f convention (g_MHz = 15 means g = 2pi * 15 rad/us) unless `angular`
// is set, in which case they are taken as rad/us directly.
struct RunConfig {
    std::string shape = "sin2";
    double T_us = 3.14;
    std::optional<double> t0_us;
    std::optional<double> sigma_us;
    double window_sigmas = 8.0;
    std::string shape_csv;

    double eta = 0.95;

    double g_MHz = 15.0;
    double kappa_MHz = 3.0;
    double gamma_MHz = 3.0;
    bool angular = false;

    std::size_t grid_points = default_grid_points;

    std::string out;
    std::string drive_csv;

    std::string sweep_axis = "T";
    double sweep_from = 0.5;
    double sweep_to = 50.0;
    std::size_t sweep_points = 25;

    // Throws std::invalid_argument describing the first violated rule.
    void validate() const;

    CavityParams cavity() const;
    PhotonShape make_shape() const;
    UniformGrid grid_for(const PhotonShape& shape) const;

    std::string serialize() const;
    static RunConfig parse(std::string_view text);
    static RunConfig load(const std::filesystem::path& path);

    bool operator==(const RunConfig&) const = default;
};

} // namespace cqed::app

#endif
