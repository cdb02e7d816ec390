#ifndef CQED_APP_COMMANDS_HPP
#define CQED_APP_COMMANDS_HPP

#include <cqed/app/config.hpp>
#include <cqed/efficiency.hpp>

#include <json.hpp>

#include <filesystem>
#include <iosfwd>

namespace cqed::app {

enum ExitCode : int {
    exit_ok = 0,
    exit_io = 1,
    exit_infeasible = 2, // depleted drive or failed verification
    exit_usage = 64,
};

int cmd_drive(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_plot(const std::filesystem::path& csv, const std::filesystem::path& svg, std::ostream& out,
             std::ostream& err);

// JSON object with keys two_c, eta_cav, eta_sup, eta_max, t_m_us, lossless.
nlohmann::json bounds_json(const EfficiencyReport& report);

// Full command line front end: `photon-design <drive|bounds|verify|sweep|plot> ...`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cqed::app

#endif
