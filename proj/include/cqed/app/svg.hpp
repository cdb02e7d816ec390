#ifndef CQED_APP_SVG_HPP
#define CQED_APP_SVG_HPP

#include <cqed/app/csv.hpp>

#include <string>

namespace cqed::app {

// Two-panel figure from a drive table (t_us, psi0, omega_rad_per_us):
// psi_0 on top, |Omega| below with dashed markers at sign changes (pi phase
// jumps) and a red marker where the drive diverges (first NaN sample).
// Output depends only on the table contents.
std::string render_drive_svg(const Table& drive);

} // namespace cqed::app

#endif
