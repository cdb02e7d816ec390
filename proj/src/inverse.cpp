#include <cqed/inverse.hpp>

#include <cqed/numerics/bisection.hpp>
#include <cqed/numerics/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cqed {

namespace {

// Points where |x| falls below this fraction of its peak are treated as the
// removable 0/0 of the Omega formula.
constexpr double removable_threshold = 1e-14;

void check_grid(const UniformGrid& grid, const Support& s)
{
    if (grid.points < 3 || grid.points % 2 == 0)
        throw std::invalid_argument("grid: need an odd number (>= 3) of points");
    const double tol = 1e-12 * s.length();
    if (std::abs(grid.start - s.start) > tol || std::abs(grid.end - s.end) > tol)
        throw std::invalid_argument("grid: must span exactly the shape support");
}

double quadratic_extrapolate(const double (&t)[3], const double (&y)[3], double at)
{
    double r = 0.0;
    for (int j = 0; j < 3; ++j) {
        double l = 1.0;
        for (int k = 0; k < 3; ++k)
            if (k != j)
                l *= (at - t[k]) / (t[j] - t[k]);
        r += l * y[j];
    }
    return r;
}

} // namespace

UniformGrid UniformGrid::over(const Support& support, std::size_t points)
{
    return UniformGrid{support.start, support.end, points};
}

std::vector<double> UniformGrid::times() const
{
    std::vector<double> t(points);
    for (std::size_t i = 0; i < points; ++i)
        t[i] = at(i);
    return t;
}

double AmplitudeTrajectory::conservation_residual() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double total = rho_ee(i) + rho_xx(i) + rho_gg(i) + loss_gamma[i] + loss_kappa[i];
        worst = std::max(worst, std::abs(total - 1.0));
    }
    return worst;
}

bool DrivePulse::all_finite() const
{
    return std::all_of(omega.begin(), omega.end(), [](double w) { return std::isfinite(w); });
}

int DrivePulse::sign_changes() const
{
    int flips = 0;
    double last = 0.0;
    for (double w : omega) {
        if (!std::isfinite(w) || w == 0.0)
            continue;
        if (last != 0.0 && std::signbit(w) != std::signbit(last))
            ++flips;
        last = w;
    }
    return flips;
}

InverseChain::InverseChain(const PhotonShape& shape, double eta, const CavityParams& cavity)
    : shape_(shape), eta_(eta), cavity_(cavity.checked()), amp_(std::sqrt(eta / (2.0 * cavity.kappa)))
{
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("eta must be positive");
}

InverseChain::Local InverseChain::at(double t) const
{
    const double g = cavity_.g, k = cavity_.kappa, gm = cavity_.gamma;
    Local l{};
    l.c_g = amp_ * shape_.value(t);
    l.c_g_dot = amp_ * shape_.derivative(t);
    const double c_g_ddot = amp_ * shape_.second_derivative(t);
    l.x = -(l.c_g_dot + k * l.c_g) / g;
    l.x_dot = -(c_g_ddot + k * l.c_g_dot) / g;
    const double rxx = l.x * l.x;
    const double rgg = l.c_g * l.c_g;
    l.in_flight = rxx + rgg;
    l.loss_rate = 2.0 * gm * rxx + 2.0 * k * rgg;
    l.rho_ee_dot = -2.0 * l.x * l.x_dot - 2.0 * l.c_g * l.c_g_dot - l.loss_rate;
    return l;
}

double InverseChain::rho_ee_at(const AmplitudeTrajectory& traj, double t) const
{
    const auto& gr = traj.grid;
    auto it = std::upper_bound(gr.begin(), gr.end(), t);
    const std::size_t k = it == gr.begin() ? 0 : static_cast<std::size_t>(it - gr.begin()) - 1;
    const double lost = traj.loss_gamma[k] + traj.loss_kappa[k]
        + numerics::gauss_legendre([this](double s) { return at(s).loss_rate; }, gr[k], t, 4);
    return 1.0 - at(t).in_flight - lost;
}

double InverseChain::omega_at(const AmplitudeTrajectory& traj, double t) const
{
    const Local l = at(t);
    const double rho = rho_ee_at(traj, t);
    if (!(rho > 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    return -l.rho_ee_dot / (l.x * std::sqrt(rho));
}

AmplitudeTrajectory compute_trajectory(const PhotonShape& shape, double eta,
                                       const CavityParams& cavity, const UniformGrid& grid)
{
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("eta must be positive");
    const ValidationReport rep = validate_shape(shape);
    if (!rep.admissible()) {
        std::ostringstream m;
        m << "shape is not admissible:";
        for (const auto& msg : rep.messages)
            m << ' ' << msg << ';';
        throw std::invalid_argument(m.str());
    }
    check_grid(grid, shape.support());

    const InverseChain chain(shape, eta, cavity);
    const std::size_t n = grid.points;
    const double h = grid.step();

    AmplitudeTrajectory tr;
    tr.grid = grid.times();
    tr.c_e.resize(n);
    tr.c_x_im.resize(n);
    tr.c_g.resize(n);
    std::vector<double> rate_gamma(n), rate_kappa(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto l = chain.at(tr.grid[i]);
        tr.c_g[i] = l.c_g;
        tr.c_x_im[i] = l.x;
        rate_gamma[i] = 2.0 * cavity.gamma * l.x * l.x;
        rate_kappa[i] = 2.0 * cavity.kappa * l.c_g * l.c_g;
    }
    tr.loss_gamma = numerics::cumulative_simpson(rate_gamma, h);
    tr.loss_kappa = numerics::cumulative_simpson(rate_kappa, h);

    std::vector<double> rho(n);
    std::size_t first_bad = n;
    for (std::size_t i = 0; i < n; ++i) {
        rho[i] = 1.0 - tr.rho_xx(i) - tr.rho_gg(i) - tr.loss_gamma[i] - tr.loss_kappa[i];
        if (first_bad == n && rho[i] < -conservation_tolerance)
            first_bad = i;
    }

    std::size_t cut = n;
    if (first_bad < n) {
        // Last node still strictly positive; the crossing lies right after it.
        std::size_t k = first_bad;
        while (k > 0 && !(rho[k - 1] > 0.0))
            --k;
        cut = k;
        if (k == 0) {
            tr.depletion_time = tr.grid[0];
        } else {
            tr.depletion_time = numerics::bisect_root(
                [&](double t) { return chain.rho_ee_at(tr, t); }, tr.grid[k - 1], tr.grid[k],
                1e-13 * grid.end);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        tr.c_e[i] = i < cut ? std::sqrt(std::max(rho[i], 0.0)) : 0.0;
    return tr;
}

DrivePulse compute_drive(const AmplitudeTrajectory& traj, const PhotonShape& shape, double eta,
                         const CavityParams& cavity)
{
    const InverseChain chain(shape, eta, cavity);
    const std::size_t n = traj.size();

    DrivePulse out;
    out.grid = traj.grid;
    out.omega.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.depleted_at = traj.depletion_time;

    std::size_t live = n;
    if (traj.depletion_time) {
        live = 0;
        while (live < n && traj.grid[live] < *traj.depletion_time)
            ++live;
    }

    double x_peak = 0.0;
    for (std::size_t i = 0; i < live; ++i)
        x_peak = std::max(x_peak, std::abs(traj.c_x_im[i]));

    std::vector<char> valid(n, 0);
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < live; ++i) {
        const auto l = chain.at(traj.grid[i]);
        const double rho = traj.rho_ee(i);
        if (std::abs(l.x) <= removable_threshold * x_peak || !(rho > 0.0)) {
            pending.push_back(i);
            continue;
        }
        out.omega[i] = -l.rho_ee_dot / (l.x * std::sqrt(rho));
        valid[i] = 1;
    }

    // Removable singularities: quadratic extrapolation from the three nearest
    // valid samples on one side (left by default, right at the start).
    for (std::size_t i : pending) {
        std::size_t left[3], right[3];
        int nl = 0, nr = 0;
        for (std::size_t j = i; j-- > 0 && nl < 3;)
            if (valid[j])
                left[nl++] = j;
        for (std::size_t j = i + 1; j < live && nr < 3; ++j)
            if (valid[j])
                right[nr++] = j;
        const std::size_t* use = nl == 3 ? left : nr == 3 ? right : nullptr;
        if (!use)
            continue; // stays NaN
        const double t[3] = {traj.grid[use[0]], traj.grid[use[1]], traj.grid[use[2]]};
        const double y[3] = {out.omega[use[0]], out.omega[use[1]], out.omega[use[2]]};
        out.omega[i] = quadratic_extrapolate(t, y, traj.grid[i]);
    }
    return out;
}

Design solve(const PhotonShape& shape, double eta, const CavityParams& cavity, const UniformGrid& grid)
{
    Design d;
    d.trajectory = compute_trajectory(shape, eta, cavity, grid);
    d.drive = compute_drive(d.trajectory, shape, eta, cavity);
    return d;
}

} // namespace cqed
