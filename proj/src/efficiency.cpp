#include <cqed/efficiency.hpp>

#include <cqed/numerics/bisection.hpp>
#include <cqed/numerics/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqed {

namespace {

struct Feasibility {
    double min_rho;
    double t_min;
};

Feasibility probe(const PhotonShape& shape, double eta, const CavityParams& cavity,
                  const UniformGrid& grid)
{
    const AmplitudeTrajectory tr = compute_trajectory(shape, eta, cavity, grid);
    Feasibility f{1.0, tr.grid.front()};
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double rho = 1.0 - tr.rho_xx(i) - tr.rho_gg(i) - tr.loss_gamma[i] - tr.loss_kappa[i];
        if (rho < f.min_rho) {
            f.min_rho = rho;
            f.t_min = tr.grid[i];
        }
    }
    return f;
}

} // namespace

double eta_cav(const CavityParams& cavity)
{
    cavity.checked();
    if (cavity.lossless())
        return 1.0;
    const double c2 = cavity.two_c();
    return c2 / (c2 + 1.0);
}

double shape_penalty(const PhotonShape& shape, const CavityParams& cavity)
{
    const double k = cavity.kappa;
    const Support& s = shape.support();
    return numerics::gauss_legendre(
        [&](double t) {
            const double d = shape.derivative(t) / k;
            return d * d;
        },
        s.start, s.end, 512);
}

double eta_sup(const PhotonShape& shape, const CavityParams& cavity)
{
    cavity.checked();
    if (!ends_smoothly(shape))
        throw NotSmoothEnd();
    if (cavity.lossless())
        return 1.0;
    return 1.0 / (1.0 + (1.0 + shape_penalty(shape, cavity)) / cavity.two_c());
}

MaxEfficiency eta_max(const PhotonShape& shape, const CavityParams& cavity, const UniformGrid& grid)
{
    const double top = eta_cav(cavity);
    auto feasible = [&](double eta) {
        return probe(shape, eta, cavity, grid).min_rho >= -conservation_tolerance;
    };

    if (feasible(top)) {
        const auto f = probe(shape, top, cavity, grid);
        return {top, f.t_min, f.min_rho};
    }
    if (!feasible(eta_search_floor)) {
        const auto f = probe(shape, eta_search_floor, cavity, grid);
        std::ostringstream m;
        m << "eta_max: bracket failure, rho_ee reaches " << f.min_rho << " at t = " << f.t_min
          << " us even for eta = " << eta_search_floor;
        throw std::runtime_error(m.str());
    }
    const auto br = numerics::bisect_boundary(feasible, eta_search_floor, top, eta_max_tolerance);
    const auto f = probe(shape, br.lo, cavity, grid);
    return {br.lo, f.t_min, f.min_rho};
}

EfficiencyReport report(const PhotonShape& shape, const CavityParams& cavity, const UniformGrid& grid)
{
    EfficiencyReport r{};
    r.lossless = cavity.lossless();
    r.cooperativity_2c = cavity.two_c();
    r.eta_cav = eta_cav(cavity);
    if (ends_smoothly(shape))
        r.eta_sup = eta_sup(shape, cavity);
    const MaxEfficiency m = eta_max(shape, cavity, grid);
    r.eta_max = m.eta;
    r.t_m = m.t_m;

    // eta_max carries the bisection tolerance and the clamp slack.
    const double slack = eta_max_tolerance;
    const double upper = r.eta_sup.value_or(r.eta_cav);
    if (r.eta_max > upper + slack || upper > r.eta_cav + 1e-15) {
        std::ostringstream m2;
        m2.precision(12);
        m2 << "efficiency bounds out of order: eta_max = " << r.eta_max
           << ", eta_sup = " << upper << ", eta_cav = " << r.eta_cav;
        throw std::logic_error(m2.str());
    }
    return r;
}

} // namespace cqed
