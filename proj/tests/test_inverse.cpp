#include <doctest.h>

#include <cqed/efficiency.hpp>
#include <cqed/inverse.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace cqed;

namespace {

constexpr double pi = std::numbers::pi;

const CavityParams fig2 = CavityParams::from_mhz(15, 3, 3);

double max_abs(const std::vector<double>& v, std::size_t from, std::size_t to)
{
    double m = 0.0;
    for (std::size_t i = from; i < to; ++i)
        m = std::max(m, std::abs(v[i]));
    return m;
}

} // namespace

TEST_CASE("trajectory starts in |e,0> and follows the target photon amplitude")
{
    const double T = 3.14, eta = 0.96;
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, T);
    const AmplitudeTrajectory tr = compute_trajectory(s, eta, fig2, UniformGrid::over(s.support()));
    CHECK(tr.rho_ee(0) == 1.0);
    CHECK(tr.c_x_im[0] == 0.0);
    CHECK(tr.c_g[0] == 0.0);

    // c_g(T/2) = sqrt(eta / (2 kappa)) sqrt(8 / (3T)), kappa = 2 pi 3 rad/us
    const long double expected = std::sqrt(static_cast<long double>(eta) / (2.0L * 2.0L * 3.14159265358979323846L * 3.0L))
        * std::sqrt(8.0L / (3.0L * static_cast<long double>(T)));
    const std::size_t mid = tr.size() / 2;
    CHECK(tr.grid[mid] == doctest::Approx(T / 2));
    CHECK(tr.c_g[mid] == doctest::Approx(static_cast<double>(expected)).epsilon(1e-13));
    CHECK(tr.c_g[mid] == doctest::Approx(0.1471).epsilon(1e-3));
    CHECK_FALSE(tr.depletion_time);
}

TEST_CASE("eta = 1.1 depletes the system before the pulse ends")
{
    const double T = 3.14;
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, T);
    const AmplitudeTrajectory tr = compute_trajectory(s, 1.1, fig2, UniformGrid::over(s.support()));
    REQUIRE(tr.depletion_time);
    CHECK(*tr.depletion_time > 0.0);
    CHECK(*tr.depletion_time < T);
    // c_e is zero past the crossing and rho_ee is exactly 0 at t_m.
    const InverseChain chain(s, 1.1, fig2);
    CHECK(std::abs(chain.rho_ee_at(tr, *tr.depletion_time)) < 1e-10);
    for (std::size_t i = 0; i < tr.size(); ++i)
        if (tr.grid[i] > *tr.depletion_time)
            CHECK(tr.c_e[i] == 0.0);
}

TEST_CASE("low efficiency drive is finite and resembles the photon")
{
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
    const Design d = solve(s, 0.30, fig2);
    CHECK(d.drive.all_finite());
    CHECK_FALSE(d.drive.depleted_at);
    CHECK(d.drive.sign_changes() == 0);

    // Pearson correlation of |Omega| with psi_0
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    const double n = static_cast<double>(d.drive.grid.size());
    for (std::size_t i = 0; i < d.drive.grid.size(); ++i) {
        const double a = std::abs(d.drive.omega[i]), b = s.value(d.drive.grid[i]);
        sa += a; sb += b; saa += a * a; sbb += b * b; sab += a * b;
    }
    const double r = (n * sab - sa * sb) / std::sqrt((n * saa - sa * sa) * (n * sbb - sb * sb));
    CHECK(r > 0.95);
}

TEST_CASE("infeasible efficiency: drive diverges approaching t_m")
{
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
    const Design d = solve(s, 1.1, fig2);
    REQUIRE(d.drive.depleted_at);
    const double tm = *d.drive.depleted_at;
    CHECK_FALSE(d.drive.all_finite());
    for (std::size_t i = 0; i < d.drive.grid.size(); ++i) {
        if (d.drive.grid[i] >= tm)
            CHECK(std::isnan(d.drive.omega[i]));
        else
            CHECK(std::isfinite(d.drive.omega[i]));
    }
    const InverseChain chain(s, 1.1, fig2);
    double prev = 0.0;
    for (double delta : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double w = std::abs(chain.omega_at(d.trajectory, tm - delta));
        CHECK(w > prev);
        prev = w;
    }
    CHECK(prev > 1e4);
}

TEST_CASE("pi phase twin peak: one sign change at T/2")
{
    const double T = 6.28;
    const CavityParams fig3 = CavityParams::from_mhz(15, 3, 3);
    const PhotonShape s = make_catalog_shape(ShapeKind::twinpeak_pi, T);
    const Design d = solve(s, 0.95, fig3);
    CHECK(d.drive.all_finite());
    CHECK(d.drive.sign_changes() == 1);
    CHECK(d.drive.sign_changes() == s.phase_flips());
    const std::size_t mid = d.drive.grid.size() / 2;
    CHECK(std::signbit(d.drive.omega[mid - 1]) == std::signbit(d.drive.omega[mid]));
    CHECK(std::signbit(d.drive.omega[mid]) != std::signbit(d.drive.omega[mid + 1]));
}

TEST_CASE("omega at t = 0 matches the small-t series limit")
{
    // Leading order: c_g ~ k a t^2, x ~ -2 k a t / g, drho_ee/dt ~ -8 k^2 a^2 t / g^2,
    // hence Omega(0) = -4 k a / g = -2 k psi0''(0) / g with k = sqrt(eta / 2 kappa).
    const double T = 3.14, eta = 0.96;
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, T);
    const Design d = solve(s, eta, fig2);
    const double amp = std::sqrt(8.0 / (3.0 * T));
    const double psi_dd0 = 2.0 * amp * (pi / T) * (pi / T);
    const double k = std::sqrt(eta / (2.0 * fig2.kappa));
    const double series = -2.0 * k * psi_dd0 / fig2.g;
    CHECK(d.drive.omega[0] != 0.0);
    CHECK(d.drive.omega[0] == doctest::Approx(series).epsilon(0.01));
}

TEST_CASE("solve: definitional round trip and figure cases")
{
    SUBCASE("sin2 at 0.96 reproduces sqrt(eta) psi_0 exactly")
    {
        const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
        const Design d = solve(s, 0.96, fig2);
        for (std::size_t i = 0; i < d.trajectory.size(); i += 97)
            CHECK(std::sqrt(2.0 * fig2.kappa) * d.trajectory.c_g[i]
                  == doctest::Approx(std::sqrt(0.96) * s.value(d.trajectory.grid[i])).epsilon(1e-14));
    }
    SUBCASE("tophat at 0.95 is feasible")
    {
        const Design d = solve(make_catalog_shape(ShapeKind::tophat, 3.14), 0.95, fig2);
        CHECK_FALSE(d.drive.depleted_at);
        CHECK(d.drive.all_finite());
    }
    SUBCASE("twin peak needs a stronger second drive peak")
    {
        const Design d = solve(make_catalog_shape(ShapeKind::twinpeak, 6.28), 0.95, fig2);
        const std::size_t mid = d.drive.grid.size() / 2;
        const double first = max_abs(d.drive.omega, 0, mid);
        const double second = max_abs(d.drive.omega, mid, d.drive.grid.size());
        CHECK(second > first);
        CHECK(d.drive.sign_changes() == 0);
    }
}

TEST_CASE("conservation and monotone losses on feasible designs")
{
    for (ShapeKind k : {ShapeKind::sin2, ShapeKind::tophat, ShapeKind::twinpeak, ShapeKind::twinpeak_pi,
                        ShapeKind::gaussian})
        for (double eta : {0.3, 0.95}) {
            CAPTURE(to_string(k));
            const PhotonShape s = make_catalog_shape(k, k == ShapeKind::twinpeak || k == ShapeKind::twinpeak_pi ? 6.28 : 3.14);
            const Design d = solve(s, eta, fig2);
            CHECK(d.trajectory.conservation_residual() < conservation_tolerance);
            for (std::size_t i = 1; i < d.trajectory.size(); ++i) {
                CHECK(d.trajectory.loss_gamma[i] >= d.trajectory.loss_gamma[i - 1]);
                CHECK(d.trajectory.loss_kappa[i] >= d.trajectory.loss_kappa[i - 1]);
            }
            for (std::size_t i = 0; i < d.trajectory.size(); ++i) {
                CHECK(d.trajectory.rho_ee(i) >= 0.0);
                CHECK(d.trajectory.rho_ee(i) <= 1.0);
            }
        }
}

TEST_CASE("depletion dichotomy around the efficiency bounds")
{
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
    const MaxEfficiency m = eta_max(s, fig2);
    const double sup = eta_sup(s, fig2);
    for (double eta : {0.5 * m.eta, m.eta - 1e-6, m.eta})
        CHECK_FALSE(solve(s, eta, fig2).drive.depleted_at);
    for (double eta : {sup + 1e-5, sup + 1e-3, 1.0, 1.1})
        CHECK(solve(s, eta, fig2).drive.depleted_at);
}

TEST_CASE("doubling the grid leaves omega unchanged")
{
    for (ShapeKind k : {ShapeKind::sin2, ShapeKind::tophat, ShapeKind::twinpeak, ShapeKind::gaussian}) {
        CAPTURE(to_string(k));
        const PhotonShape s = make_catalog_shape(k, 3.14);
        const Design coarse = solve(s, 0.95, fig2, UniformGrid::over(s.support(), 2001));
        const Design fine = solve(s, 0.95, fig2, UniformGrid::over(s.support(), 4001));
        const double scale = max_abs(fine.drive.omega, 0, fine.drive.omega.size());
        double worst = 0.0;
        for (std::size_t i = 3; i + 3 < coarse.drive.grid.size(); ++i)
            worst = std::max(worst, std::abs(coarse.drive.omega[i] - fine.drive.omega[2 * i]));
        CHECK(worst / scale < 1e-6);
    }
}

TEST_CASE("inverse solver errors")
{
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
    const UniformGrid g = UniformGrid::over(s.support());
    CHECK_THROWS_AS(compute_trajectory(s, 0.0, fig2, g), std::invalid_argument);
    CHECK_THROWS_AS(compute_trajectory(s, -0.5, fig2, g), std::invalid_argument);
    CHECK_THROWS_AS(compute_trajectory(s, 0.5, fig2, UniformGrid{0.0, 2.0, 4001}), std::invalid_argument);
    CHECK_THROWS_AS(compute_trajectory(s, 0.5, fig2, UniformGrid{0.0, 3.14, 4000}), std::invalid_argument);
    CHECK_THROWS_AS(compute_trajectory(s, 0.5, CavityParams{0.0, 1.0, 1.0}, g), std::invalid_argument);

    std::vector<double> t(101), v(101);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = 3.14 * static_cast<double>(i) / 100.0;
        v[i] = std::pow(std::cos(pi * t[i] / 3.14), 2);
    }
    const PhotonShape bad = interpolate_samples(t, v);
    CHECK_THROWS_AS(compute_trajectory(bad, 0.5, fig2, UniformGrid::over(bad.support())), std::invalid_argument);
}

TEST_CASE("sampled shapes run through the same chain")
{
    std::vector<double> t(301), v(301);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = 2.0 * static_cast<double>(i) / 300.0;
        v[i] = std::pow(std::sin(pi * t[i] / 2.0), 2) * (1.0 + 0.3 * t[i]);
    }
    const PhotonShape s = from_samples(t, v);
    const Design d = solve(s, 0.9, fig2);
    CHECK(d.drive.all_finite());
    CHECK(d.trajectory.conservation_residual() < conservation_tolerance);
}
