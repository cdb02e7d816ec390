#include <doctest.h>

#include <cqed/efficiency.hpp>
#include <cqed/forward.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace cqed;

namespace {

const CavityParams fig2 = CavityParams::from_mhz(15, 3, 3);

DrivePulse constant_drive(double value, double T, std::size_t n = 1001)
{
    DrivePulse d;
    d.grid = UniformGrid{0.0, T, n}.times();
    d.omega.assign(n, value);
    return d;
}

double total_probability(const AmplitudeTrajectory& tr, std::size_t i)
{
    return tr.rho_ee(i) + tr.rho_xx(i) + tr.rho_gg(i);
}

} // namespace

TEST_CASE("zero drive leaves the atom in |e,0>")
{
    const AmplitudeTrajectory tr = integrate(constant_drive(0.0, 2.0), fig2, Amplitudes{});
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr.c_e[i] == 1.0);
        CHECK(tr.c_x_im[i] == 0.0);
        CHECK(tr.c_g[i] == 0.0);
    }
    CHECK(tr.loss_gamma.back() == 0.0);
    CHECK(tr.loss_kappa.back() == 0.0);
}

TEST_CASE("uncoupled excited state decays at gamma")
{
    // g is required positive; at 1e-9 rad/us its effect is far below the tolerance.
    const CavityParams c{1e-9, fig2.kappa, fig2.gamma};
    Amplitudes a;
    a.e = 0.0;
    a.x = {0.0, 1.0};
    const AmplitudeTrajectory tr = integrate(constant_drive(0.0, 1.0), c, a);
    for (std::size_t i = 0; i < tr.size(); i += 50) {
        const double t = tr.grid[i];
        CHECK(tr.c_x_im[i] == doctest::Approx(std::exp(-c.gamma * t)).epsilon(1e-9));
        CHECK(tr.loss_gamma[i] == doctest::Approx(1.0 - std::exp(-2.0 * c.gamma * t)).epsilon(1e-9));
    }
}

TEST_CASE("forward integration reproduces the inverse trajectory")
{
    for (ShapeKind k : {ShapeKind::sin2, ShapeKind::tophat, ShapeKind::twinpeak, ShapeKind::gaussian})
        for (double eta : {0.3, 0.95}) {
            CAPTURE(to_string(k));
            CAPTURE(eta);
            const PhotonShape s = make_catalog_shape(k, k == ShapeKind::twinpeak ? 6.28 : 3.14);
            const Design d = solve(s, eta, fig2);
            const AmplitudeTrajectory fw = integrate(d.drive, fig2, Amplitudes{});
            double worst = 0.0;
            for (std::size_t i = 0; i < fw.size(); ++i) {
                worst = std::max(worst, std::abs(fw.c_e[i] - d.trajectory.c_e[i]));
                worst = std::max(worst, std::abs(fw.c_x_im[i] - d.trajectory.c_x_im[i]));
                worst = std::max(worst, std::abs(fw.c_g[i] - d.trajectory.c_g[i]));
            }
            CHECK(worst < 1e-6);
        }
}

TEST_CASE("verify on the example designs")
{
    SUBCASE("sin^2 at 0.96")
    {
        const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
        const ForwardResult r = verify(s, 0.96, fig2, solve(s, 0.96, fig2).drive);
        CHECK(r.shape_error_l2 < 1e-4);
        CHECK(r.eta_achieved == doctest::Approx(0.96).epsilon(1e-6));
        CHECK(r.conservation_residual < 1e-9);
    }
    SUBCASE("pi phase twin peak emits a zero-area photon")
    {
        const PhotonShape s = make_catalog_shape(ShapeKind::twinpeak_pi, 6.28);
        const ForwardResult r = verify(s, 0.95, fig2, solve(s, 0.95, fig2).drive);
        CHECK(r.shape_error_l2 < 1e-4);
        CHECK(std::abs(r.emitted_area_rel) < 1e-4);
        CHECK(r.eta_achieved == doctest::Approx(0.95).epsilon(1e-5));
    }
    SUBCASE("low efficiency tophat")
    {
        const PhotonShape s = make_catalog_shape(ShapeKind::tophat, 3.14);
        const ForwardResult r = verify(s, 0.3, fig2, solve(s, 0.3, fig2).drive);
        CHECK(r.shape_error_l2 < 1e-6);
        CHECK(r.eta_achieved == doctest::Approx(0.3).epsilon(1e-8));
    }
}

TEST_CASE("loss budget closes the probability balance")
{
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
    const ForwardResult r = verify(s, 0.9, fig2, solve(s, 0.9, fig2).drive);
    const LossBudget b = loss_budget(r);
    const auto& tr = r.trajectory;
    const std::size_t last = tr.size() - 1;
    CHECK(b.kappa_total == doctest::Approx(r.eta_achieved).epsilon(1e-8));
    CHECK(b.gamma_total + b.kappa_total + total_probability(tr, last) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(b.gamma_total > 0.0);
    // The unused remainder is the atom left in |e,0>.
    CHECK(total_probability(tr, last) == doctest::Approx(tr.rho_ee(last)).epsilon(1e-6));
}

TEST_CASE("arbitrary drives only ever lose probability")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amp(-40.0, 40.0), freq(0.5, 6.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double a1 = amp(rng), a2 = amp(rng), f1 = freq(rng), f2 = freq(rng);
        DrivePulse d = constant_drive(0.0, 3.0, 601);
        for (std::size_t i = 0; i < d.grid.size(); ++i)
            d.omega[i] = a1 * std::sin(f1 * d.grid[i]) + a2 * std::cos(f2 * d.grid[i]);
        const AmplitudeTrajectory tr = integrate(d, fig2, Amplitudes{});
        CAPTURE(trial);
        CHECK(tr.conservation_residual() < 1e-9);
        for (std::size_t i = 1; i < tr.size(); ++i)
            CHECK(total_probability(tr, i) <= total_probability(tr, i - 1) + 1e-12);
    }
}

TEST_CASE("looser tolerances stay within the verification threshold")
{
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
    const DrivePulse drive = solve(s, 0.95, fig2).drive;
    const ForwardResult tight = verify(s, 0.95, fig2, drive);
    const ForwardResult loose = verify(s, 0.95, fig2, drive, IntegratorOptions{1e-6, 1e-8});
    CHECK(tight.shape_error_l2 < 1e-6);
    CHECK(loose.shape_error_l2 < 1e-4);
    CHECK(tight.shape_error_l2 <= loose.shape_error_l2);
}

TEST_CASE("windowed integration resumes from a mid-pulse state")
{
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
    const Design d = solve(s, 0.9, fig2);
    const std::size_t mid = d.trajectory.size() / 2;
    Amplitudes a;
    a.e = d.trajectory.c_e[mid];
    a.x = {0.0, d.trajectory.c_x_im[mid]};
    a.g = d.trajectory.c_g[mid];
    const AmplitudeTrajectory tail = integrate(d.drive, fig2, a, Window{d.trajectory.grid[mid], 3.14});
    REQUIRE(tail.size() == d.trajectory.size() - mid);
    CHECK(tail.c_g.back() == doctest::Approx(d.trajectory.c_g.back()).epsilon(1e-6));
    CHECK(tail.loss_kappa.back() + d.trajectory.loss_kappa[mid]
          == doctest::Approx(d.trajectory.loss_kappa.back()).epsilon(1e-6));
}

TEST_CASE("forward integration rejects bad input")
{
    const PhotonShape s = make_catalog_shape(ShapeKind::sin2, 3.14);
    const DrivePulse depleted = solve(s, 1.1, fig2).drive;
    CHECK_THROWS_AS(integrate(depleted, fig2, Amplitudes{}), DepletedDrive);
    CHECK_THROWS_AS(verify(s, 1.1, fig2, depleted), DepletedDrive);

    DrivePulse nan_inside = constant_drive(1.0, 3.14);
    nan_inside.omega[500] = std::nan("");
    CHECK_THROWS_AS(integrate(nan_inside, fig2, Amplitudes{}), DepletedDrive);

    Amplitudes too_much;
    too_much.g = 0.5;
    CHECK_THROWS_AS(integrate(constant_drive(0.0, 1.0), fig2, too_much), std::invalid_argument);
    CHECK_THROWS_AS(verify(s, 0.0, fig2, constant_drive(0.0, 3.14)), std::invalid_argument);
    CHECK_THROWS_AS(verify(s, 0.5, fig2, constant_drive(0.0, 3.14, 1000)), std::invalid_argument);
}
