#include <doctest.h>

#include <cqed/numerics/bisection.hpp>
#include <cqed/numerics/dopri5.hpp>
#include <cqed/numerics/quadrature.hpp>
#include <cqed/numerics/spline.hpp>

#include <cmath>
#include <vector>

using namespace cqed::numerics;

TEST_CASE("simpson integrates cubics exactly")
{
    const std::size_t n = 11;
    const double h = 2.0 / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        f[i] = 3 * t * t * t - t + 2;
    }
    // \int_0^2 (3t^3 - t + 2) dt = 12 - 2 + 4
    CHECK(simpson(f, h) == doctest::Approx(14.0).epsilon(1e-14));
    CHECK_THROWS_AS(simpson(std::vector<double>(4, 1.0), h), std::invalid_argument);
}

TEST_CASE("cumulative simpson agrees with the antiderivative at every node")
{
    const std::size_t n = 201;
    const double h = 3.0 / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = std::cos(static_cast<double>(i) * h);
    const auto I = cumulative_simpson(f, h);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(I[i] == doctest::Approx(std::sin(static_cast<double>(i) * h)).epsilon(1e-9));
    CHECK(I.back() == doctest::Approx(simpson(f, h)).epsilon(1e-14));
}

TEST_CASE("cumulative simpson stays monotone for steep non-negative data")
{
    const std::size_t n = 21;
    const double h = 1e-3;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = std::pow(static_cast<double>(i) * h, 4);
    const auto I = cumulative_simpson(f, h);
    for (std::size_t i = 1; i < n; ++i)
        CHECK(I[i] >= I[i - 1]);
}

TEST_CASE("gauss-legendre is exact for degree-15 polynomials on one panel")
{
    const double v = gauss_legendre([](double t) { return std::pow(t, 15) + std::pow(t, 14); }, 0.0, 1.0, 1);
    CHECK(v == doctest::Approx(1.0 / 16 + 1.0 / 15).epsilon(1e-14));
    CHECK(gauss_legendre([](double t) { return std::exp(t); }, 0.0, 2.0) == doctest::Approx(std::exp(2.0) - 1.0));
}

TEST_CASE("clamped spline reproduces a cubic with matching end slopes")
{
    auto f = [](double t) { return t * t * t - 2 * t * t + 0.5; };
    auto df = [](double t) { return 3 * t * t - 4 * t; };
    std::vector<double> x = {0.0, 0.3, 0.7, 1.0, 1.6, 2.0};
    std::vector<double> y;
    for (double xi : x)
        y.push_back(f(xi));
    const ClampedCubicSpline s(x, y, df(0.0), df(2.0));
    for (double t : {0.0, 0.1, 0.55, 1.3, 1.99, 2.0}) {
        CHECK(s.value(t) == doctest::Approx(f(t)).epsilon(1e-12));
        CHECK(s.derivative(t) == doctest::Approx(df(t)).epsilon(1e-12));
        CHECK(s.second_derivative(t) == doctest::Approx(6 * t - 4).epsilon(1e-11));
    }
    const double sq = gauss_legendre([&](double t) { return f(t) * f(t); }, 0.0, 2.0, 8);
    CHECK(s.integral_of_square() == doctest::Approx(sq).epsilon(1e-12));
}

TEST_CASE("spline rejects unordered knots")
{
    std::vector<double> x = {0.0, 1.0, 1.0}, y = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(ClampedCubicSpline(x, y), std::invalid_argument);
}

TEST_CASE("bisection on a monotone predicate and on a sign change")
{
    const auto br = bisect_boundary([](double x) { return x * x <= 2.0; }, 0.0, 2.0, 1e-12);
    CHECK(br.lo * br.lo <= 2.0);
    CHECK(br.hi - br.lo <= 1e-12);
    CHECK(br.lo == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    CHECK(bisect_root([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-14)
          == doctest::Approx(M_PI / 2).epsilon(1e-13));
    CHECK_THROWS_AS(bisect_root([](double x) { return x * x + 1; }, -1.0, 1.0, 1e-9), std::invalid_argument);
}

TEST_CASE("dopri5 integrates a damped oscillator to tolerance")
{
    // x'' + 2 z w x' + w^2 x = 0 with x(0) = 1, x'(0) = 0
    const double w = 3.0, z = 0.1;
    auto rhs = [&](double, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = -2 * z * w * y[1] - w * w * y[0];
    };
    const Dopri5<2> stepper({1e-11, 1e-13});
    std::array<double, 2> y = {1.0, 0.0};
    double t = 0.0, h = 0.0;
    const std::size_t steps = stepper.advance(rhs, t, y, 5.0, h);
    const double wd = w * std::sqrt(1 - z * z);
    const double exact = std::exp(-z * w * 5.0) * (std::cos(wd * 5.0) + z * w / wd * std::sin(wd * 5.0));
    CHECK(t == 5.0);
    CHECK(steps > 10);
    CHECK(y[0] == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("dopri5 reports step size underflow")
{
    auto rhs = [](double t, const std::array<double, 1>&, std::array<double, 1>& dy) { dy[0] = 1.0 / (1.0 - t); };
    const Dopri5<1> stepper({1e-10, 1e-12, 1e-9});
    std::array<double, 1> y = {0.0};
    double t = 0.0, h = 0.0;
    CHECK_THROWS_AS(stepper.advance(rhs, t, y, 2.0, h), StepSizeUnderflow);
}
