#include <cqed/forward.hpp>

#include <cqed/numerics/dopri5.hpp>
#include <cqed/numerics/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace cqed {

namespace {

// re/im of c_e, c_x, c_g, then loss_gamma, loss_kappa
using State = std::array<double, 8>;

bool is_uniform(std::span<const double> t)
{
    if (t.size() < 3)
        return false;
    const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs(t[i] - t[i - 1] - h) > 1e-9 * h)
            return false;
    return true;
}

} // namespace

DepletedDrive::DepletedDrive(double t)
    : std::invalid_argument("drive is depleted at t = " + std::to_string(t) + " us"), time(t)
{
}

DriveInterpolant::DriveInterpolant(const DrivePulse& drive)
    : t_(drive.grid), w_(drive.omega), m_(drive.grid.size(), 0.0)
{
    const std::size_t n = t_.size();
    if (n < 3 || w_.size() != n)
        throw std::invalid_argument("drive: need >= 3 samples with matching grid");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(w_[i]))
            throw DepletedDrive(t_[i]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = t_[i] - t_[i - 1], hr = t_[i + 1] - t_[i];
        m_[i] = (-hr / (hl * (hl + hr))) * w_[i - 1] + ((hr - hl) / (hl * hr)) * w_[i]
            + (hl / (hr * (hl + hr))) * w_[i + 1];
    }
    {
        const double h1 = t_[1] - t_[0], h2 = t_[2] - t_[1];
        m_[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * w_[0] + (h1 + h2) / (h1 * h2) * w_[1]
            - h1 / (h2 * (h1 + h2)) * w_[2];
    }
    {
        const double h1 = t_[n - 1] - t_[n - 2], h2 = t_[n - 2] - t_[n - 3];
        m_[n - 1] = (2 * h1 + h2) / (h1 * (h1 + h2)) * w_[n - 1] - (h1 + h2) / (h1 * h2) * w_[n - 2]
            + h1 / (h2 * (h1 + h2)) * w_[n - 3];
    }
}

double DriveInterpolant::operator()(double t) const
{
    if (t <= t_.front())
        return w_.front();
    if (t >= t_.back())
        return w_.back();
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * w_[i] + (s3 - 2 * s2 + s) * h * m_[i]
        + (-2 * s3 + 3 * s2) * w_[i + 1] + (s3 - s2) * h * m_[i + 1];
}

AmplitudeTrajectory integrate(const DrivePulse& drive, const CavityParams& cavity,
                              const Amplitudes& initial, std::optional<Window> window,
                              const IntegratorOptions& options)
{
    cavity.checked();
    if (drive.depleted_at)
        throw DepletedDrive(*drive.depleted_at);
    const double p0 = std::norm(initial.e) + std::norm(initial.x) + std::norm(initial.g);
    if (p0 > 1.0 + 1e-12)
        throw std::invalid_argument("integrate: initial amplitudes carry probability > 1");

    const DriveInterpolant omega(drive);
    const auto& gr = drive.grid;
    const Window win = window.value_or(Window{gr.front(), gr.back()});
    std::size_t first = 0;
    while (first < gr.size() && gr[first] < win.start - 1e-12)
        ++first;
    std::size_t last = first;
    while (last + 1 < gr.size() && gr[last + 1] <= win.end + 1e-12)
        ++last;
    if (first >= gr.size() || last <= first)
        throw std::invalid_argument("integrate: window contains fewer than two grid points");

    const double g = cavity.g, k = cavity.kappa, gm = cavity.gamma;
    auto rhs = [&](double t, const State& y, State& dy) {
        const double w = 0.5 * omega(t);
        const double er = y[0], ei = y[1], xr = y[2], xi = y[3], gr_ = y[4], gi = y[5];
        // i * a * (re + i im) = -a im + i a re
        dy[0] = -w * xi;
        dy[1] = w * xr;
        dy[2] = -w * ei - gm * xr - g * gi;
        dy[3] = w * er - gm * xi + g * gr_;
        dy[4] = -g * xi - k * gr_;
        dy[5] = g * xr - k * gi;
        dy[6] = 2.0 * gm * (xr * xr + xi * xi);
        dy[7] = 2.0 * k * (gr_ * gr_ + gi * gi);
    };

    State y = {initial.e.real(), initial.e.imag(), initial.x.real(), initial.x.imag(),
               initial.g.real(), initial.g.imag(), 0.0, 0.0};

    AmplitudeTrajectory tr;
    const std::size_t n = last - first + 1;
    tr.grid.assign(gr.begin() + static_cast<std::ptrdiff_t>(first),
                   gr.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    tr.c_e.resize(n);
    tr.c_x_im.resize(n);
    tr.c_g.resize(n);
    tr.loss_gamma.resize(n);
    tr.loss_kappa.resize(n);

    double leak = 0.0;
    auto record = [&](std::size_t j) {
        tr.c_e[j] = y[0];
        tr.c_x_im[j] = y[3];
        tr.c_g[j] = y[4];
        tr.loss_gamma[j] = y[6];
        tr.loss_kappa[j] = y[7];
        leak = std::max({leak, std::abs(y[1]), std::abs(y[2]), std::abs(y[5])});
    };

    numerics::Dopri5Options o;
    o.rtol = options.rtol;
    o.atol = options.atol;
    o.min_step = 1e-12 * (gr.back() - gr.front());
    const numerics::Dopri5<8> stepper(o);

    double t = tr.grid.front();
    double h = 0.0;
    record(0);
    // Steps stop on every node so each step sees a single Hermite cubic.
    for (std::size_t j = 1; j < n; ++j) {
        stepper.advance(rhs, t, y, tr.grid[j], h);
        record(j);
    }

    // A real target keeps c_e, c_g real and c_x imaginary; the initial state
    // decides whether that symmetry is expected.
    const bool real_gauge = initial.e.imag() == 0.0 && initial.x.real() == 0.0 && initial.g.imag() == 0.0;
    if (real_gauge && leak > imaginary_leakage_limit) {
        std::ostringstream m;
        m << "integrate: imaginary leakage " << leak << " exceeds " << imaginary_leakage_limit;
        throw std::runtime_error(m.str());
    }
    return tr;
}

ForwardResult verify(const PhotonShape& shape, double eta, const CavityParams& cavity,
                     const DrivePulse& drive, const IntegratorOptions& options)
{
    if (!(eta > 0.0))
        throw std::invalid_argument("eta must be positive");
    if (!is_uniform(drive.grid) || drive.grid.size() % 2 == 0)
        throw std::invalid_argument("verify: drive grid must be uniform with an odd number of points");

    ForwardResult r;
    r.trajectory = integrate(drive, cavity, Amplitudes{}, std::nullopt, options);
    const auto& tr = r.trajectory;
    const std::size_t n = tr.size();
    const double h = (tr.grid.back() - tr.grid.front()) / static_cast<double>(n - 1);
    const double root_eta = std::sqrt(eta);
    const double root_2k = std::sqrt(2.0 * cavity.kappa);

    r.target.resize(n);
    r.emitted.resize(n);
    std::vector<double> diff2(n), target2(n), emit2(n), rate(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.target[i] = root_eta * shape.value(tr.grid[i]);
        r.emitted[i] = root_2k * tr.c_g[i];
        const double d = r.emitted[i] - r.target[i];
        diff2[i] = d * d;
        target2[i] = r.target[i] * r.target[i];
        emit2[i] = r.emitted[i] * r.emitted[i];
        rate[i] = 2.0 * cavity.kappa * tr.c_g[i] * tr.c_g[i];
    }
    const double tnorm = std::sqrt(numerics::simpson(target2, h));
    r.shape_error_l2 = std::sqrt(numerics::simpson(diff2, h)) / tnorm;
    r.eta_achieved = numerics::simpson(rate, h);
    r.conservation_residual = tr.conservation_residual();

    const double enorm = std::sqrt(numerics::simpson(emit2, h));
    const double span = tr.grid.back() - tr.grid.front();
    r.emitted_area_rel = enorm > 0.0 ? numerics::simpson(r.emitted, h) / (std::sqrt(span) * enorm) : 0.0;
    return r;
}

LossBudget loss_budget(const ForwardResult& result)
{
    const auto& tr = result.trajectory;
    return {tr.loss_gamma.back(), tr.loss_kappa.back()};
}

} // namespace cqed
