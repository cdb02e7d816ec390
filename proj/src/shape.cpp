#include <cqed/shape.hpp>

#include <cqed/numerics/quadrature.hpp>
#include <cqed/numerics/spline.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cqed {

namespace {

constexpr double pi = std::numbers::pi;

// Raw top-hat profile coefficient of the sin^7 term.
constexpr double tophat_sin7_weight = 1.19;

int count_sign_changes(std::span<const double> v)
{
    int flips = 0;
    double last = 0.0;
    for (double x : v) {
        if (x == 0.0)
            continue;
        if (last != 0.0 && std::signbit(x) != std::signbit(last))
            ++flips;
        last = x;
    }
    return flips;
}

PhotonShape make_sin2(double T, bool twin, bool flip)
{
    const double amp = std::sqrt(8.0 / (3.0 * T));
    const double w = (twin ? 2.0 : 1.0) * pi / T;
    const double mid = 0.5 * T;
    auto sgn = [flip, mid](double t) { return flip && t > mid ? -1.0 : 1.0; };
    auto v = [=](double t) {
        const double s = std::sin(w * t);
        return sgn(t) * amp * s * s;
    };
    auto d = [=](double t) { return sgn(t) * amp * w * std::sin(2.0 * w * t); };
    auto dd = [=](double t) { return sgn(t) * 2.0 * amp * w * w * std::cos(2.0 * w * t); };
    const ShapeKind kind = !twin ? ShapeKind::sin2 : flip ? ShapeKind::twinpeak_pi : ShapeKind::twinpeak;
    return PhotonShape(kind, {0.0, T}, v, d, dd, flip ? 1 : 0);
}

PhotonShape make_tophat(double T)
{
    const double pre = std::sqrt(10.0 / (9.0 * T));
    const double w1 = 2.0 * pi / T;
    const double w2 = pi / T;
    const double c = tophat_sin7_weight;
    auto v = [=](double t) {
        const double s1 = std::sin(w1 * t);
        const double s2 = std::sin(w2 * t);
        return pre * (s1 * s1 + c * std::pow(s2, 7));
    };
    auto d = [=](double t) {
        const double s2 = std::sin(w2 * t);
        return pre * (w1 * std::sin(2.0 * w1 * t) + 7.0 * c * w2 * std::pow(s2, 6) * std::cos(w2 * t));
    };
    auto dd = [=](double t) {
        const double s2 = std::sin(w2 * t);
        const double c2 = std::cos(w2 * t);
        return pre
            * (2.0 * w1 * w1 * std::cos(2.0 * w1 * t)
               + 7.0 * c * w2 * w2 * (6.0 * std::pow(s2, 5) * c2 * c2 - std::pow(s2, 7)));
    };
    // The closed-form prefactor is only approximately normalising.
    return normalized(PhotonShape(ShapeKind::tophat, {0.0, T}, v, d, dd));
}

PhotonShape make_gaussian(double T, const CatalogExtras& ex)
{
    const double n = ex.window_sigmas;
    if (!(n >= 8.0))
        throw std::invalid_argument("gaussian: truncation window must cover at least 8 sigma on each side");
    const double sigma = ex.sigma_us.value_or(T / (2.0 * n));
    const double t0 = ex.t0_us.value_or(T / 2.0);
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian: sigma must be positive");
    // Normalisation deficit of the untruncated profile, \int_{|u|>n} e^{-u^2}.
    if (std::erfc(n) > 1e-6)
        throw std::invalid_argument("gaussian: truncation window too narrow");

    // e^{-u^2/2} minus a quadratic taper of size e^{-n^2/2} that zeroes both
    // the value and the slope at u = +-n.
    const double edge = std::exp(-0.5 * n * n);
    auto v = [=](double t) {
        const double u = (t - t0) / sigma;
        return std::exp(-0.5 * u * u) - edge * (1.0 + 0.5 * n * n - 0.5 * u * u);
    };
    auto d = [=](double t) {
        const double u = (t - t0) / sigma;
        return (-u * std::exp(-0.5 * u * u) + edge * u) / sigma;
    };
    auto dd = [=](double t) {
        const double u = (t - t0) / sigma;
        return ((u * u - 1.0) * std::exp(-0.5 * u * u) + edge) / (sigma * sigma);
    };
    return normalized(PhotonShape(ShapeKind::gaussian, {t0 - n * sigma, t0 + n * sigma}, v, d, dd));
}

} // namespace

std::string_view to_string(ShapeKind kind)
{
    switch (kind) {
    case ShapeKind::sin2: return "sin2";
    case ShapeKind::tophat: return "tophat";
    case ShapeKind::twinpeak: return "twinpeak";
    case ShapeKind::twinpeak_pi: return "twinpeak_pi";
    case ShapeKind::gaussian: return "gaussian";
    case ShapeKind::sampled: return "sampled";
    }
    return "unknown";
}

ShapeKind parse_shape_kind(std::string_view name)
{
    for (ShapeKind k : {ShapeKind::sin2, ShapeKind::tophat, ShapeKind::twinpeak,
                        ShapeKind::twinpeak_pi, ShapeKind::gaussian, ShapeKind::sampled})
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown shape kind '" + std::string(name) + "'");
}

PhotonShape::PhotonShape(ShapeKind kind, Support support, Fn value, Fn derivative, Fn second,
                         int phase_flips)
    : kind_(kind), support_(support), value_(std::move(value)), derivative_(std::move(derivative)),
      second_(std::move(second)), phase_flips_(phase_flips)
{
    if (!(support_.end > support_.start))
        throw std::invalid_argument("shape: support must have positive length");
    if (!value_ || !derivative_)
        throw std::invalid_argument("shape: value and derivative functions are required");
}

double PhotonShape::value(double t) const
{
    return support_.contains(t) ? scale_ * value_(t) : 0.0;
}

double PhotonShape::derivative(double t) const
{
    return support_.contains(t) ? scale_ * derivative_(t) : 0.0;
}

double PhotonShape::second_derivative(double t) const
{
    if (!support_.contains(t))
        return 0.0;
    if (second_)
        return scale_ * second_(t);
    const double h = 1e-3 * duration();
    return (-derivative(t + 2 * h) + 8 * derivative(t + h) - 8 * derivative(t - h)
            + derivative(t - 2 * h))
        / (12 * h);
}

PhotonShape PhotonShape::scaled(double factor) const
{
    PhotonShape out = *this;
    out.scale_ *= factor;
    return out;
}

double PhotonShape::norm_squared(std::size_t panels) const
{
    return numerics::gauss_legendre(
        [this](double t) {
            const double v = value(t);
            return v * v;
        },
        support_.start, support_.end, panels);
}

PhotonShape normalized(const PhotonShape& shape)
{
    const double n2 = shape.norm_squared();
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw std::invalid_argument("shape: cannot normalise a waveform with zero norm");
    return shape.scaled(1.0 / std::sqrt(n2));
}

PhotonShape make_catalog_shape(ShapeKind kind, double duration_us, const CatalogExtras& extras)
{
    if (!(duration_us > 0.0))
        throw std::invalid_argument("shape: duration T must be positive");
    switch (kind) {
    case ShapeKind::sin2: return make_sin2(duration_us, false, false);
    case ShapeKind::twinpeak: return make_sin2(duration_us, true, false);
    case ShapeKind::twinpeak_pi: return make_sin2(duration_us, true, true);
    case ShapeKind::tophat: return make_tophat(duration_us);
    case ShapeKind::gaussian: return make_gaussian(duration_us, extras);
    case ShapeKind::sampled: break;
    }
    throw std::invalid_argument("shape: '" + std::string(to_string(kind))
                                + "' is not a catalog family");
}

PhotonShape interpolate_samples(std::span<const double> times, std::span<const double> values)
{
    if (times.size() != values.size())
        throw std::invalid_argument("samples: times and values differ in length");
    if (times.size() < 8)
        throw std::invalid_argument("samples: at least 8 samples are required");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("samples: times must be strictly ascending");

    auto spline = std::make_shared<const numerics::ClampedCubicSpline>(times, values, 0.0, 0.0);
    const double n2 = spline->integral_of_square();
    if (!(n2 > 0.0))
        throw std::invalid_argument("samples: cannot normalise an all-zero waveform");

    PhotonShape raw(
        ShapeKind::sampled, {times.front(), times.back()},
        [spline](double t) { return spline->value(t); },
        [spline](double t) { return spline->derivative(t); },
        [spline](double t) { return spline->second_derivative(t); }, count_sign_changes(values));
    return raw.scaled(1.0 / std::sqrt(n2));
}

PhotonShape from_samples(std::span<const double> times, std::span<const double> values)
{
    PhotonShape shape = interpolate_samples(times, values);
    const double first = shape.value(shape.support().start);
    if (std::abs(first) * std::sqrt(shape.duration()) > edge_value_tolerance)
        throw std::invalid_argument("samples: first sample must be 0 (photon cannot start abruptly)");
    return shape;
}

ShapeSamples read_shape_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open shape file " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("shape file " + path.string() + " is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "t_us,psi0")
        throw std::invalid_argument("shape file must start with header 't_us,psi0'");

    ShapeSamples out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r")
            continue;
        std::istringstream row(line);
        double t = 0.0, v = 0.0;
        char comma = 0;
        if (!(row >> t >> comma >> v) || comma != ',')
            throw std::invalid_argument("shape file: malformed row " + std::to_string(lineno));
        out.times.push_back(t);
        out.values.push_back(v);
    }
    return out;
}

ValidationReport validate_shape(const PhotonShape& shape, std::size_t grid_points)
{
    if (grid_points < 3)
        grid_points = 3;
    if (grid_points % 2 == 0)
        ++grid_points;

    ValidationReport rep;
    const Support& s = shape.support();
    const double T = s.length();
    const double h = T / static_cast<double>(grid_points - 1);

    std::vector<double> v(grid_points), d(grid_points), sq(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double t = i + 1 == grid_points ? s.end : s.start + static_cast<double>(i) * h;
        v[i] = shape.value(t);
        d[i] = shape.derivative(t);
        sq[i] = v[i] * v[i];
    }

    rep.norm_squared = numerics::simpson(sq, h);
    rep.normalized = std::abs(rep.norm_squared - 1.0) < normalization_tolerance;
    if (!rep.normalized) {
        std::ostringstream m;
        m << "not normalised: integral of psi0^2 = " << rep.norm_squared;
        rep.messages.push_back(m.str());
    }

    const double v0 = std::abs(v.front()) * std::sqrt(T);
    const double d0 = std::abs(d.front()) * T * std::sqrt(T);
    rep.start_conditions_ok = v0 < edge_value_tolerance && d0 < edge_slope_tolerance;
    if (v0 >= edge_value_tolerance)
        rep.messages.push_back("psi0(t_start) != 0");
    if (d0 >= edge_slope_tolerance)
        rep.messages.push_back("dpsi0/dt(t_start) != 0");

    double peak = 0.0;
    for (double x : v)
        peak = std::max(peak, std::abs(x));
    double mismatch = 0.0;
    for (std::size_t i = 1; i + 1 < grid_points; ++i) {
        const double fd = (v[i + 1] - v[i - 1]) / (2.0 * h);
        mismatch = std::max(mismatch, std::abs(d[i] - fd));
    }
    rep.max_deriv_mismatch = peak > 0.0 ? mismatch * h / peak : std::numeric_limits<double>::infinity();
    rep.c1_ok = rep.max_deriv_mismatch < c1_tolerance;
    if (!rep.c1_ok) {
        std::ostringstream m;
        m << "derivative inconsistent with waveform (not C1): mismatch " << rep.max_deriv_mismatch;
        rep.messages.push_back(m.str());
    }
    return rep;
}

bool ends_smoothly(const PhotonShape& shape)
{
    const double T = shape.duration();
    const double te = shape.support().end;
    return std::abs(shape.value(te)) * std::sqrt(T) < edge_value_tolerance
        && std::abs(shape.derivative(te)) * T * std::sqrt(T) < edge_slope_tolerance;
}

} // namespace cqed
