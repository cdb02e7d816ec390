#include <cqed/app/config.hpp>

#include <cqed/app/csv.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cqed::app {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
    return out;
}

std::size_t to_size(const std::string& key, const std::string& v)
{
    std::size_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw std::invalid_argument("config: '" + key + "' expects a positive integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw std::invalid_argument("config: '" + key + "' expects true/false, got '" + v + "'");
}

double rate(double v, bool angular) { return angular ? v : angular_from_mhz(v); }

} // namespace

void RunConfig::validate() const
{
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("eta must be positive");
    if (!(g_MHz > 0.0))
        throw std::invalid_argument("g must be positive");
    if (!(kappa_MHz > 0.0))
        throw std::invalid_argument("kappa must be positive");
    if (!(gamma_MHz >= 0.0))
        throw std::invalid_argument("gamma must be non-negative");
    if (grid_points < 101 || grid_points % 2 == 0)
        throw std::invalid_argument("grid_points must be odd and >= 101");
    if (shape == "sampled") {
        if (shape_csv.empty())
            throw std::invalid_argument("shape 'sampled' needs shape_csv");
    } else {
        const ShapeKind k = parse_shape_kind(shape);
        (void)k;
        if (!(T_us > 0.0))
            throw std::invalid_argument("T_us must be positive");
    }
    if (sweep_axis != "T" && sweep_axis != "g" && sweep_axis != "kappa" && sweep_axis != "gamma")
        throw std::invalid_argument("sweep_axis must be one of T, g, kappa, gamma");
    if (sweep_points < 1)
        throw std::invalid_argument("sweep_points must be >= 1");
    if (!(sweep_from > 0.0) || !(sweep_to > 0.0))
        throw std::invalid_argument("sweep range must be positive (log-spaced axis)");
}

CavityParams RunConfig::cavity() const
{
    return CavityParams{rate(g_MHz, angular), rate(kappa_MHz, angular), rate(gamma_MHz, angular)}.checked();
}

PhotonShape RunConfig::make_shape() const
{
    if (shape == "sampled") {
        const ShapeSamples s = read_shape_csv(shape_csv);
        return from_samples(s.times, s.values);
    }
    CatalogExtras ex;
    ex.t0_us = t0_us;
    ex.sigma_us = sigma_us;
    ex.window_sigmas = window_sigmas;
    return make_catalog_shape(parse_shape_kind(shape), T_us, ex);
}

UniformGrid RunConfig::grid_for(const PhotonShape& s) const
{
    return UniformGrid::over(s.support(), grid_points);
}

std::string RunConfig::serialize() const
{
    std::ostringstream o;
    o << "shape = " << shape << '\n';
    o << "T_us = " << format_number(T_us) << '\n';
    if (t0_us)
        o << "t0_us = " << format_number(*t0_us) << '\n';
    if (sigma_us)
        o << "sigma_us = " << format_number(*sigma_us) << '\n';
    o << "window_sigmas = " << format_number(window_sigmas) << '\n';
    if (!shape_csv.empty())
        o << "shape_csv = " << shape_csv << '\n';
    o << "eta = " << format_number(eta) << '\n';
    o << "g_MHz = " << format_number(g_MHz) << '\n';
    o << "kappa_MHz = " << format_number(kappa_MHz) << '\n';
    o << "gamma_MHz = " << format_number(gamma_MHz) << '\n';
    o << "angular = " << (angular ? "true" : "false") << '\n';
    o << "grid_points = " << grid_points << '\n';
    if (!out.empty())
        o << "out = " << out << '\n';
    if (!drive_csv.empty())
        o << "drive_csv = " << drive_csv << '\n';
    o << "sweep_axis = " << sweep_axis << '\n';
    o << "sweep_from = " << format_number(sweep_from) << '\n';
    o << "sweep_to = " << format_number(sweep_to) << '\n';
    o << "sweep_points = " << sweep_points << '\n';
    return o.str();
}

RunConfig RunConfig::parse(std::string_view text)
{
    RunConfig c;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string l = trim(line);
        if (l.empty())
            continue;
        const auto eq = l.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(l).substr(0, eq));
        const std::string val = trim(std::string_view(l).substr(eq + 1));

        if (key == "shape") c.shape = val;
        else if (key == "T_us") c.T_us = to_double(key, val);
        else if (key == "t0_us") c.t0_us = to_double(key, val);
        else if (key == "sigma_us") c.sigma_us = to_double(key, val);
        else if (key == "window_sigmas") c.window_sigmas = to_double(key, val);
        else if (key == "shape_csv") c.shape_csv = val;
        else if (key == "eta") c.eta = to_double(key, val);
        else if (key == "g_MHz") c.g_MHz = to_double(key, val);
        else if (key == "kappa_MHz") c.kappa_MHz = to_double(key, val);
        else if (key == "gamma_MHz") c.gamma_MHz = to_double(key, val);
        else if (key == "angular") c.angular = to_bool(key, val);
        else if (key == "grid_points") c.grid_points = to_size(key, val);
        else if (key == "out") c.out = val;
        else if (key == "drive_csv") c.drive_csv = val;
        else if (key == "sweep_axis") c.sweep_axis = val;
        else if (key == "sweep_from") c.sweep_from = to_double(key, val);
        else if (key == "sweep_to") c.sweep_to = to_double(key, val);
        else if (key == "sweep_points") c.sweep_points = to_size(key, val);
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return parse(s.str());
}

} // namespace cqed::app
