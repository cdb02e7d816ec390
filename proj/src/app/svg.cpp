#include <cqed/app/svg.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cqed::app {

namespace {

constexpr double width = 720.0;
constexpr double panel_h = 220.0;
constexpr double left = 80.0;
constexpr double right = 20.0;
constexpr double top1 = 30.0;
constexpr double top2 = 310.0;
constexpr double height = 580.0;

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Panel {
    double top;
    double t0, t1, y0, y1;

    double px(double t) const { return left + (t - t0) / (t1 - t0) * (width - left - right); }
    double py(double y) const { return top + panel_h - (y - y0) / (y1 - y0) * panel_h; }
};

void frame(std::string& s, const Panel& p, const std::string& ylabel)
{
    s += "<rect x=\"" + fmt("%.2f", left) + "\" y=\"" + fmt("%.2f", p.top) + "\" width=\""
        + fmt("%.2f", width - left - right) + "\" height=\"" + fmt("%.2f", panel_h)
        + "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double t = p.t0 + (p.t1 - p.t0) * k / 4.0;
        const double y = p.y0 + (p.y1 - p.y0) * k / 4.0;
        s += "<text x=\"" + fmt("%.2f", p.px(t)) + "\" y=\"" + fmt("%.2f", p.top + panel_h + 16)
            + "\" text-anchor=\"middle\" font-size=\"11\">" + fmt("%.3g", t) + "</text>\n";
        s += "<text x=\"" + fmt("%.2f", left - 6) + "\" y=\"" + fmt("%.2f", p.py(y) + 4)
            + "\" text-anchor=\"end\" font-size=\"11\">" + fmt("%.3g", y) + "</text>\n";
    }
    s += "<text x=\"" + fmt("%.2f", 18.0) + "\" y=\"" + fmt("%.2f", p.top + panel_h / 2)
        + "\" font-size=\"12\" transform=\"rotate(-90 18 " + fmt("%.2f", p.top + panel_h / 2)
        + ")\" text-anchor=\"middle\">" + ylabel + "</text>\n";
}

void polylines(std::string& s, const Panel& p, const std::vector<double>& t,
               const std::vector<double>& y, const char* colour)
{
    std::string pts;
    auto flush = [&] {
        if (!pts.empty())
            s += std::string("<polyline fill=\"none\" stroke=\"") + colour + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        pts.clear();
    };
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(y[i])) {
            flush();
            continue;
        }
        if (!pts.empty())
            pts += ' ';
        pts += fmt("%.2f", p.px(t[i])) + "," + fmt("%.2f", p.py(y[i]));
    }
    flush();
}

void vmarker(std::string& s, const Panel& p, double t, const char* colour)
{
    s += "<line x1=\"" + fmt("%.2f", p.px(t)) + "\" y1=\"" + fmt("%.2f", p.top) + "\" x2=\""
        + fmt("%.2f", p.px(t)) + "\" y2=\"" + fmt("%.2f", p.top + panel_h) + "\" stroke=\"" + colour
        + "\" stroke-dasharray=\"5,4\"/>\n";
}

std::pair<double, double> range_of(const std::vector<double>& v)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : v)
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    if (!std::isfinite(lo))
        return {0.0, 1.0};
    if (hi - lo <= 0.0)
        hi = lo + 1.0;
    return {lo, hi};
}

} // namespace

std::string render_drive_svg(const Table& drive)
{
    const auto& t = drive.column("t_us");
    const auto& psi = drive.column("psi0");
    const auto& omega = drive.column("omega_rad_per_us");
    if (t.size() < 2)
        throw IoError("plot: need at least two samples");

    std::vector<double> mag(omega.size());
    std::transform(omega.begin(), omega.end(), mag.begin(), [](double w) { return std::abs(w); });

    // Sign changes and first divergence.
    std::vector<double> flips;
    std::optional<double> singular;
    double last = 0.0;
    bool seen_finite = false;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w = omega[i];
        if (!std::isfinite(w)) {
            if (seen_finite && !singular)
                singular = t[i];
            continue;
        }
        seen_finite = true;
        if (w == 0.0)
            continue;
        if (last != 0.0 && std::signbit(w) != std::signbit(last))
            flips.push_back(0.5 * (t[i - 1] + t[i]));
        last = w;
    }

    const auto [pl, ph] = range_of(psi);
    auto [ml, mh] = range_of(mag);
    ml = 0.0;
    if (!(mh > 0.0))
        mh = 1.0;
    const Panel top{top1, t.front(), t.back(), std::min(0.0, pl), ph * 1.05};
    const Panel bottom{top2, t.front(), t.back(), ml, mh * 1.05};

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", width) + "\" height=\""
        + fmt("%.0f", height) + "\" viewBox=\"0 0 " + fmt("%.0f", width) + " " + fmt("%.0f", height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    frame(s, top, "psi0 (us^-1/2)");
    polylines(s, top, t, psi, "#1f4e9a");
    frame(s, bottom, "|Omega| (rad/us)");
    polylines(s, bottom, t, mag, "#a8321e");
    for (double f : flips) {
        vmarker(s, bottom, f, "#555");
        s += "<text class=\"phase-jump\" x=\"" + fmt("%.2f", bottom.px(f) + 3) + "\" y=\""
            + fmt("%.2f", bottom.top + 12) + "\" font-size=\"10\">pi</text>\n";
    }
    if (singular) {
        vmarker(s, bottom, *singular, "#d00");
        s += "<text class=\"singularity\" x=\"" + fmt("%.2f", bottom.px(*singular) + 3) + "\" y=\""
            + fmt("%.2f", bottom.top + 24) + "\" font-size=\"10\" fill=\"#d00\">depleted</text>\n";
    }
    s += "<text x=\"" + fmt("%.2f", left + (width - left - right) / 2) + "\" y=\""
        + fmt("%.2f", top2 + panel_h + 36) + "\" text-anchor=\"middle\" font-size=\"12\">t (us)</text>\n";
    s += "</svg>\n";
    return s;
}

} // namespace cqed::app
