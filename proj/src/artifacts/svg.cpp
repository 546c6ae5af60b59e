#include "ccfm/artifacts/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ccfm::artifacts {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Series {
    std::string label;
    std::vector<double> x, y;
    double marker = std::numeric_limits<double>::quiet_NaN();
};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

std::string px(double x) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << x;
    return os.str();
}

bool in_range(double y, const ChartSpec& spec) {
    if (!std::isfinite(y)) return false;
    if (spec.y_min && y < *spec.y_min) return false;
    if (spec.y_max && y > *spec.y_max) return false;
    return true;
}

std::vector<Series> collect(const Table& table, const ChartSpec& spec) {
    const auto xs = table.numeric(spec.x);
    std::vector<std::string> groups(table.rows());
    if (spec.group) groups = table.text(*spec.group);

    std::vector<std::string> order;
    for (const auto& g : groups)
        if (std::find(order.begin(), order.end(), g) == order.end()) order.push_back(g);

    std::vector<Series> out;
    for (const auto& col : spec.y) {
        const auto ys = table.numeric(col);
        for (const auto& g : order) {
            Series s;
            s.label = spec.group ? *spec.group + "=" + g : col;
            if (spec.group && spec.y.size() > 1) s.label += " " + col;
            for (std::size_t r = 0; r < table.rows(); ++r) {
                if (groups[r] != g) continue;
                s.x.push_back(xs[r]);
                s.y.push_back(ys[r]);
            }
            if (spec.mark_peak) {
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < s.x.size(); ++i)
                    if (std::isfinite(s.y[i]) && s.y[i] > best) best = s.y[i], s.marker = s.x[i];
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace

void check_columns(const Table& table, const ChartSpec& spec) {
    auto need = [&](const std::string& c) {
        if (!table.has_column(c)) throw std::invalid_argument("chart references missing column '" + c + "'");
    };
    need(spec.x);
    for (const auto& c : spec.y) need(c);
    if (spec.group) need(*spec.group);
}

std::string render_chart(const Table& table, const ChartSpec& spec) {
    check_columns(table, spec);
    const auto series = collect(table, spec);

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !in_range(s.y[i], spec)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(spec.title)
       << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + (x1 - x0) * k / 5.0;
        const double yv = y0 + (y1 - y0) * k / 5.0;
        os << "<line x1=\"" << px(sx(xv)) << "\" y1=\"" << px(kTop + ph) << "\" x2=\"" << px(sx(xv))
           << "\" y2=\"" << px(kTop + ph + 5) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(kTop + ph + 18) << "\" text-anchor=\"middle\">"
           << num(xv) << "</text>\n";
        os << "<line x1=\"" << px(kLeft - 5) << "\" y1=\"" << px(sy(yv)) << "\" x2=\"" << px(kLeft)
           << "\" y2=\"" << px(sy(yv)) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(sy(yv) + 4) << "\" text-anchor=\"end\">"
           << num(yv) << "</text>\n";
    }
    os << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << px(kHeight - 10) << "\" text-anchor=\"middle\">"
       << esc(spec.x_label.empty() ? spec.x : spec.x_label) << "</text>\n";
    os << "<text transform=\"translate(16," << px(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << esc(spec.y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* colour = kPalette[si % std::size(kPalette)];
        const std::size_t stride = std::max<std::size_t>(1, (s.x.size() + spec.max_points - 1) / spec.max_points);
        std::string points;
        auto flush = [&]() {
            if (!points.empty())
                os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\""
                   << points << "\"/>\n";
            points.clear();
        };
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            if (!std::isfinite(s.x[i]) || !in_range(s.y[i], spec)) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += px(sx(s.x[i])) + ',' + px(sy(s.y[i]));
        }
        flush();
        if (std::isfinite(s.marker) && s.marker >= x0 && s.marker <= x1)
            os << "<line x1=\"" << px(sx(s.marker)) << "\" y1=\"" << kTop << "\" x2=\"" << px(sx(s.marker))
               << "\" y2=\"" << px(kTop + ph) << "\" stroke=\"" << colour << "\" stroke-dasharray=\"4 3\"/>\n";
        const double ly = kTop + 14 + 18 * static_cast<double>(si);
        os << "<line x1=\"" << px(kWidth - kRight + 10) << "\" y1=\"" << px(ly) << "\" x2=\""
           << px(kWidth - kRight + 30) << "\" y2=\"" << px(ly) << "\" stroke=\"" << colour
           << "\" stroke-width=\"2\"/><text x=\"" << px(kWidth - kRight + 35) << "\" y=\"" << px(ly + 4) << "\">"
           << esc(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace ccfm::artifacts
