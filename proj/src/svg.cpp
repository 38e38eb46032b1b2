#include "asln/svg.hpp"

#include "asln/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace asln::svg {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 70, kRight = 620, kTop = 40, kBottom = 390;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

struct Axis {
    double lo, hi;
    bool log;
    double to_unit(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        return (x - a) / (b - a);
    }
};

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, bool log_x, bool log_y) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (log_x && x <= 0) continue;
            if (log_y && y <= 0) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) {
        xmin = ymin = 0.1;
        xmax = ymax = 1.0;
    }
    if (xmin == xmax) {
        xmin *= 0.9;
        xmax *= 1.1;
    }
    if (ymin == ymax) {
        ymin = ymin == 0 ? -1 : ymin * 0.9;
        ymax = ymax == 0 ? 1 : ymax * 1.1;
    }
    const Axis ax{xmin, xmax, log_x};
    const Axis ay{ymin, ymax, log_y};
    auto px = [&](double v) { return kLeft + ax.to_unit(v) * (kRight - kLeft); };
    auto py = [&](double v) { return kBottom - ay.to_unit(v) * (kBottom - kTop); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("svg: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << (kRight - kLeft)
        << "\" height=\"" << (kBottom - kTop) << "\" fill=\"none\" stroke=\"black\"/>\n";

    auto ticks = [&](const Axis& axis) {
        std::vector<double> t;
        if (axis.log) {
            for (int d = static_cast<int>(std::floor(std::log10(axis.lo)));
                 d <= static_cast<int>(std::ceil(std::log10(axis.hi))); ++d) {
                const double v = std::pow(10.0, d);
                if (v >= axis.lo * 0.999 && v <= axis.hi * 1.001) t.push_back(v);
            }
        } else {
            for (int i = 0; i <= 5; ++i) t.push_back(axis.lo + (axis.hi - axis.lo) * i / 5.0);
        }
        return t;
    };
    for (double v : ticks(ax)) {
        out << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << kBottom << "\" x2=\"" << fmt(px(v))
            << "\" y2=\"" << (kBottom + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(px(v)) << "\" y=\"" << (kBottom + 18)
            << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    }
    for (double v : ticks(ay)) {
        out << "<line x1=\"" << (kLeft - 5) << "\" y1=\"" << fmt(py(v)) << "\" x2=\"" << kLeft
            << "\" y2=\"" << fmt(py(v)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << (kLeft - 8) << "\" y=\"" << fmt(py(v) + 4)
            << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    out << "<text x=\"" << (kWidth / 2) << "\" y=\"" << (kHeight - 8)
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << (kHeight / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (kHeight / 2) << ")\">"
        << y_label << "</text>\n";

    int color = 0;
    double legend_y = kTop + 14;
    for (const auto& s : series) {
        const char* stroke = kPalette[color % 8];
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.6\" points=\"";
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if ((log_x && x <= 0) || (log_y && y <= 0)) continue;
            out << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << (kLeft + 10) << "\" y=\"" << fmt(legend_y) << "\" fill=\""
            << stroke << "\">" << s.label << "</text>\n";
        legend_y += 15;
        ++color;
    }
    out << "</svg>\n";
}

void write_records_chart(const std::vector<harness::ExperimentRecord>& records,
                         const std::string& path, const std::string& title) {
    // One series per (ns, metric column), seed-mean vs nx.
    struct Key {
        Index ns;
        std::string column;
        bool operator<(const Key& o) const {
            return ns != o.ns ? ns < o.ns : column < o.column;
        }
    };
    std::map<Key, std::map<Index, std::pair<double, int>>> sums;
    auto add = [&](Index ns, const std::string& column, Index nx, double v) {
        if (!std::isfinite(v)) return;
        auto& cell = sums[{ns, column}][nx];
        cell.first += v;
        cell.second += 1;
    };
    for (const auto& r : records) {
        if (!r.ok()) continue;
        const std::string tag = std::string(harness::name(r.mode));
        add(r.ns, "bss_mse(" + tag + ")", r.nx, r.metrics.bss_mse);
        add(r.ns, "subspace_error(" + tag + ")", r.nx, r.metrics.subspace_error);
        add(r.ns, "eq11", r.nx, r.eq11_mse);
        add(r.ns, "eq12", r.nx, r.eq12_mse);
        add(r.ns, "eig_ratio", r.nx, r.eigenvalue_ratio);
        add(r.ns, "subspace_estimate", r.nx, r.subspace_error_estimate);
    }
    std::vector<Series> series;
    for (const auto& [key, by_nx] : sums) {
        Series s;
        s.label = "ns=" + std::to_string(key.ns) + " " + key.column;
        for (const auto& [nx, acc] : by_nx)
            s.points.emplace_back(static_cast<double>(nx), acc.first / acc.second);
        if (!s.points.empty()) series.push_back(std::move(s));
    }
    write_line_chart(path, title, "nx", "value", series, true, true);
}

}  // namespace asln::svg
