#include "glidesnn/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "glidesnn/error.hpp"

namespace glidesnn {
namespace {

struct Series {
    const char* label;
    const char* color;
    std::vector<double> xs;
    std::vector<double> ys;
};

constexpr double kW = 800.0;
constexpr double kH = 420.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string px(double v) { return fmt("%.2f", v); }

std::vector<double> ticks(double lo, double hi, int target = 5) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> out;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
}

class Frame {
public:
    Frame(std::string title, std::string xlabel, std::string ylabel, double x0, double x1, double y0,
          double y1, std::vector<std::pair<double, std::string>> xcats = {})
        : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        if (!(x1_ > x0_)) x1_ = x0_ + 1.0;
        if (!(y1_ > y0_)) {
            y0_ -= 1.0;
            y1_ += 1.0;
        }
        os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
            << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << "<text x=\"" << px(kW / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
            << "</text>\n";
        if (xcats.empty())
            for (double t : ticks(x0_, x1_)) xcats.emplace_back(t, fmt("%g", t));
        for (const auto& [t, label] : xcats) {
            os_ << "<line x1=\"" << px(sx(t)) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(sx(t))
                << "\" y2=\"" << px(kH - kBottom) << "\" stroke=\"#ddd\"/>\n"
                << "<text x=\"" << px(sx(t)) << "\" y=\"" << px(kH - kBottom + 16)
                << "\" text-anchor=\"middle\">" << label << "</text>\n";
        }
        for (double t : ticks(y0_, y1_)) {
            os_ << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(sy(t)) << "\" x2=\"" << px(kW - kRight)
                << "\" y2=\"" << px(sy(t)) << "\" stroke=\"#ddd\"/>\n"
                << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(sy(t) + 4)
                << "\" text-anchor=\"end\">" << fmt("%.3g", t) << "</text>\n";
        }
        os_ << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(kW - kLeft - kRight)
            << "\" height=\"" << px(kH - kTop - kBottom) << "\" fill=\"none\" stroke=\"black\"/>\n"
            << "<text x=\"" << px(kLeft + (kW - kLeft - kRight) / 2) << "\" y=\"" << px(kH - 12)
            << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
            << "<text transform=\"translate(18," << px(kTop + (kH - kTop - kBottom) / 2)
            << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    }

    double sx(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kW - kLeft - kRight); }
    double sy(double y) const { return kH - kBottom - (y - y0_) / (y1_ - y0_) * (kH - kTop - kBottom); }

    void polyline(const Series& s) {
        os_ << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (i) os_ << ' ';
            os_ << px(sx(s.xs[i])) << ',' << px(sy(s.ys[i]));
        }
        os_ << "\"/>\n";
    }

    void bar(double x0, double x1, double y, const char* color) {
        const double top = sy(std::max(y, y0_));
        const double base = sy(std::max(0.0, y0_));
        os_ << "<rect x=\"" << px(sx(x0)) << "\" y=\"" << px(std::min(top, base)) << "\" width=\""
            << px(sx(x1) - sx(x0)) << "\" height=\"" << px(std::abs(base - top)) << "\" fill=\"" << color
            << "\"/>\n";
    }

    void legend(std::size_t row, const char* label, const char* color) {
        const double y = kTop + 10 + 20.0 * static_cast<double>(row);
        os_ << "<rect x=\"" << px(kW - kRight + 12) << "\" y=\"" << px(y) << "\" width=\"14\" height=\"10\" fill=\""
            << color << "\"/>\n"
            << "<text x=\"" << px(kW - kRight + 32) << "\" y=\"" << px(y + 10) << "\">" << label << "</text>\n";
    }

    void raw(const std::string& s) { os_ << s; }

    std::string str() {
        os_ << "</svg>\n";
        return os_.str();
    }

private:
    double x0_, x1_, y0_, y1_;
    std::ostringstream os_;
};

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c"};
constexpr const char* kLabels[] = {"radar1", "radar2", "snn"};

double axis_of(const ErrorSample& e, char axis) { return axis == 'x' ? e.ex : e.ey; }

const Histogram& hist_of(const AxisHistograms& h, char axis) { return axis == 'x' ? h.x : h.y; }

void write_file(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + p.string());
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    out.close();
    if (!out) throw IoError("write failed: " + p.string());
}

void check_axis(char axis) {
    if (axis != 'x' && axis != 'y') throw DomainError("axis must be 'x' or 'y'");
}

void check_nonempty(const RunReport& r) {
    if (r.samples.empty()) throw DomainError("report has no samples");
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string errors_csv(const RunReport& r) {
    std::string out = kErrorsHeader;
    out += '\n';
    for (const auto& s : r.samples) {
        const double row[] = {s.t,         s.truth.x,   s.truth.y,   s.radar1.ex, s.radar1.ey, s.radar2.ex,
                              s.radar2.ey, s.fused.ex,  s.fused.ey,  s.oracle.ex, s.oracle.ey};
        for (std::size_t i = 0; i < std::size(row); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string histograms_csv(const RunReport& r) {
    std::string out = "source,axis,bin_lower,bin_upper,count\n";
    const AxisHistograms* hs[] = {&r.hist_radar1, &r.hist_radar2, &r.hist_fused};
    for (std::size_t k = 0; k < 3; ++k) {
        for (char axis : {'x', 'y'}) {
            const auto& h = hist_of(*hs[k], axis);
            for (std::size_t b = 0; b < h.counts.size(); ++b) {
                out += kLabels[k];
                out += ',';
                out += axis;
                out += ',' + fmt("%.2f", h.lower_edge(b)) + ',' + fmt("%.2f", h.upper_edge(b)) + ',' +
                       std::to_string(h.counts[b]) + '\n';
            }
        }
    }
    return out;
}

std::string stats_csv(const RunReport& r) {
    std::string out = "source,axis,mean,variance,rms\n";
    const std::pair<const char*, const SourceStats*> rows[] = {
        {"radar1", &r.radar1}, {"radar2", &r.radar2}, {"snn", &r.fused}, {"oracle", &r.oracle}};
    for (const auto& [name, st] : rows) {
        for (char axis : {'x', 'y'}) {
            const auto& a = axis == 'x' ? st->x : st->y;
            out += std::string(name) + ',' + axis + ',' + format_double(a.mean) + ',' +
                   format_double(a.variance) + ',' + format_double(a.rms) + '\n';
        }
    }
    return out;
}

std::string errors_svg(const RunReport& r, char axis) {
    check_axis(axis);
    check_nonempty(r);
    Series series[3] = {{kLabels[0], kColors[0], {}, {}}, {kLabels[1], kColors[1], {}, {}},
                        {kLabels[2], kColors[2], {}, {}}};
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& s : r.samples) {
        const double v[3] = {axis_of(s.radar1, axis), axis_of(s.radar2, axis), axis_of(s.fused, axis)};
        for (int k = 0; k < 3; ++k) {
            series[k].xs.push_back(s.t);
            series[k].ys.push_back(v[k]);
            lo = std::min(lo, v[k]);
            hi = std::max(hi, v[k]);
        }
    }
    const double pad = 0.05 * (hi - lo);
    Frame f(std::string(1, axis) + " position error", "t (s)", "error (m)", r.samples.front().t,
            r.samples.back().t, lo - pad, hi + pad);
    for (int k = 0; k < 3; ++k) {
        f.polyline(series[k]);
        f.legend(static_cast<std::size_t>(k), series[k].label, series[k].color);
    }
    return f.str();
}

std::string histogram_svg(const RunReport& r, char axis) {
    check_axis(axis);
    check_nonempty(r);
    const Histogram* hs[] = {&hist_of(r.hist_radar1, axis), &hist_of(r.hist_radar2, axis),
                             &hist_of(r.hist_fused, axis)};
    long first = hs[0]->first_bin;
    long last = first;
    std::size_t peak = 1;
    for (const auto* h : hs) {
        first = std::min(first, h->first_bin);
        last = std::max(last, h->first_bin + static_cast<long>(h->counts.size()));
        for (auto c : h->counts) peak = std::max(peak, c);
    }
    const double w = kHistogramBinWidth;
    Frame f(std::string(1, axis) + " error histogram (bin " + fmt("%.2f", w) + " m)", "error (m)", "count",
            static_cast<double>(first) * w, static_cast<double>(last) * w, 0.0,
            static_cast<double>(peak) * 1.05);
    for (int k = 0; k < 3; ++k) {
        const auto& h = *hs[k];
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            const double lo = h.lower_edge(b) + w * (0.1 + 0.27 * k);
            f.bar(lo, lo + 0.26 * w, static_cast<double>(h.counts[b]), kColors[k]);
        }
        f.legend(static_cast<std::size_t>(k), kLabels[k], kColors[k]);
    }
    return f.str();
}

std::string stats_bar_svg(const RunReport& r) {
    check_nonempty(r);
    const SourceStats* st[] = {&r.radar1, &r.radar2, &r.fused};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << 2 * kH
       << "\" viewBox=\"0 0 " << kW << ' ' << 2 * kH << "\">\n";
    for (int panel = 0; panel < 2; ++panel) {
        double lo = 0.0;
        double hi = 0.0;
        for (const auto* s : st) {
            for (const auto* a : {&s->x, &s->y}) {
                const double v = panel == 0 ? a->mean : a->variance;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        Frame f(panel == 0 ? "mean error" : "error variance", "axis",
                panel == 0 ? "mean (m)" : "variance (m^2)", -0.5, 1.5, lo * 1.1, hi * 1.1,
                {{0.0, "x"}, {1.0, "y"}});
        for (int axis = 0; axis < 2; ++axis) {
            for (int k = 0; k < 3; ++k) {
                const auto& a = axis == 0 ? st[k]->x : st[k]->y;
                const double x0 = axis - 0.35 + 0.24 * k;
                f.bar(x0, x0 + 0.22, panel == 0 ? a.mean : a.variance, kColors[k]);
            }
        }
        for (int k = 0; k < 3; ++k) f.legend(static_cast<std::size_t>(k), kLabels[k], kColors[k]);
        auto body = f.str();
        // nest each panel as its own positioned svg
        os << "<g transform=\"translate(0," << px(panel * kH) << ")\">\n" << body << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void emit_outputs(const RunReport& r, const std::filesystem::path& dir) {
    check_nonempty(r);
    const std::pair<const char*, std::string> files[] = {
        {"errors.csv", errors_csv(r)},
        {"histograms.csv", histograms_csv(r)},
        {"stats.csv", stats_csv(r)},
        {"errors_x.svg", errors_svg(r, 'x')},
        {"errors_y.svg", errors_svg(r, 'y')},
        {"hist_x.svg", histogram_svg(r, 'x')},
        {"hist_y.svg", histogram_svg(r, 'y')},
        {"stats_bar.svg", stats_bar_svg(r)},
    };
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, body] : files) write_file(dir / name, body);
}

RunReport read_errors_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty file " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kErrorsHeader) throw DomainError(path.string() + ": unexpected header");

    RunReport r;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double v[11];
        std::size_t n = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (n < 11) {
            auto [next, ec] = std::from_chars(p, end, v[n]);
            if (ec != std::errc{}) break;
            ++n;
            p = next;
            if (p == end) break;
            if (*p != ',') break;
            ++p;
        }
        if (n != 11 || p != end)
            throw DomainError(path.string() + ":" + std::to_string(lineno) + ": expected 11 numeric fields");
        SampleRecord s;
        s.t = v[0];
        s.truth = {v[1], v[2]};
        s.radar1 = {v[0], v[3], v[4], Source::Radar1};
        s.radar2 = {v[0], v[5], v[6], Source::Radar2};
        s.fused = {v[0], v[7], v[8], Source::Fused};
        s.oracle = {v[0], v[9], v[10], Source::Fused};
        r.samples.push_back(s);
    }
    if (in.bad()) throw IoError("read failed: " + path.string());
    if (r.samples.empty()) throw DomainError(path.string() + ": no samples");
    summarize(r);
    return r;
}

}  // namespace glidesnn
