#include "goaltime/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "goaltime/errors.hpp"

namespace goaltime {

using nlohmann::json;

namespace {

// Fixed two-decimal formatting keeps the output byte-stable.
std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

class Svg {
public:
    Svg(int width, int height) : width_(width), height_(height) {}

    void line(double x1, double y1, double x2, double y2, const std::string& style) {
        body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
                 num(y2) + "\" " + style + "/>\n";
    }
    void circle(double cx, double cy, double r, const std::string& style) {
        body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" " + style + "/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& style) {
        body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
                 num(h) + "\" " + style + "/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& style) {
        body_ += "<polyline points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
            body_ += (i ? " " : "") + num(pts[i].first) + "," + num(pts[i].second);
        body_ += "\" fill=\"none\" " + style + "/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 11, const std::string& anchor = "start") {
        body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
                 "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
    }

    void vtext(double x, double y, const std::string& s, int size = 11) {
        body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
                 "\" text-anchor=\"middle\" transform=\"rotate(-90 " + num(x) + " " + num(y) + ")\">" +
                 escape(s) + "</text>\n";
    }

    std::string str() const {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_) +
               "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " + std::to_string(width_) + " " +
               std::to_string(height_) + "\" font-family=\"sans-serif\">\n"
               "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width_) + "\" height=\"" +
               std::to_string(height_) + "\" fill=\"white\"/>\n" + body_ + "</svg>\n";
    }

private:
    int width_;
    int height_;
    std::string body_;
};

// Linear map from data to a pixel rectangle (y grows downwards).
struct Frame {
    double left, top, width, height;
    double x0, x1, y0, y1;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
    double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

std::string tick_label(double v, double step) {
    char buf[32];
    const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

void axes(Svg& svg, const Frame& f, const std::string& xlabel, const std::string& ylabel,
          double xstep, double ystep) {
    const std::string axis = "stroke=\"black\" stroke-width=\"1\"";
    svg.line(f.left, f.top + f.height, f.left + f.width, f.top + f.height, axis);
    svg.line(f.left, f.top, f.left, f.top + f.height, axis);
    for (double x = std::ceil(f.x0 / xstep) * xstep; x <= f.x1 + 1e-9; x += xstep) {
        svg.line(f.px(x), f.top + f.height, f.px(x), f.top + f.height + 4, axis);
        svg.text(f.px(x), f.top + f.height + 16, tick_label(x, xstep), 10, "middle");
    }
    for (double y = std::ceil(f.y0 / ystep) * ystep; y <= f.y1 + 1e-12; y += ystep) {
        svg.line(f.left - 4, f.py(y), f.left, f.py(y), axis);
        svg.text(f.left - 6, f.py(y) + 3, tick_label(y, ystep), 10, "end");
    }
    svg.text(f.left + f.width / 2, f.top + f.height + 34, xlabel, 12, "middle");
    svg.vtext(f.left - 46, f.top + f.height / 2, ylabel, 12);
}

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }

std::string scatter_loess(const json& report) {
    const auto counts = doubles(report.at("dataset").at("counts"));
    const auto loess = doubles(report.at("smoothing").at("loess"));
    const double mean_first = report.at("dataset").at("mean_first").get<double>();
    const double mean_second = report.at("dataset").at("mean_second").get<double>();

    const double ymax = *std::max_element(counts.begin(), counts.end()) * 1.1 + 1.0;
    const double ystep = nice_step(ymax, 6);
    Svg svg(900, 520);
    const Frame f{70, 40, 800, 420, 0.5, 90.5, 0.0, std::ceil(ymax / ystep) * ystep};
    svg.text(450, 24, "Goals per minute with loess smoother", 14, "middle");
    axes(svg, f, "minute", "goals", 15, ystep);
    svg.line(f.px(45.5), f.top, f.px(45.5), f.top + f.height, "stroke=\"#999999\" stroke-dasharray=\"2,3\"");

    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double m = static_cast<double>(i + 1);
        svg.circle(f.px(m), f.py(counts[i]), 3, "fill=\"none\" stroke=\"#1f4e79\"");
        svg.text(f.px(m) + 3, f.py(counts[i]) - 4, std::to_string(i + 1), 7);
    }
    std::vector<std::pair<double, double>> curve;
    for (std::size_t i = 0; i < loess.size(); ++i) curve.emplace_back(f.px(i + 1.0), f.py(loess[i]));
    svg.polyline(curve, "stroke=\"#c0392b\" stroke-width=\"3\"");

    const std::string dashed = "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"8,5\"";
    svg.line(f.px(0.5), f.py(mean_first), f.px(45.5), f.py(mean_first), dashed);
    svg.line(f.px(45.5), f.py(mean_second), f.px(90.5), f.py(mean_second), dashed);
    svg.text(f.px(1), f.py(mean_first) + 14, num(mean_first), 12);
    svg.text(f.px(46), f.py(mean_second) + 14, num(mean_second), 12);
    return svg.str();
}

std::string prob_vector(const json& report) {
    const auto p = doubles(report.at("model").at("prob_vector"));
    const double ymax = *std::max_element(p.begin(), p.end()) * 1.15;
    const double ystep = nice_step(ymax, 6);
    Svg svg(900, 520);
    const Frame f{80, 40, 790, 420, 0.5, 90.5, 0.0, std::ceil(ymax / ystep) * ystep};
    svg.text(450, 24, "Goal probability per minute", 14, "middle");
    axes(svg, f, "minute", "probability", 15, ystep);

    for (int half = 0; half < 2; ++half) {
        std::vector<std::pair<double, double>> seg;
        for (int i = half * kMinutesPerHalf; i < (half + 1) * kMinutesPerHalf; ++i)
            seg.emplace_back(f.px(i + 1.0), f.py(p[i]));
        svg.polyline(seg, "stroke=\"#1f4e79\" stroke-width=\"2\"");
    }
    for (std::size_t i = 0; i < p.size(); ++i) svg.circle(f.px(i + 1.0), f.py(p[i]), 2, "fill=\"#1f4e79\"");
    return svg.str();
}

std::string blocks(const json& report) {
    const auto raw = report.at("dataset").at("counts").get<std::vector<std::int64_t>>();
    MinuteCounts::Storage storage = Eigen::Map<const MinuteCounts::Storage>(raw.data());
    const MinuteCounts counts(storage);
    const auto model = model_from_report(report);
    auto sizes = report.at("config").at("block_sizes").get<std::vector<int>>();
    if (sizes.empty()) sizes = {2, 3, 5};

    const int panel_h = 220;
    const int height = 40 + static_cast<int>(sizes.size()) * (panel_h + 50);
    Svg svg(900, height);
    svg.text(450, 24, "Goals per minute averaged over blocks", 14, "middle");

    const double ymax = static_cast<double>(counts.counts().maxCoeff()) * 1.1 + 1.0;
    const double ystep = nice_step(ymax, 4);
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const int b = sizes[k];
        const auto blocking = reshape_blocks(counts, Half::full, b);
        const Frame f{70, 45.0 + k * (panel_h + 50.0), 800, static_cast<double>(panel_h), 0.5, 90.5, 0.0,
                      std::ceil(ymax / ystep) * ystep};
        axes(svg, f, "minute", "goals", 15, ystep);
        svg.text(f.left + 8, f.top + 12, "blocks of " + std::to_string(b) + " minutes", 12);

        for (int m = 1; m <= kMinutes; ++m)
            svg.circle(f.px(m), f.py(static_cast<double>(counts.at(m))), 1.8, "fill=\"#bbbbbb\"");
        for (Eigen::Index i = 0; i < blocking.values.size(); ++i) {
            const int first = blocking.minutes[i * b];
            const int last = blocking.minutes[i * b + b - 1];
            svg.line(f.px(first - 0.5), f.py(blocking.values(i)), f.px(last + 0.5), f.py(blocking.values(i)),
                     "stroke=\"#1f4e79\" stroke-width=\"2.5\"");
        }
        for (int first : {1, kMinutesPerHalf + 1}) {
            std::vector<std::pair<double, double>> expected;
            for (int m = first; m < first + kMinutesPerHalf; ++m)
                expected.emplace_back(f.px(m), f.py(expected_goals(model, m)));
            svg.polyline(expected, "stroke=\"#c0392b\" stroke-width=\"1.5\"");
        }
    }
    return svg.str();
}

std::string maxima_hist(const json& report) {
    Svg svg(900, 420);
    svg.text(450, 24, "Simulated per-minute maxima", 14, "middle");
    const char* keys[] = {"maxima_first", "maxima_second"};
    const char* titles[] = {"first half", "second half"};
    for (int k = 0; k < 2; ++k) {
        const auto& sim = report.at("simulations").at(keys[k]);
        const auto observed = sim.at("observed_max").get<std::int64_t>();
        std::int64_t lo = observed, hi = observed, top = 1;
        for (const auto& bin : sim.at("histogram")) {
            lo = std::min(lo, bin.at("max").get<std::int64_t>());
            hi = std::max(hi, bin.at("max").get<std::int64_t>());
            top = std::max(top, bin.at("count").get<std::int64_t>());
        }
        const double ymax = static_cast<double>(top) * 1.1;
        const double ystep = nice_step(ymax, 5);
        const double xstep = std::max(1.0, nice_step(static_cast<double>(hi - lo + 2), 6));
        const Frame f{70.0 + k * 430.0, 50, 370, 300, lo - 1.0, hi + 1.0, 0.0, std::ceil(ymax / ystep) * ystep};
        axes(svg, f, "maximum goals in a minute", "frequency", xstep, ystep);
        svg.text(f.left + f.width / 2, f.top - 8, titles[k], 12, "middle");

        const double bar = f.width / (f.x1 - f.x0) * 0.9;
        for (const auto& bin : sim.at("histogram")) {
            const double x = static_cast<double>(bin.at("max").get<std::int64_t>());
            const double c = static_cast<double>(bin.at("count").get<std::int64_t>());
            svg.rect(f.px(x) - bar / 2, f.py(c), bar, f.py(0) - f.py(c), "fill=\"#7f9cc0\"");
        }
        const double ox = f.px(static_cast<double>(observed));
        svg.line(ox, f.top, ox, f.top + f.height, "stroke=\"#c0392b\" stroke-width=\"2\"");
        char label[96];
        std::snprintf(label, sizeof label, "observed %lld (minute %lld), P(max > obs) = %.4f",
                      static_cast<long long>(observed), static_cast<long long>(sim.at("observed_minute").get<std::int64_t>()),
                      sim.at("tail_prob_gt").get<double>());
        svg.text(f.left + f.width / 2, f.top + 14, label, 10, "middle");
    }
    return svg.str();
}

} // namespace

PlotKind parse_plot_kind(const std::string& name) {
    if (name == "scatter_loess") return PlotKind::scatter_loess;
    if (name == "prob_vector") return PlotKind::prob_vector;
    if (name == "blocks") return PlotKind::blocks;
    if (name == "maxima_hist") return PlotKind::maxima_hist;
    throw std::invalid_argument("unknown plot kind '" + name +
                                "'; valid kinds: scatter_loess, prob_vector, blocks, maxima_hist");
}

std::string render_plot(const json& report, PlotKind kind) {
    try {
        switch (kind) {
        case PlotKind::scatter_loess: return scatter_loess(report);
        case PlotKind::prob_vector: return prob_vector(report);
        case PlotKind::blocks: return blocks(report);
        case PlotKind::maxima_hist: return maxima_hist(report);
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("report is missing plot data: ") + e.what());
    }
    throw std::invalid_argument("unknown plot kind");
}

} // namespace goaltime
