// =============================================================================
// wavectl CLI - minimal static SVG line charts
// =============================================================================
//
// Just enough vector drawing for the artifacts the CLI emits: time-series
// panels, the Nyquist image curve, and the (q, alpha) zone map.  Data are
// mapped into a fixed viewport with padded linear axes; nothing here is
// interactive or styled beyond legibility.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace wavectl::cli {

struct Series {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<double> x, y;
};

class SvgChart {
public:
    SvgChart(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)),
          xlabel_(std::move(xlabel)),
          ylabel_(std::move(ylabel)) {}

    void add(Series s) {
        if (!s.x.empty()) series_.push_back(std::move(s));
    }

    /// Extra reference line x = value (vertical) or y = value (horizontal).
    void vline(double x) { vlines_.push_back(x); }
    void hline(double y) { hlines_.push_back(y); }

    /// A labeled marker point drawn on top of all series.
    void marker(double x, double y, const std::string& label) {
        markers_.push_back({label, x, y});
    }

    bool write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) return false;
        out << render();
        return bool(out);
    }

    std::string render() const {
        double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
        bounds(x0, x1, y0, y1);
        std::ostringstream s;
        s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW
          << "' height='" << kH << "' viewBox='0 0 " << kW << " " << kH
          << "'>\n"
          << "<rect width='100%' height='100%' fill='white'/>\n"
          << "<text x='" << kW / 2 << "' y='20' text-anchor='middle' "
          << "font-family='sans-serif' font-size='14'>" << title_
          << "</text>\n";
        frame(s, x0, x1, y0, y1);
        for (double v : vlines_)
            line(s, px(v, x0, x1), py(y0, y0, y1), px(v, x0, x1),
                 py(y1, y0, y1), "#999999", 1, "4 3");
        for (double v : hlines_)
            line(s, px(x0, x0, x1), py(v, y0, y1), px(x1, x0, x1),
                 py(v, y0, y1), "#999999", 1, "4 3");
        int legend_row = 0;
        for (const auto& ser : series_) {
            s << "<polyline fill='none' stroke='" << ser.color
              << "' stroke-width='1.2' points='";
            for (std::size_t i = 0; i < ser.x.size(); ++i) {
                const double X = px(ser.x[i], x0, x1);
                const double Y = py(ser.y[i], y0, y1);
                if (std::isfinite(X) && std::isfinite(Y))
                    s << X << "," << Y << " ";
            }
            s << "'/>\n";
            if (!ser.label.empty()) {
                const double ly = kPad + 14.0 * legend_row++;
                line(s, kW - kPad - 88, ly, kW - kPad - 70, ly, ser.color,
                     2, "");
                s << "<text x='" << kW - kPad - 66 << "' y='" << ly + 4
                  << "' font-family='sans-serif' font-size='11'>" << ser.label
                  << "</text>\n";
            }
        }
        for (const auto& m : markers_) {
            const double X = px(m.x, x0, x1), Y = py(m.y, y0, y1);
            s << "<circle cx='" << X << "' cy='" << Y
              << "' r='4' fill='#d62728'/>\n"
              << "<text x='" << X + 6 << "' y='" << Y - 6
              << "' font-family='sans-serif' font-size='11'>" << m.label
              << "</text>\n";
        }
        s << "</svg>\n";
        return s.str();
    }

private:
    static constexpr double kW = 760, kH = 480, kPad = 56;

    struct Marker {
        std::string label;
        double x, y;
    };

    void bounds(double& x0, double& x1, double& y0, double& y1) const {
        bool any = false;
        for (const auto& ser : series_)
            for (std::size_t i = 0; i < ser.x.size(); ++i) {
                if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i]))
                    continue;
                if (!any) {
                    x0 = x1 = ser.x[i];
                    y0 = y1 = ser.y[i];
                    any = true;
                } else {
                    x0 = std::min(x0, ser.x[i]);
                    x1 = std::max(x1, ser.x[i]);
                    y0 = std::min(y0, ser.y[i]);
                    y1 = std::max(y1, ser.y[i]);
                }
            }
        for (const auto& m : markers_) {
            x0 = std::min(x0, m.x);
            x1 = std::max(x1, m.x);
            y0 = std::min(y0, m.y);
            y1 = std::max(y1, m.y);
        }
        if (!any && markers_.empty()) {
            x0 = y0 = 0;
            x1 = y1 = 1;
        }
        if (x1 - x0 < 1e-12) {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if (y1 - y0 < 1e-12) {
            y0 -= 0.5;
            y1 += 0.5;
        }
        const double mx = 0.04 * (x1 - x0), my = 0.06 * (y1 - y0);
        x0 -= mx;
        x1 += mx;
        y0 -= my;
        y1 += my;
    }

    static double px(double x, double x0, double x1) {
        return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad);
    }
    static double py(double y, double y0, double y1) {
        return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad);
    }

    static void line(std::ostringstream& s, double ax, double ay, double bx,
                     double by, const std::string& color, double width,
                     const std::string& dash) {
        s << "<line x1='" << ax << "' y1='" << ay << "' x2='" << bx
          << "' y2='" << by << "' stroke='" << color << "' stroke-width='"
          << width << "'";
        if (!dash.empty()) s << " stroke-dasharray='" << dash << "'";
        s << "/>\n";
    }

    void frame(std::ostringstream& s, double x0, double x1, double y0,
               double y1) const {
        s << "<rect x='" << kPad << "' y='" << kPad << "' width='"
          << kW - 2 * kPad << "' height='" << kH - 2 * kPad
          << "' fill='none' stroke='#444444'/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double fx = x0 + (x1 - x0) * i / 4.0;
            const double fy = y0 + (y1 - y0) * i / 4.0;
            s << "<text x='" << px(fx, x0, x1) << "' y='" << kH - kPad + 18
              << "' text-anchor='middle' font-family='sans-serif' "
              << "font-size='10'>" << fmt(fx) << "</text>\n"
              << "<text x='" << kPad - 6 << "' y='" << py(fy, y0, y1) + 3
              << "' text-anchor='end' font-family='sans-serif' "
              << "font-size='10'>" << fmt(fy) << "</text>\n";
        }
        s << "<text x='" << kW / 2 << "' y='" << kH - 12
          << "' text-anchor='middle' font-family='sans-serif' "
          << "font-size='12'>" << xlabel_ << "</text>\n"
          << "<text x='16' y='" << kH / 2
          << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
          << "transform='rotate(-90 16 " << kH / 2 << ")'>" << ylabel_
          << "</text>\n";
    }

    static std::string fmt(double v) {
        std::ostringstream s;
        if (std::abs(v) >= 1e4 || (std::abs(v) < 1e-3 && v != 0.0))
            s.setf(std::ios::scientific), s.precision(1);
        else
            s.precision(4);
        s << v;
        return s.str();
    }

    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
    std::vector<double> vlines_, hlines_;
    std::vector<Marker> markers_;
};

}  // namespace wavectl::cli
