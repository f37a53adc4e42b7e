#pragma once

// Images of a polar mesh (concentric circles and radial rays) under a map,
// written as plain SVG with fixed-precision coordinates so that output is
// byte-identical for identical inputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "univalens/complex.hpp"
#include "univalens/error.hpp"

namespace univalens::svg {

struct Polyline {
    std::string label;  // e.g. "ring r=0.5" or "ray theta=1.5708"
    std::vector<cx> points;
    std::string stroke = "#1f4e79";
    double stroke_width = 1.0;
};

struct ViewBox {
    double x = -1.0, y = -1.0, width = 2.0, height = 2.0;
};

struct Panel {
    std::string title;
    std::vector<Polyline> curves;
    ViewBox view;
};

struct SvgScene {
    int width = 480;   // per panel
    int height = 480;
    std::vector<Panel> panels;
};

struct MeshSpec {
    int rings = 4;
    int rays = 8;
    int samples = 512;

    void validate() const {
        if (rings < 1) throw InvalidArgument("rings must be >= 1");
        if (rays < 1) throw InvalidArgument("rays must be >= 1");
        if (samples < 2) throw InvalidArgument("samples must be >= 2");
    }
};

inline std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);  // no "-0.000000"
    return buf;
}

/// Square view box around all points with a 5% margin.
inline ViewBox fit(const std::vector<Polyline>& curves) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& c : curves)
        for (cx p : c.points) {
            x0 = std::min(x0, p.real());
            x1 = std::max(x1, p.real());
            y0 = std::min(y0, p.imag());
            y1 = std::max(y1, p.imag());
        }
    if (!(x0 <= x1)) return {};
    const double side = std::max({x1 - x0, y1 - y0, 1e-9}) * 1.1;
    const double cx_ = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    // y is flipped on output, so the box is expressed in flipped coordinates
    return {cx_ - 0.5 * side, -cy - 0.5 * side, side, side};
}

/// Samples the images of rings |z| = j/(rings+1) and rays from 0 to
/// rings/(rings+1). Evaluation errors name the curve and the sample.
inline Panel render_map(const std::function<cx(cx)>& fn, const MeshSpec& mesh, std::string title) {
    mesh.validate();
    Panel panel;
    panel.title = std::move(title);
    const int n = mesh.samples;
    const double denom = mesh.rings + 1.0;
    auto eval = [&](const std::string& label, double param, cx z) {
        cx w;
        try {
            w = fn(z);
        } catch (const Error& e) {
            throw EvaluationError(label + " at parameter " + fixed(param) + ": " + e.what());
        }
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw EvaluationError(label + " at parameter " + fixed(param) + ": non-finite value");
        return w;
    };
    for (int j = 1; j <= mesh.rings; ++j) {
        const double r = j / denom;
        Polyline c;
        c.label = "ring r=" + fixed(r);
        for (int k = 0; k <= n; ++k) {
            const double theta = -pi + 2.0 * pi * (k % n) / n;
            c.points.push_back(eval(c.label, theta, std::polar(r, theta)));
        }
        panel.curves.push_back(std::move(c));
    }
    const double r_end = mesh.rings / denom;
    for (int j = 0; j < mesh.rays; ++j) {
        const double theta = -pi + 2.0 * pi * j / mesh.rays;
        Polyline c;
        c.label = "ray theta=" + fixed(theta);
        c.stroke = "#b04a1f";
        for (int k = 0; k < n; ++k) {
            const double r = r_end * k / (n - 1);
            c.points.push_back(eval(c.label, r, std::polar(r, theta)));
        }
        panel.curves.push_back(std::move(c));
    }
    panel.view = fit(panel.curves);
    return panel;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

inline std::string to_svg(const SvgScene& scene) {
    const int total_w = scene.width * static_cast<int>(std::max<std::size_t>(1, scene.panels.size()));
    const int title_h = 24;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(total_w) + "\" height=\"" +
           std::to_string(scene.height + title_h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < scene.panels.size(); ++i) {
        const Panel& p = scene.panels[i];
        const int x = static_cast<int>(i) * scene.width;
        out += "<text x=\"" + std::to_string(x + scene.width / 2) +
               "\" y=\"17\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
               escape(p.title) + "</text>\n";
        out += "<svg x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(title_h) + "\" width=\"" +
               std::to_string(scene.width) + "\" height=\"" + std::to_string(scene.height) + "\" viewBox=\"" +
               fixed(p.view.x) + " " + fixed(p.view.y) + " " + fixed(p.view.width) + " " + fixed(p.view.height) +
               "\">\n";
        const double sw = p.view.width / scene.width;  // stroke widths in screen pixels
        for (const Polyline& c : p.curves) {
            out += "<polyline fill=\"none\" stroke=\"" + c.stroke + "\" stroke-width=\"" +
                   fixed(c.stroke_width * sw) + "\" data-label=\"" + escape(c.label) + "\" points=\"";
            for (std::size_t k = 0; k < c.points.size(); ++k) {
                if (k) out += ' ';
                out += fixed(c.points[k].real()) + "," + fixed(-c.points[k].imag());
            }
            out += "\"/>\n";
        }
        out += "</svg>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace univalens::svg
