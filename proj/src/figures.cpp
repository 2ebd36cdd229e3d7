#include "ipd/figures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "ipd/distances.hpp"
#include "ipd/errors.hpp"
#include "ipd/io.hpp"

namespace ipd::figures {

namespace {

constexpr double kPanelPx = 480.0;
constexpr double kMarginPx = 40.0;
constexpr double kGapPx = 60.0;

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void check_resolution(int resolution) {
    if (resolution < 64) throw invalid_parameter("figure resolution must be >= 64");
}

struct Rgb {
    int r, g, b;
};

// Linear ramp on log volume between two fixed stops.
Rgb ramp(double u) {
    u = std::clamp(u, 0.0, 1.0);
    auto mix = [u](double a, double b) { return static_cast<int>(std::lround(a + u * (b - a))); };
    return {mix(20, 250), mix(42, 235), mix(90, 120)};
}

std::string rgb_string(Rgb c) {
    return "rgb(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," +
           std::to_string(c.b) + ")";
}

void svg_open(std::string& svg, double width, double height, const std::string& desc) {
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + io::format_double(width) +
           "\" height=\"" + io::format_double(height) + "\">\n";
    svg += "<desc>" + desc + "</desc>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_rect(std::string& svg, double x, double y, double w, double h,
              const std::string& fill) {
    svg += "<rect x=\"" + io::format_double(x) + "\" y=\"" + io::format_double(y) +
           "\" width=\"" + io::format_double(w) + "\" height=\"" + io::format_double(h) +
           "\" fill=\"" + fill + "\"/>\n";
}

void svg_text(std::string& svg, double x, double y, const std::string& text) {
    svg += "<text x=\"" + io::format_double(x) + "\" y=\"" + io::format_double(y) +
           "\" font-family=\"sans-serif\" font-size=\"14\">" + text + "</text>\n";
}

void svg_frame(std::string& svg, double x, double y, double size) {
    svg += "<rect x=\"" + io::format_double(x) + "\" y=\"" + io::format_double(y) +
           "\" width=\"" + io::format_double(size) + "\" height=\"" + io::format_double(size) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
}

}  // namespace

std::vector<std::string> fig1(const std::string& out_dir, int resolution) {
    check_resolution(resolution);
    const int R = resolution;
    const double x_max = 10.0;
    const double t_max = 0.1;
    const double dx = x_max / R;
    const double dt = t_max / R;

    // Row-major with x fastest, t slowest; cell centers.
    std::vector<double> canberra(static_cast<std::size_t>(R) * R);
    std::vector<double> euclid(static_cast<std::size_t>(R) * R);
    for (int j = 0; j < R; ++j) {
        const double t = (j + 0.5) * dt;
        for (int i = 0; i < R; ++i) {
            const double x = (i + 0.5) * dx;
            canberra[static_cast<std::size_t>(j) * R + i] = 4.0 * t * x / (1.0 - t * t);
            euclid[static_cast<std::size_t>(j) * R + i] = 2.0 * t;
        }
    }

    auto write_grid = [&](const std::string& path, const std::vector<double>& phi) {
        std::string out = "x,t,phi\n";
        for (int j = 0; j < R; ++j) {
            const double t = (j + 0.5) * dt;
            for (int i = 0; i < R; ++i) {
                const double x = (i + 0.5) * dx;
                out += io::format_double(x);
                out += ',';
                out += io::format_double(t);
                out += ',';
                out += io::format_double(phi[static_cast<std::size_t>(j) * R + i]);
                out += '\n';
            }
        }
        io::atomic_write_text(path, out);
    };

    std::vector<std::string> paths;
    paths.push_back(join(out_dir, "fig1_canberra.csv"));
    write_grid(paths.back(), canberra);
    paths.push_back(join(out_dir, "fig1_euclidean.csv"));
    write_grid(paths.back(), euclid);

    // Shared color scale across the panels so the flat Euclidean panel is
    // visibly constant along x.
    double lmin = std::log(canberra.front());
    double lmax = lmin;
    for (const auto* grid : {&canberra, &euclid})
        for (double v : *grid) {
            lmin = std::min(lmin, std::log(v));
            lmax = std::max(lmax, std::log(v));
        }
    const double lspan = lmax > lmin ? lmax - lmin : 1.0;

    const double cell = kPanelPx / R;
    const double width = 2 * kMarginPx + 2 * kPanelPx + kGapPx;
    const double height = 2 * kMarginPx + kPanelPx + 30.0;
    std::string svg;
    svg.reserve(static_cast<std::size_t>(R) * R * 120);
    svg_open(svg, width, height,
             "Ball volume level sets over x in (0,10), t in (0,0.1). Color is a linear "
             "ramp on log Phi from rgb(20,42,90) to rgb(250,235,120), shared by both "
             "panels. Left: Canberra, Phi = 4tx/(1-t^2). Right: Euclidean, Phi = 2t.");

    auto draw_panel = [&](double x0, const std::vector<double>& phi) {
        for (int j = 0; j < R; ++j)
            for (int i = 0; i < R; ++i) {
                const double u =
                    (std::log(phi[static_cast<std::size_t>(j) * R + i]) - lmin) / lspan;
                svg_rect(svg, x0 + i * cell, kMarginPx + (R - 1 - j) * cell, cell + 0.5,
                         cell + 0.5, rgb_string(ramp(u)));
            }
        svg_frame(svg, x0, kMarginPx, kPanelPx);
        svg_text(svg, x0, kMarginPx + kPanelPx + 18.0, "x: 0 to 10, t: 0 to 0.1");
    };
    draw_panel(kMarginPx, canberra);
    svg_text(svg, kMarginPx, kMarginPx - 10.0, "Canberra");
    draw_panel(kMarginPx + kPanelPx + kGapPx, euclid);
    svg_text(svg, kMarginPx + kPanelPx + kGapPx, kMarginPx - 10.0, "Euclidean");
    svg += "</svg>\n";

    paths.push_back(join(out_dir, "fig1.svg"));
    io::atomic_write_text(paths.back(), svg);
    return paths;
}

std::vector<std::string> fig2(const std::string& out_dir, int resolution) {
    check_resolution(resolution);
    const int R = resolution;
    const auto spec = distances::DistanceSpec::canberra(2);

    struct Panel {
        std::string name;
        double cx, cy, t;
        double wx, wy;  // window (0, wx] x (0, wy]
    };
    const std::vector<Panel> panels = {
        {"fig2_center_10_1.csv", 10.0, 1.0, 1.0, 60.0, 20.0},
        {"fig2_center_10_10.csv", 10.0, 10.0, 1.0, 60.0, 20.0},
        {"fig2_center_5_5.csv", 5.0, 5.0, 1.0, 60.0, 20.0},
        {"fig2_center_50_10.csv", 50.0, 10.0, 1.0, 60.0, 20.0},
        {"fig2_radius_08.csv", 10.0, 10.0, 0.8, 40.0, 40.0},
        {"fig2_radius_06.csv", 10.0, 10.0, 0.6, 40.0, 40.0},
        {"fig2_radius_04.csv", 10.0, 10.0, 0.4, 40.0, 40.0},
        {"fig2_radius_02.csv", 10.0, 10.0, 0.2, 40.0, 40.0},
    };

    std::vector<std::string> paths;
    std::vector<std::vector<bool>> rasters;
    rasters.reserve(panels.size());
    for (const auto& p : panels) {
        const double dx = p.wx / R;
        const double dy = p.wy / R;
        const distances::Point center({p.cx, p.cy});
        std::vector<bool> hit(static_cast<std::size_t>(R) * R);
        std::string out = "x,y,member\n";
        for (int j = 0; j < R; ++j) {
            const double y = (j + 0.5) * dy;
            for (int i = 0; i < R; ++i) {
                const double x = (i + 0.5) * dx;
                const bool member = distances::eval(spec, center, {{x, y}}) < p.t;
                hit[static_cast<std::size_t>(j) * R + i] = member;
                out += io::format_double(x);
                out += ',';
                out += io::format_double(y);
                out += member ? ",1\n" : ",0\n";
            }
        }
        paths.push_back(join(out_dir, p.name));
        io::atomic_write_text(paths.back(), out);
        rasters.push_back(std::move(hit));
    }

    // 2 x 4 grid of small multiples; only member cells are drawn.
    const double panel_px = 220.0;
    const double gap = 30.0;
    const double width = 2 * kMarginPx + 4 * panel_px + 3 * gap;
    const double height = 2 * kMarginPx + 2 * panel_px + gap + 20.0;
    std::string svg;
    svg_open(svg, width, height,
             "Canberra balls in the plane. Top row: radius 1 around (10,1), (10,10), "
             "(5,5), (50,10) on (0,60] x (0,20]. Bottom row: radii 0.8, 0.6, 0.4, 0.2 "
             "around (10,10) on (0,40] x (0,40]. Member cells are filled.");
    const std::vector<std::string> titles = {
        "center (10,1)", "center (10,10)", "center (5,5)",  "center (50,10)",
        "radius 0.8",    "radius 0.6",     "radius 0.4",    "radius 0.2"};
    const double cell = panel_px / R;
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const double x0 = kMarginPx + (p % 4) * (panel_px + gap);
        const double y0 = kMarginPx + (p / 4) * (panel_px + gap + 20.0);
        for (int j = 0; j < R; ++j)
            for (int i = 0; i < R; ++i)
                if (rasters[p][static_cast<std::size_t>(j) * R + i])
                    svg_rect(svg, x0 + i * cell, y0 + (R - 1 - j) * cell, cell + 0.5,
                             cell + 0.5, "rgb(40,90,160)");
        svg_frame(svg, x0, y0, panel_px);
        svg_text(svg, x0, y0 + panel_px + 15.0, titles[p]);
    }
    svg += "</svg>\n";

    paths.push_back(join(out_dir, "fig2.svg"));
    io::atomic_write_text(paths.back(), svg);
    return paths;
}

}  // namespace ipd::figures
