#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "backbone.hpp"
#include "cycle.hpp"
#include "grid.hpp"
#include "instance.hpp"

namespace bhc {

namespace detail {

inline void svg_num(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    out += buf;
}

inline void svg_line(std::string& out, double x1, double y1, double x2, double y2,
                     const char* style) {
    out += "<line x1=\"";
    svg_num(out, x1);
    out += "\" y1=\"";
    svg_num(out, y1);
    out += "\" x2=\"";
    svg_num(out, x2);
    out += "\" y2=\"";
    svg_num(out, y2);
    out += "\" ";
    out += style;
    out += "/>\n";
}

}  // namespace detail

// Figure of one trial: the tiling (sparse tiles shaded, backbone tiles
// highlighted), the sampled nodes, and the cycle with bridges dashed. The
// unit square maps to a 1000 x 1000 viewBox, y flipped so the origin sits at
// the bottom-left. Any layer may be omitted by passing null.
inline std::string render_svg(const Instance* inst, const GridState* grid, const Backbone* backbone,
                              const CycleState* cycle, double r_n) {
    const double W = 1000.0;
    const auto px = [&](double v) { return (v + 0.5) * W; };
    const auto py = [&](double v) { return W - (v + 0.5) * W; };

    std::string out;
    out.reserve(1 << 16);
    out +=
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" "
        "width=\"1000\" height=\"1000\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n";

    if (grid) {
        const int K = grid->K;
        std::vector<char> on_backbone(static_cast<std::size_t>(K) * static_cast<std::size_t>(K), 0);
        if (backbone)
            for (CellIdx c : backbone->cells)
                on_backbone[static_cast<std::size_t>(grid->idx(c))] = 1;
        const double side = W / static_cast<double>(K);
        for (int row = 0; row < K; ++row)
            for (int col = 0; col < K; ++col) {
                const char* fill = "#ffffff";
                if (on_backbone[static_cast<std::size_t>(grid->idx(row, col))])
                    fill = "#cfe0f5";
                else if (!grid->is_dense({row, col}))
                    fill = "#e8e8e8";
                out += "<rect x=\"";
                detail::svg_num(out, col * side);
                out += "\" y=\"";
                detail::svg_num(out, W - (row + 1) * side);
                out += "\" width=\"";
                detail::svg_num(out, side);
                out += "\" height=\"";
                detail::svg_num(out, side);
                out += "\" fill=\"";
                out += fill;
                out += "\" stroke=\"#c8c8c8\" stroke-width=\"0.4\"/>\n";
            }
    }

    if (cycle && inst && !cycle->order.empty()) {
        const std::size_t m = cycle->order.size();
        std::string plain, bridges;
        for (std::size_t i = 0; i < m; ++i) {
            const Point a = inst->points[static_cast<std::size_t>(cycle->order[i])];
            const Point b = inst->points[static_cast<std::size_t>(cycle->order[(i + 1) % m])];
            const bool is_bridge = dist(a, b) >= r_n;
            detail::svg_line(is_bridge ? bridges : plain, px(a.x), py(a.y), px(b.x), py(b.y),
                             is_bridge
                                 ? "stroke=\"#d43d3d\" stroke-width=\"1.4\" stroke-dasharray=\"6 3\""
                                 : "stroke=\"#2e8b57\" stroke-width=\"0.9\"");
        }
        out += plain;
        out += bridges;
    }

    if (inst)
        for (const Point& p : inst->points) {
            out += "<circle cx=\"";
            detail::svg_num(out, px(p.x));
            out += "\" cy=\"";
            detail::svg_num(out, py(p.y));
            out += "\" r=\"1.6\" fill=\"#1f1f1f\"/>\n";
        }

    out += "<g font-family=\"sans-serif\" font-size=\"14\">\n";
    out += "<rect x=\"10\" y=\"10\" width=\"190\" height=\"88\" fill=\"#ffffff\" "
           "fill-opacity=\"0.85\" stroke=\"#888888\" stroke-width=\"0.6\"/>\n";
    out += "<line x1=\"18\" y1=\"30\" x2=\"52\" y2=\"30\" stroke=\"#2e8b57\" "
           "stroke-width=\"2\"/>\n<text x=\"60\" y=\"35\">cycle edge</text>\n";
    out += "<line x1=\"18\" y1=\"54\" x2=\"52\" y2=\"54\" stroke=\"#d43d3d\" stroke-width=\"2\" "
           "stroke-dasharray=\"6 3\"/>\n<text x=\"60\" y=\"59\">bridge edge</text>\n";
    out += "<rect x=\"18\" y=\"70\" width=\"34\" height=\"14\" fill=\"#cfe0f5\" "
           "stroke=\"#888888\" stroke-width=\"0.5\"/>\n<text x=\"60\" y=\"82\">backbone tile</text>\n";
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace bhc
