#include "chronoca/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "chronoca/csv.hpp"
#include "chronoca/errors.hpp"

namespace chronoca {

namespace {

// Fixed two-decimal coordinates keep the files small and byte-stable.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string percent(double share) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * share);
    return buf;
}

void svg_open(std::ostringstream& out, double width, double height) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\">\n"
        << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\""
        << fmt(height) << "\" fill=\"white\"/>\n";
}

}  // namespace

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_factor_map(const FactorModel& model, std::size_t first, std::size_t second,
                              const FactorMapStyle& style) {
    const std::size_t n = model.n_factors();
    if (first == second) throw UsageError("factor map needs two distinct axes");
    if (first < 1 || first > n || second < 1 || second > n) {
        throw UsageError("factor map axes (" + std::to_string(first) + ", " + std::to_string(second) +
                         ") out of range for " + std::to_string(n) + " factor(s)");
    }
    const std::size_t ax = first - 1;
    const std::size_t ay = second - 1;

    double extent = 0.0;
    for (std::size_t i = 0; i < model.row_coords.rows(); ++i) {
        extent = std::max({extent, std::abs(model.row_coords(i, ax)), std::abs(model.row_coords(i, ay))});
    }
    for (std::size_t j = 0; j < model.col_coords.rows(); ++j) {
        extent = std::max({extent, std::abs(model.col_coords(j, ax)), std::abs(model.col_coords(j, ay))});
    }
    if (extent == 0.0) extent = 1.0;

    // Isotropic scale: chi-squared distances read the same along both axes.
    const double half = style.size / 2.0;
    const double scale = (half - style.margin) / extent;
    auto px = [&](double v) { return half + v * scale; };
    auto py = [&](double v) { return half - v * scale; };

    std::ostringstream out;
    svg_open(out, style.size, style.size);
    out << "<line class=\"axis\" x1=\"" << fmt(style.margin / 2) << "\" y1=\"" << fmt(half) << "\" x2=\""
        << fmt(style.size - style.margin / 2) << "\" y2=\"" << fmt(half) << "\" stroke=\"#888\"/>\n";
    out << "<line class=\"axis\" x1=\"" << fmt(half) << "\" y1=\"" << fmt(style.margin / 2) << "\" x2=\""
        << fmt(half) << "\" y2=\"" << fmt(style.size - style.margin / 2) << "\" stroke=\"#888\"/>\n";

    out << "<g class=\"observations\" fill=\"#1f4e79\">\n";
    for (std::size_t i = 0; i < model.row_coords.rows(); ++i) {
        out << "<circle class=\"obs\" cx=\"" << fmt(px(model.row_coords(i, ax))) << "\" cy=\""
            << fmt(py(model.row_coords(i, ay))) << "\" r=\"" << fmt(style.dot_radius) << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g class=\"attributes\" fill=\"#b03a2e\" font-family=\"sans-serif\" font-size=\""
        << fmt(style.font_size) << "\">\n";
    const double mark = style.dot_radius * 1.6;
    for (std::size_t j = 0; j < model.col_coords.rows(); ++j) {
        const double x = px(model.col_coords(j, ax));
        const double y = py(model.col_coords(j, ay));
        const std::string label = j < model.col_labels.size() ? model.col_labels[j] : std::to_string(j + 1);
        out << "<rect class=\"attr-marker\" x=\"" << fmt(x - mark / 2) << "\" y=\"" << fmt(y - mark / 2)
            << "\" width=\"" << fmt(mark) << "\" height=\"" << fmt(mark) << "\"/>\n";
        out << "<text class=\"attr\" x=\"" << fmt(x + mark) << "\" y=\"" << fmt(y - mark) << "\">"
            << xml_escape(label) << "</text>\n";
    }
    out << "</g>\n";

    out << "<text class=\"axis-caption\" x=\"" << fmt(style.size - style.margin / 2) << "\" y=\""
        << fmt(half + style.font_size + 4) << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\""
        << fmt(style.font_size) << "\">Factor " << first << " (" << percent(factor_share(model, ax))
        << ")</text>\n";
    out << "<text class=\"axis-caption\" x=\"" << fmt(half + 4) << "\" y=\"" << fmt(style.margin / 2 + style.font_size)
        << "\" font-family=\"sans-serif\" font-size=\"" << fmt(style.font_size) << "\">Factor " << second << " ("
        << percent(factor_share(model, ay)) << ")</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string render_dendrogram(const Dendrogram& dend, const std::vector<std::string>& labels,
                              const DendrogramStyle& style) {
    const std::size_t n = dend.n_leaves;
    if (labels.size() != n) {
        throw UsageError("dendrogram has " + std::to_string(n) + " leaves but " +
                         std::to_string(labels.size()) + " labels were given");
    }
    if (n == 0 || dend.merges.size() + 1 != n) throw UsageError("incomplete dendrogram");

    std::size_t longest = 0;
    for (const auto& l : labels) longest = std::max(longest, l.size());
    const double label_band = std::max(style.min_label_band, 0.62 * style.font_size * static_cast<double>(longest) + 8.0);

    const double width = 2 * style.margin + style.leaf_pitch * static_cast<double>(n);
    const double baseline = style.margin + style.tree_height;
    const double height = baseline + label_band + style.margin;
    const double top = dend.merges.empty() ? 0.0 : dend.merges.back().height;
    const double scale = top > 0.0 ? style.tree_height / top : 0.0;

    // Node anchors: x at the centre of the children, y at the merge height.
    std::vector<double> node_x(n + dend.merges.size() + 1);
    std::vector<double> node_y(node_x.size());
    for (std::size_t i = 1; i <= n; ++i) {
        node_x[i] = style.margin + style.leaf_pitch * (static_cast<double>(i) - 0.5);
        node_y[i] = baseline;
    }

    std::ostringstream out;
    svg_open(out, width, height);
    out << "<g class=\"tree\" fill=\"none\" stroke=\"#222\" stroke-width=\"1\">\n";
    for (std::size_t t = 0; t < dend.merges.size(); ++t) {
        const Merge& m = dend.merges[t];
        const std::size_t id = n + 1 + t;
        const double y = baseline - m.height * scale;
        node_x[id] = (node_x[m.left] + node_x[m.right]) / 2.0;
        node_y[id] = y;
        out << "<path class=\"junction\" data-height=\"" << csv::format_number(m.height) << "\" d=\"M"
            << fmt(node_x[m.left]) << ' ' << fmt(node_y[m.left]) << "V" << fmt(y) << "H"
            << fmt(node_x[m.right]) << "V" << fmt(node_y[m.right]) << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g class=\"leaves\" font-family=\"sans-serif\" font-size=\"" << fmt(style.font_size) << "\">\n";
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = node_x[i] + style.font_size / 3.0;
        const double y = baseline + 4.0;
        out << "<text class=\"leaf\" x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" text-anchor=\"end\" transform=\"rotate(-90 "
            << fmt(x) << ' ' << fmt(y) << ")\">" << xml_escape(labels[i - 1]) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace chronoca
