#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chronoca/ca_engine.hpp"
#include "chronoca/chronocluster.hpp"

namespace chronoca {

struct FactorMapStyle {
    double size = 640.0;
    double margin = 64.0;
    double dot_radius = 2.5;
    double font_size = 11.0;
};

/// Planar map of factors first/second (1-based). Rows are unlabelled
/// <circle class="obs">, columns a square marker plus <text class="attr">.
/// Axis captions carry the inertia share of each factor to one decimal.
/// Throws UsageError unless first != second and both lie in 1..N.
std::string render_factor_map(const FactorModel& model, std::size_t first = 1, std::size_t second = 2,
                              const FactorMapStyle& style = {});

struct DendrogramStyle {
    double leaf_pitch = 18.0;   // leaf axis, per leaf
    double min_label_band = 24.0;
    double tree_height = 360.0;
    double margin = 24.0;
    double font_size = 10.0;
};

/// Leaves left to right in sequence order, heights upward. Each merge is a
/// single <path class="junction" data-height="..."> whose crossbar sits at
/// an ordinate proportional to the merge height. Leaf labels are
/// <text class="leaf">. Throws UsageError if labels.size() != n_leaves.
std::string render_dendrogram(const Dendrogram& dend, const std::vector<std::string>& labels,
                              const DendrogramStyle& style = {});

/// Escapes &, <, >, " and ' for XML text and attribute values.
std::string xml_escape(const std::string& text);

}  // namespace chronoca
