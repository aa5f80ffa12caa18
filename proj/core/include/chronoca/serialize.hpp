#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chronoca/ca_engine.hpp"
#include "chronoca/chronocluster.hpp"

namespace chronoca {

/// {"eigenvalues":[...],"total_inertia":x,"row_coords":[[...]...],
///  "col_coords":[[...]...],"row_labels":[...],"col_labels":[...]}
/// with every number printed to 17 significant digits.
void write_factors_json(std::ostream& out, const FactorModel& model);

/// Reads the document written by write_factors_json. Masses are not part of
/// the format and come back empty. Throws ParseError on malformed input.
FactorModel read_factors_json(std::istream& in);

/// {"n_leaves":n,"merges":[{"left":id,"right":id,"height":h,"span":[s,e]},...]}
void write_dendrogram_json(std::ostream& out, const Dendrogram& dend);

/// Parses and validates a dendrogram document.
Dendrogram read_dendrogram_json(std::istream& in);

/// Newick text with branch length = parent height - child height (leaves at
/// height 0). Labels default to leaf positions 1..n.
std::string to_newick(const Dendrogram& dend, const std::vector<std::string>& labels = {});

/// printf("%.17g")
std::string format_double17(double value);

}  // namespace chronoca
