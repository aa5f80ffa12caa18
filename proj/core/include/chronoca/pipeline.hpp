#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chronoca/ca_engine.hpp"
#include "chronoca/chronocluster.hpp"
#include "chronoca/contingency.hpp"

namespace chronoca {

enum class InputKind { table, events };

InputKind parse_input_kind(const std::string& text);

/// How raw input becomes an analysable table.
struct IngestOptions {
    InputKind kind = InputKind::table;
    TimeBin bin = TimeBin::month;
    std::optional<double> binarize_threshold;
    std::optional<double> merge_rare_min_total;
    std::string other_label = "other";
};

/// Load, then optionally binarize, then optionally merge rare columns.
PrunedTable ingest(std::istream& in, const IngestOptions& options);
PrunedTable ingest_file(const std::filesystem::path& path, const IngestOptions& options);

/// Everything computed for one run. When the cloud has no factors the
/// clustering is skipped and dendrogram/report stay empty.
struct SequenceAnalysis {
    ContingencyTable table;
    FactorModel model;
    std::optional<Dendrogram> dendrogram;
    std::optional<ChangepointReport> report;
    std::size_t k = 0;
};

/// analyze -> row_points -> cluster_sequence -> changepoints(k).
/// Throws UsageError when k is 0 or exceeds the number of rows.
SequenceAnalysis analyze_sequence(const ContingencyTable& table, std::size_t k);

/// Plain-text report: inertia, factor count, two-factor share, boundaries.
std::string summary_text(const SequenceAnalysis& analysis);

struct EmitFlags {
    bool factors_json = false;
    bool dendrogram_json = false;
    bool newick = false;
    bool factor_map_svg = false;
    bool dendrogram_svg = false;
    bool report_text = false;
    /// Set by "all": artifacts the model cannot support are skipped with a
    /// warning instead of failing the run.
    bool best_effort = false;

    bool any() const noexcept {
        return factors_json || dendrogram_json || newick || factor_map_svg || dendrogram_svg || report_text;
    }
};

/// Parses a comma list of factors-json, dendrogram-json, newick,
/// factor-map-svg, dendrogram-svg, report-text (or "all").
EmitFlags parse_emit_flags(const std::string& text);

struct PipelineConfig {
    std::filesystem::path input;
    IngestOptions ingest;
    std::size_t k = 2;
    std::filesystem::path output_dir;
    EmitFlags emit;
    std::size_t map_axis_x = 1;
    std::size_t map_axis_y = 2;
};

struct PipelineResult {
    SequenceAnalysis analysis;
    std::vector<std::string> warnings;
    std::string summary;
    std::vector<std::filesystem::path> written;
};

/// Runs the whole chain and writes the requested artifacts into
/// output_dir. Every artifact is rendered first, then written to a
/// temporary name and renamed; on any failure nothing new is left behind.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// 1 domain/parse error, 2 usage error, 3 I/O error, 1 for anything else.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace chronoca
