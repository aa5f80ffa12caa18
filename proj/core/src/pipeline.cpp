#include "chronoca/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <utility>

#include "chronoca/errors.hpp"
#include "chronoca/render.hpp"
#include "chronoca/serialize.hpp"

namespace chronoca {

namespace fs = std::filesystem;

InputKind parse_input_kind(const std::string& text) {
    if (text == "table") return InputKind::table;
    if (text == "events") return InputKind::events;
    throw UsageError("unknown input kind '" + text + "' (expected table or events)");
}

PrunedTable ingest(std::istream& in, const IngestOptions& options) {
    PrunedTable current = options.kind == InputKind::table
                              ? load_table(in)
                              : aggregate_events(load_events(in), options.bin);
    if (options.binarize_threshold) {
        auto next = binarize(current.table, *options.binarize_threshold);
        current.table = std::move(next.table);
        current.warnings.insert(current.warnings.end(), next.warnings.begin(), next.warnings.end());
    }
    if (options.merge_rare_min_total) {
        current.table = merge_rare_columns(current.table, *options.merge_rare_min_total, options.other_label);
    }
    return current;
}

PrunedTable ingest_file(const fs::path& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input '" + path.string() + "'");
    return ingest(in, options);
}

SequenceAnalysis analyze_sequence(const ContingencyTable& table, std::size_t k) {
    if (k < 1 || k > table.rows()) {
        throw UsageError("k = " + std::to_string(k) + " outside [1, " + std::to_string(table.rows()) + "]");
    }
    SequenceAnalysis out{table, analyze(table), std::nullopt, std::nullopt, k};
    if (out.model.n_factors() > 0) {
        out.dendrogram = cluster_sequence(out.model.row_coords);
        out.report = changepoints(*out.dendrogram, k);
    }
    return out;
}

std::string summary_text(const SequenceAnalysis& a) {
    std::ostringstream out;
    char buf[64];
    out << "rows " << a.table.rows() << ", columns " << a.table.cols() << '\n';
    const std::size_t n = a.model.n_factors();
    if (n == 0) {
        out << "total inertia 0; no factors; clustering skipped\n";
        return out.str();
    }
    std::snprintf(buf, sizeof buf, "%.6g", a.model.total_inertia);
    out << "total inertia " << buf << '\n';
    out << "factors " << n << '\n';
    const std::size_t top = std::min<std::size_t>(2, n);
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * explained_ratio(a.model, top));
    out << "explained by " << top << " factor" << (top == 1 ? "" : "s") << ' ' << buf << '\n';
    out << "clusters " << a.k << '\n';
    const auto& labels = a.table.row_labels();
    for (const Boundary& b : a.report->boundaries) {
        std::snprintf(buf, sizeof buf, "%.6g", b.height);
        out << "boundary between rows " << b.position << " and " << b.position + 1 << " ("
            << labels[b.position - 1] << " | " << labels[b.position] << ") height " << buf << '\n';
    }
    return out.str();
}

EmitFlags parse_emit_flags(const std::string& text) {
    EmitFlags flags;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "all") {
            flags = EmitFlags{true, true, true, true, true, true, true};
        } else if (item == "factors-json") {
            flags.factors_json = true;
        } else if (item == "dendrogram-json") {
            flags.dendrogram_json = true;
        } else if (item == "newick") {
            flags.newick = true;
        } else if (item == "factor-map-svg") {
            flags.factor_map_svg = true;
        } else if (item == "dendrogram-svg") {
            flags.dendrogram_svg = true;
        } else if (item == "report-text") {
            flags.report_text = true;
        } else {
            throw UsageError("unknown emit flag '" + item + "'");
        }
    }
    return flags;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into '" + path.string() + "'");
    }
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    if (config.k < 1) throw UsageError("k must be at least 1");

    PrunedTable loaded = ingest_file(config.input, config.ingest);
    PipelineResult result{analyze_sequence(loaded.table, config.k), std::move(loaded.warnings), {}, {}};
    result.summary = summary_text(result.analysis);

    const SequenceAnalysis& a = result.analysis;
    const EmitFlags& emit = config.emit;
    if (!emit.any()) return result;

    // Render everything before touching the filesystem.
    std::vector<std::pair<std::string, std::string>> files;
    if (emit.factors_json) {
        std::ostringstream s;
        write_factors_json(s, a.model);
        files.emplace_back("factors.json", s.str());
    }
    if (emit.factor_map_svg && emit.best_effort && a.model.n_factors() < 2) {
        result.warnings.push_back("fewer than 2 factors: factor map not written");
    } else if (emit.factor_map_svg) {
        files.emplace_back("factor_map.svg", render_factor_map(a.model, config.map_axis_x, config.map_axis_y));
    }
    if (a.dendrogram) {
        if (emit.dendrogram_json) {
            std::ostringstream s;
            write_dendrogram_json(s, *a.dendrogram);
            files.emplace_back("dendrogram.json", s.str());
        }
        if (emit.newick) files.emplace_back("tree.nwk", to_newick(*a.dendrogram, a.table.row_labels()) + "\n");
        if (emit.dendrogram_svg) {
            files.emplace_back("dendrogram.svg", render_dendrogram(*a.dendrogram, a.table.row_labels()));
        }
    } else if (emit.dendrogram_json || emit.newick || emit.dendrogram_svg) {
        result.warnings.push_back("no factors: dendrogram outputs not written");
    }
    if (emit.report_text) files.emplace_back("report.txt", result.summary);

    std::error_code ec;
    if (!fs::is_directory(config.output_dir, ec)) {
        fs::create_directories(config.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + config.output_dir.string() + "'");
    }

    std::vector<fs::path> staged;
    try {
        for (const auto& [name, content] : files) {
            fs::path tmp = config.output_dir / (name + ".tmp");
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot create '" + tmp.string() + "'");
            staged.push_back(tmp);
            out << content;
            out.flush();
            if (!out) throw IoError("failed writing '" + tmp.string() + "'");
        }
        for (std::size_t i = 0; i < files.size(); ++i) {
            const fs::path target = config.output_dir / files[i].first;
            fs::rename(staged[i], target, ec);
            if (ec) throw IoError("cannot rename into '" + target.string() + "'");
            result.written.push_back(target);
        }
    } catch (...) {
        for (const auto& p : staged) fs::remove(p, ec);
        throw;
    }
    return result;
}

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const UsageError*>(&e)) return 2;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    return 1;
}

}  // namespace chronoca
