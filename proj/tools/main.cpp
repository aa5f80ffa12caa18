// chronoca: correspondence analysis + contiguity-constrained clustering CLI.
//
//   chronoca ingest       --input raw.csv [--kind events --bin month] --output table.csv
//   chronoca ca           --input table.csv --output factors.json [--svg map.svg]
//   chronoca cluster      --input factors.json --output dendrogram.json [--newick t.nwk] [--svg d.svg]
//   chronoca cut          --input dendrogram.json --k 8
//   chronoca changepoints --input dendrogram.json --k 8
//   chronoca pipeline     --input raw.csv --kind events --bin month --k 8 --out-dir out --emit all

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "chronoca/errors.hpp"
#include "chronoca/pipeline.hpp"
#include "chronoca/render.hpp"
#include "chronoca/serialize.hpp"

namespace {

using namespace chronoca;

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "WARN " << w << '\n';
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input '" + path + "'");
    return in;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!std::cout) throw IoError("failed writing to standard output");
    } else {
        write_file_atomic(path, content);
    }
}

std::pair<std::size_t, std::size_t> parse_axes(const std::string& text) {
    std::size_t a = 0, b = 0;
    char comma = 0;
    std::istringstream ss(text);
    if (!(ss >> a >> comma >> b) || comma != ',' || !ss.eof()) {
        throw UsageError("--axes expects two factor numbers like 1,2");
    }
    return {a, b};
}

struct IngestFlags {
    std::string input;
    std::string kind = "table";
    std::string bin = "month";
    std::optional<double> binarize;
    std::optional<double> merge_rare;
    std::string other_label = "other";

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "Input CSV (table or event log)")->required();
        cmd->add_option("--kind", kind, "Input kind: table or events")->capture_default_str();
        cmd->add_option("--bin", bin, "Event aggregation: month or year")->capture_default_str();
        cmd->add_option("--binarize", binarize, "Replace counts by presence (count > threshold)");
        cmd->add_option("--merge-rare", merge_rare, "Merge columns whose total is below this value");
        cmd->add_option("--other-label", other_label, "Name of the merged rare column")->capture_default_str();
    }

    IngestOptions options() const {
        IngestOptions o;
        o.kind = parse_input_kind(kind);
        o.bin = parse_time_bin(bin);
        o.binarize_threshold = binarize;
        o.merge_rare_min_total = merge_rare;
        o.other_label = other_label;
        return o;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correspondence analysis and sequence-constrained hierarchical clustering"};
    app.require_subcommand(1);

    // ingest
    IngestFlags ingest_flags;
    std::string ingest_output;
    auto* ingest_cmd = app.add_subcommand("ingest", "Load, aggregate and recode input into a clean table CSV");
    ingest_flags.attach(ingest_cmd);
    ingest_cmd->add_option("--output", ingest_output, "Output table CSV (default: stdout)");

    // ca
    IngestFlags ca_flags;
    std::string ca_output, ca_svg, ca_axes = "1,2";
    auto* ca_cmd = app.add_subcommand("ca", "Correspondence analysis of a table; writes factors JSON");
    ca_flags.attach(ca_cmd);
    ca_cmd->add_option("--output", ca_output, "Factors JSON (default: stdout)");
    ca_cmd->add_option("--svg", ca_svg, "Also write a factor map SVG");
    ca_cmd->add_option("--axes", ca_axes, "Factor pair for the map")->capture_default_str();

    // cluster
    std::string cluster_input, cluster_output, cluster_newick, cluster_svg;
    auto* cluster_cmd = app.add_subcommand("cluster", "Sequence-constrained complete-link clustering of factor rows");
    cluster_cmd->add_option("--input", cluster_input, "Factors JSON")->required();
    cluster_cmd->add_option("--output", cluster_output, "Dendrogram JSON (default: stdout)");
    cluster_cmd->add_option("--newick", cluster_newick, "Also write Newick");
    cluster_cmd->add_option("--svg", cluster_svg, "Also write a dendrogram SVG");

    // cut / changepoints
    std::string cut_input, cp_input;
    std::size_t cut_k = 0, cp_k = 0;
    auto* cut_cmd = app.add_subcommand("cut", "Contiguous k-cluster partition of a dendrogram");
    cut_cmd->add_option("--input", cut_input, "Dendrogram JSON")->required();
    cut_cmd->add_option("--k", cut_k, "Number of clusters")->required();
    auto* cp_cmd = app.add_subcommand("changepoints", "Boundaries of the k-cluster cut with merge heights");
    cp_cmd->add_option("--input", cp_input, "Dendrogram JSON")->required();
    cp_cmd->add_option("--k", cp_k, "Number of clusters")->required();

    // pipeline
    IngestFlags pipe_flags;
    std::size_t pipe_k = 2;
    std::string pipe_out, pipe_emit, pipe_axes = "1,2";
    auto* pipe_cmd = app.add_subcommand("pipeline", "ingest -> ca -> cluster -> changepoints, with reports");
    pipe_flags.attach(pipe_cmd);
    pipe_cmd->add_option("--k", pipe_k, "Number of clusters for the cut")->capture_default_str();
    pipe_cmd->add_option("--out-dir", pipe_out, "Directory for emitted artifacts");
    pipe_cmd->add_option("--emit", pipe_emit,
                         "Comma list: factors-json,dendrogram-json,newick,factor-map-svg,dendrogram-svg,"
                         "report-text or all");
    pipe_cmd->add_option("--axes", pipe_axes, "Factor pair for the map")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*ingest_cmd) {
            auto loaded = ingest_file(ingest_flags.input, ingest_flags.options());
            print_warnings(loaded.warnings);
            std::ostringstream s;
            write_table(s, loaded.table);
            emit(ingest_output, s.str());
        } else if (*ca_cmd) {
            const auto [ax, ay] = parse_axes(ca_axes);
            auto loaded = ingest_file(ca_flags.input, ca_flags.options());
            print_warnings(loaded.warnings);
            const FactorModel model = analyze(loaded.table);
            std::string map;
            if (!ca_svg.empty()) map = render_factor_map(model, ax, ay);
            std::ostringstream s;
            write_factors_json(s, model);
            emit(ca_output, s.str());
            if (!ca_svg.empty()) write_file_atomic(ca_svg, map);
        } else if (*cluster_cmd) {
            auto in = open_input(cluster_input);
            const FactorModel model = read_factors_json(in);
            if (model.row_coords.rows() == 0) throw DomainError("factors document has no rows");
            const Dendrogram dend = cluster_sequence(model.row_coords);
            std::ostringstream s;
            write_dendrogram_json(s, dend);
            std::string newick, svg;
            if (!cluster_newick.empty()) newick = to_newick(dend, model.row_labels) + "\n";
            if (!cluster_svg.empty()) svg = render_dendrogram(dend, model.row_labels);
            emit(cluster_output, s.str());
            if (!newick.empty()) write_file_atomic(cluster_newick, newick);
            if (!svg.empty()) write_file_atomic(cluster_svg, svg);
        } else if (*cut_cmd) {
            auto in = open_input(cut_input);
            const Partition p = cut(read_dendrogram_json(in), cut_k);
            std::ostringstream s;
            s << "leaf,cluster\n";
            for (std::size_t i = 0; i < p.labels.size(); ++i) s << i + 1 << ',' << p.labels[i] << '\n';
            emit("", s.str());
        } else if (*cp_cmd) {
            auto in = open_input(cp_input);
            const ChangepointReport report = changepoints(read_dendrogram_json(in), cp_k);
            std::ostringstream s;
            s << "position,height\n";
            for (const auto& b : report.boundaries) s << b.position << ',' << format_double17(b.height) << '\n';
            emit("", s.str());
        } else if (*pipe_cmd) {
            PipelineConfig cfg;
            cfg.input = pipe_flags.input;
            cfg.ingest = pipe_flags.options();
            cfg.k = pipe_k;
            cfg.emit = parse_emit_flags(pipe_emit);
            std::tie(cfg.map_axis_x, cfg.map_axis_y) = parse_axes(pipe_axes);
            if (cfg.emit.any() && pipe_out.empty()) throw UsageError("--emit needs --out-dir");
            cfg.output_dir = pipe_out;
            const PipelineResult result = run_pipeline(cfg);
            print_warnings(result.warnings);
            emit("", result.summary);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return 0;
}
