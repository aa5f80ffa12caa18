#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chronoca/errors.hpp"
#include "chronoca/pipeline.hpp"
#include "support/generators.hpp"

#ifndef CHRONOCA_CLI_PATH
#error "CHRONOCA_CLI_PATH must point at the built CLI"
#endif

namespace chronoca {
namespace {

namespace fs = std::filesystem;

class PipelineTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("chronoca_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    // Runs the CLI, capturing stdout and stderr into files.
    int cli(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
        const fs::path o = dir_ / "stdout.txt", e = dir_ / "stderr.txt";
        const std::string cmd = std::string("\"") + CHRONOCA_CLI_PATH + "\" " + args + " >\"" + o.string() +
                                "\" 2>\"" + e.string() + "\"";
        const int status = std::system(cmd.c_str());
        if (out) *out = slurp(o);
        if (err) *err = slurp(e);
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path dir_;
};

// Two-column rows with equal masses: the single factor is an affine image
// of the first-column share 0.10, 0.11, 0.20, 0.21, i.e. of (0, 1, 10, 11).
const char* kLineTable = "obs,a,b\nr1,10,90\nr2,11,89\nr3,20,80\nr4,21,79\n";

TEST_F(PipelineTest, LineFixtureReportsBoundaryBetweenRowsTwoAndThree) {
    std::istringstream in(kLineTable);
    const auto loaded = ingest(in, {});
    const auto a = analyze_sequence(loaded.table, 2);
    ASSERT_EQ(a.model.n_factors(), 1u);
    ASSERT_TRUE(a.report);
    ASSERT_EQ(a.report->boundaries.size(), 1u);
    EXPECT_EQ(a.report->boundaries[0].position, 2u);
    const std::string text = summary_text(a);
    EXPECT_NE(text.find("between rows 2 and 3"), std::string::npos) << text;
    EXPECT_NE(text.find("explained by 1 factor 100.0%"), std::string::npos) << text;
}

TEST_F(PipelineTest, IndependenceTableSkipsClustering) {
    PipelineConfig cfg;
    cfg.input = write("indep.csv", "obs,a,b\nr1,1,2\nr2,2,4\nr3,3,6\n");
    cfg.k = 2;
    cfg.output_dir = dir_ / "out";
    cfg.emit = parse_emit_flags("factors-json,dendrogram-json,report-text");
    const auto result = run_pipeline(cfg);
    EXPECT_NE(result.summary.find("total inertia 0; no factors; clustering skipped"), std::string::npos);
    EXPECT_FALSE(result.analysis.dendrogram);
    EXPECT_TRUE(fs::exists(dir_ / "out" / "factors.json"));
    EXPECT_FALSE(fs::exists(dir_ / "out" / "dendrogram.json"));

    std::string out;
    EXPECT_EQ(cli("pipeline --input \"" + cfg.input.string() + "\" --k 2", &out), 0);
    EXPECT_NE(out.find("total inertia 0; no factors; clustering skipped"), std::string::npos);
}

TEST_F(PipelineTest, SyntheticMonthsRecoverPlantedBoundaries) {
    const auto fx = testing::planted_regimes(1);
    PipelineConfig cfg;
    cfg.input = write("events.csv", fx.events_csv);
    cfg.ingest.kind = InputKind::events;
    cfg.k = 8;
    cfg.output_dir = dir_ / "out";
    cfg.emit = parse_emit_flags("all");
    const auto result = run_pipeline(cfg);
    ASSERT_TRUE(result.analysis.report);
    std::vector<std::size_t> positions;
    for (const auto& b : result.analysis.report->boundaries) positions.push_back(b.position);
    EXPECT_EQ(positions, testing::planted_boundaries());
    EXPECT_EQ(result.analysis.table.rows(), 204u);
    EXPECT_EQ(result.analysis.table.row_labels().front(), "1988-01");
    EXPECT_EQ(result.analysis.table.row_labels().back(), "2004-12");
    EXPECT_EQ(result.written.size(), 6u);
    for (const char* f : {"factors.json", "dendrogram.json", "tree.nwk", "factor_map.svg", "dendrogram.svg", "report.txt"}) {
        EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
    }
    std::size_t boundary_lines = 0;
    std::istringstream lines(result.summary);
    for (std::string line; std::getline(lines, line);) boundary_lines += line.rfind("boundary between rows", 0) == 0;
    EXPECT_EQ(boundary_lines, 7u);
}

TEST_F(PipelineTest, RepeatedRunsAreByteIdentical) {
    const auto fx = testing::planted_regimes(2, 60, 20);
    PipelineConfig cfg;
    cfg.input = write("events.csv", fx.events_csv);
    cfg.ingest.kind = InputKind::events;
    cfg.k = 4;
    cfg.emit = parse_emit_flags("all");
    cfg.output_dir = dir_ / "run1";
    run_pipeline(cfg);
    cfg.output_dir = dir_ / "run2";
    run_pipeline(cfg);
    for (const auto& entry : fs::directory_iterator(dir_ / "run1")) {
        EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "run2" / entry.path().filename())) << entry.path();
    }
}

TEST_F(PipelineTest, FailureLeavesNoFiles) {
    PipelineConfig cfg;
    cfg.input = write("line.csv", kLineTable);
    cfg.k = 2;
    cfg.output_dir = dir_ / "out";
    cfg.emit = parse_emit_flags("factors-json,factor-map-svg");  // one factor: map impossible
    EXPECT_THROW(run_pipeline(cfg), UsageError);
    EXPECT_TRUE(!fs::exists(cfg.output_dir) || fs::is_empty(cfg.output_dir));
}

TEST_F(PipelineTest, EmitAllSkipsImpossibleMapWithWarning) {
    PipelineConfig cfg;
    cfg.input = write("line.csv", kLineTable);
    cfg.k = 2;
    cfg.output_dir = dir_ / "out";
    cfg.emit = parse_emit_flags("all");
    const auto result = run_pipeline(cfg);
    EXPECT_EQ(result.written.size(), 5u);
    EXPECT_FALSE(fs::exists(cfg.output_dir / "factor_map.svg"));
    EXPECT_EQ(result.warnings, (std::vector<std::string>{"fewer than 2 factors: factor map not written"}));
    for (const auto& entry : fs::directory_iterator(cfg.output_dir)) {
        EXPECT_NE(entry.path().extension(), ".tmp");
    }
}

TEST_F(PipelineTest, ConfigErrors) {
    EXPECT_THROW(parse_emit_flags("factors-json,pdf"), UsageError);
    EXPECT_THROW(parse_input_kind("xml"), UsageError);
    std::istringstream in(kLineTable);
    const auto loaded = ingest(in, {});
    EXPECT_THROW(analyze_sequence(loaded.table, 0), UsageError);
    EXPECT_THROW(analyze_sequence(loaded.table, 5), UsageError);
    PipelineConfig cfg;
    cfg.input = dir_ / "missing.csv";
    EXPECT_THROW(run_pipeline(cfg), IoError);
}

TEST_F(PipelineTest, IngestAppliesRecodingInOrder) {
    std::istringstream in("obs,a,b,c,d\nr1,5,0,1,0\nr2,0,3,0,0.5\nr3,2,2,0,0\n");
    IngestOptions opt;
    opt.binarize_threshold = 0.0;
    opt.merge_rare_min_total = 2.0;
    opt.other_label = "rest";
    const auto r = ingest(in, opt);
    EXPECT_EQ(r.table.col_labels(), (std::vector<std::string>{"a", "b", "rest"}));
    EXPECT_EQ(r.table(0, 2), 1.0);
    EXPECT_EQ(r.table(1, 2), 1.0);
}

// --- command line ---------------------------------------------------------------

TEST_F(PipelineTest, CliExitCodes) {
    const fs::path good = write("line.csv", kLineTable);
    const fs::path neg = write("neg.csv", "obs,a\ns1,-3\n");
    const fs::path junk = write("junk.csv", "obs,a,b\ns1,1,zz\n");
    std::string out, err;

    EXPECT_EQ(cli("pipeline --input \"" + good.string() + "\" --k 2", &out, &err), 0) << err;
    EXPECT_NE(out.find("boundary between rows 2 and 3"), std::string::npos) << out;

    EXPECT_EQ(cli("ingest --input \"" + neg.string() + "\"", &out, &err), 1);
    EXPECT_NE(err.find("negative"), std::string::npos);
    EXPECT_EQ(cli("ingest --input \"" + junk.string() + "\"", &out, &err), 1);
    EXPECT_NE(err.find("line 2, column 3"), std::string::npos) << err;
    EXPECT_EQ(cli("pipeline --input \"" + good.string() + "\" --k 9"), 2);
    EXPECT_EQ(cli("pipeline --input \"" + good.string() + "\" --bogus"), 2);
    EXPECT_EQ(cli("frobnicate"), 2);
    EXPECT_EQ(cli("ingest --input \"" + (dir_ / "nope.csv").string() + "\""), 3);
    EXPECT_EQ(cli("pipeline --input \"" + good.string() + "\" --k 2 --emit report-text --out-dir /proc/forbidden"), 3);
}

TEST_F(PipelineTest, CliIngestWarnsOnDroppedRows) {
    const fs::path raw = write("raw.csv", "obs,a,b\ns1,1,1\ns2,0,0\n");
    std::string out, err;
    EXPECT_EQ(cli("ingest --input \"" + raw.string() + "\"", &out, &err), 0);
    EXPECT_EQ(err, "WARN dropped row s2\n");
    EXPECT_EQ(out, "obs,a,b\ns1,1,1\n");

    const fs::path ev = write("ev.csv", "date,x\n1988-01-02,1\n1988-03-04,2\n");
    EXPECT_EQ(cli("ingest --kind events --bin month --input \"" + ev.string() + "\"", &out, &err), 0);
    EXPECT_EQ(err, "WARN dropped row 1988-02\n");
    EXPECT_EQ(out, "month,x\n1988-01,1\n1988-03,2\n");
}

TEST_F(PipelineTest, CliStagesChainThroughFiles) {
    const auto fx = testing::planted_regimes(3, 60, 12);
    const fs::path ev = write("ev.csv", fx.events_csv);
    const std::string table = (dir_ / "table.csv").string();
    const std::string factors = (dir_ / "factors.json").string();
    const std::string dend = (dir_ / "dend.json").string();
    std::string out, err;

    ASSERT_EQ(cli("ingest --kind events --input \"" + ev.string() + "\" --output \"" + table + "\"", &out, &err), 0) << err;
    ASSERT_EQ(cli("ca --input \"" + table + "\" --output \"" + factors + "\" --svg \"" + (dir_ / "map.svg").string() + "\""),
              0);
    ASSERT_EQ(cli("cluster --input \"" + factors + "\" --output \"" + dend + "\" --newick \"" +
                  (dir_ / "t.nwk").string() + "\" --svg \"" + (dir_ / "d.svg").string() + "\""),
              0);
    ASSERT_EQ(cli("changepoints --input \"" + dend + "\" --k 8", &out), 0);
    std::istringstream lines(out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "position,height");
    std::vector<std::size_t> positions;
    while (std::getline(lines, line)) positions.push_back(std::stoul(line.substr(0, line.find(','))));
    // 60 months cover only the first four planted cuts.
    EXPECT_EQ(std::vector<std::size_t>(positions.begin(), positions.begin() + 4),
              (std::vector<std::size_t>{4, 5, 20, 21}));

    ASSERT_EQ(cli("cut --input \"" + dend + "\" --k 3", &out), 0);
    EXPECT_EQ(out.substr(0, 13), "leaf,cluster\n");
    EXPECT_TRUE(fs::exists(dir_ / "map.svg"));
    EXPECT_TRUE(fs::exists(dir_ / "t.nwk"));
    EXPECT_EQ(cli("cut --input \"" + dend + "\" --k 0"), 2);
}

}  // namespace
}  // namespace chronoca
