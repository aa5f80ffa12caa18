#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "chronoca/contingency.hpp"
#include "chronoca/errors.hpp"
#include "support/generators.hpp"

namespace chronoca {
namespace {

PrunedTable load(const std::string& text) {
    std::istringstream in(text);
    return load_table(in);
}

std::vector<std::vector<double>> rows_of(const ContingencyTable& t) {
    std::vector<std::vector<double>> out(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) out[i].assign(t.counts().row(i).begin(), t.counts().row(i).end());
    return out;
}

double grand(const ContingencyTable& t) {
    double s = 0.0;
    for (double v : t.counts().data()) s += v;
    return s;
}

TEST(LoadTable, TranscribesCells) {
    const auto r = load("obs,a,b\ns1,1,0\ns2,0,1");
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_EQ(r.table.row_labels(), (std::vector<std::string>{"s1", "s2"}));
    EXPECT_EQ(r.table.col_labels(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(rows_of(r.table), (std::vector<std::vector<double>>{{1, 0}, {0, 1}}));
    EXPECT_EQ(r.table.row_header(), "obs");
}

TEST(LoadTable, DropsZeroRowWithWarning) {
    const auto r = load("obs,a,b\ns1,1,1\ns2,0,0");
    EXPECT_EQ(rows_of(r.table), (std::vector<std::vector<double>>{{1, 1}}));
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.warnings[0], "dropped row s2");
}

TEST(LoadTable, DropsZeroColumnWithWarning) {
    const auto r = load("obs,a,b,c\ns1,1,0,2\ns2,3,0,1\n");
    EXPECT_EQ(r.table.col_labels(), (std::vector<std::string>{"a", "c"}));
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.warnings[0], "dropped column b");
}

TEST(LoadTable, NegativeCountIsDomainError) {
    EXPECT_THROW(load("obs,a\ns1,-3"), DomainError);
    try {
        load("obs,a\ns1,-3");
    } catch (const ParseError&) {
        FAIL() << "negative count must not be reported as a parse error";
    } catch (const DomainError&) {
    }
}

TEST(LoadTable, NonNumericCellReportsPosition) {
    try {
        load("obs,a,b\ns1,1,2\ns2,3,x7\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 3u);
    }
}

TEST(LoadTable, RejectsRaggedRowsAndEmptyResults) {
    EXPECT_THROW(load("obs,a,b\ns1,1\n"), ParseError);
    EXPECT_THROW(load("obs,a\ns1,0\n"), DomainError);
    EXPECT_THROW(load(""), DomainError);
    EXPECT_THROW(load("obs,a,b\n"), DomainError);
    EXPECT_THROW(load("obs,a\ns1,nan\n"), ParseError);
}

TEST(LoadTable, AcceptsCrLfAndQuotedLabels) {
    const auto r = load("obs,\"x,y\",b\r\n\"row \"\"one\"\"\",1.5,2e1\r\n");
    EXPECT_EQ(r.table.col_labels()[0], "x,y");
    EXPECT_EQ(r.table.row_labels()[0], "row \"one\"");
    EXPECT_DOUBLE_EQ(r.table(0, 1), 20.0);
}

TEST(LoadTable, WriteThenLoadPreservesTable) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto rows = testing::random_count_rows(rng, 8, 6);
        for (auto& r : rows)
            for (auto& v : r) v *= 0.37;  // non-integers exercise the number format
        const auto t = ContingencyTable::from_rows(rows);
        std::stringstream s;
        write_table(s, t);
        const auto back = load_table(s);
        EXPECT_TRUE(back.warnings.empty());
        EXPECT_EQ(back.table, t);
    }
}

TEST(Frequencies, SumIdentitiesHold) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = ContingencyTable::from_rows(testing::random_count_rows(rng, 12, 10));
        const auto fv = frequencies(t);
        double total = 0.0, rsum = 0.0, csum = 0.0;
        for (double v : fv.f.data()) total += v;
        for (double v : fv.row_masses) rsum += v;
        for (double v : fv.col_masses) csum += v;
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_NEAR(rsum, 1.0, 1e-12);
        EXPECT_NEAR(csum, 1.0, 1e-12);
        for (std::size_t i = 0; i < t.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < t.cols(); ++j) s += fv.f(i, j);
            EXPECT_NEAR(s, fv.row_masses[i], 1e-15);
        }
        for (std::size_t j = 0; j < t.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < t.rows(); ++i) s += fv.f(i, j);
            EXPECT_NEAR(s, fv.col_masses[j], 1e-15);
        }
        for (std::size_t i = 0; i < t.rows(); ++i) {
            const auto p = row_profile(t, i);
            double s = 0.0;
            for (double v : p.coords) s += v;
            EXPECT_NEAR(s, 1.0, 1e-12);
            EXPECT_GT(p.mass, 0.0);
        }
    }
}

TEST(Profiles, OutOfRangeIsUsageError) {
    const auto t = ContingencyTable::from_rows({{1, 2}, {3, 4}});
    EXPECT_THROW(row_profile(t, 2), UsageError);
    EXPECT_THROW(col_profile(t, 5), UsageError);
    EXPECT_DOUBLE_EQ(col_profile(t, 0).coords[1], 0.75);
}

TEST(FromRows, RefusesZeroMargins) {
    EXPECT_THROW(ContingencyTable::from_rows({{1, 0}, {0, 0}}), DomainError);
    EXPECT_THROW(ContingencyTable::from_rows({}), DomainError);
}

// --- dates and events ---------------------------------------------------------

TEST(IsoDate, ValidatesCalendar) {
    Date d;
    EXPECT_TRUE(parse_iso_date("1988-02-29", d));
    EXPECT_EQ(d, (Date{1988, 2, 29}));
    EXPECT_FALSE(parse_iso_date("1989-02-29", d));
    EXPECT_FALSE(parse_iso_date("1988-13-01", d));
    EXPECT_FALSE(parse_iso_date("1988-1-01", d));
    EXPECT_FALSE(parse_iso_date("1988/01/01", d));
    EXPECT_FALSE(parse_iso_date("19a8-01-01", d));
}

PrunedTable aggregate(const std::string& csv, TimeBin bin) {
    std::istringstream in(csv);
    return aggregate_events(load_events(in), bin);
}

TEST(AggregateEvents, SumsPerMonth) {
    const auto r = aggregate("date,x\n1988-01-05,2\n1988-01-20,3\n1988-02-01,1\n", TimeBin::month);
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_EQ(r.table.row_labels(), (std::vector<std::string>{"1988-01", "1988-02"}));
    EXPECT_EQ(rows_of(r.table), (std::vector<std::vector<double>>{{5}, {1}}));
}

TEST(AggregateEvents, SingleEventIsSingleRow) {
    const auto r = aggregate("date,x,y\n2001-07-09,4,2.5\n", TimeBin::month);
    EXPECT_EQ(rows_of(r.table), (std::vector<std::vector<double>>{{4, 2.5}}));
    EXPECT_EQ(r.table.row_labels()[0], "2001-07");
}

TEST(AggregateEvents, EmptyBinPrunedWithWarning) {
    const auto r = aggregate("date,x\n1988-03-02,1\n1988-01-10,2\n", TimeBin::month);
    EXPECT_EQ(r.table.row_labels(), (std::vector<std::string>{"1988-01", "1988-03"}));
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.warnings[0], "dropped row 1988-02");
}

TEST(AggregateEvents, YearBinsAndChronologicalOrder) {
    const auto r = aggregate("date,x\n1990-06-01,1\n1988-12-31,2\n1990-01-01,3\n", TimeBin::year);
    EXPECT_EQ(r.table.row_labels(), (std::vector<std::string>{"1988", "1990"}));
    EXPECT_EQ(rows_of(r.table), (std::vector<std::vector<double>>{{2}, {4}}));
    EXPECT_EQ(r.warnings, (std::vector<std::string>{"dropped row 1989"}));
}

TEST(AggregateEvents, BadTimestampIdentifiesRecord) {
    try {
        aggregate("date,x\n1988-01-05,2\n1988-02-30,1\n", TimeBin::month);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("record 2"), std::string::npos);
    }
}

TEST(AggregateEvents, RejectsEmptyLogAndBadHeader) {
    EXPECT_THROW(aggregate("date,x\n", TimeBin::month), DomainError);
    EXPECT_THROW(aggregate("when,x\n1988-01-01,1\n", TimeBin::month), ParseError);
    EXPECT_THROW(aggregate("date,x\n1988-01-01,-1\n", TimeBin::month), DomainError);
    EXPECT_THROW(parse_time_bin("week"), UsageError);
}

TEST(AggregateEvents, ConservesGrandTotalAndOrder) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> day(0, 2000), val(0, 9);
    for (int trial = 0; trial < 20; ++trial) {
        std::string csv = "date,a,b,c\n";
        double total = 0.0;
        for (int e = 0; e < 60; ++e) {
            const int d = day(rng);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", 1990 + d / 336, (d / 28) % 12 + 1, d % 28 + 1);
            csv += buf;
            for (int j = 0; j < 3; ++j) {
                const int v = val(rng) + (j == 0 ? 1 : 0);
                total += v;
                csv += "," + std::to_string(v);
            }
            csv += '\n';
        }
        const auto r = aggregate(csv, TimeBin::month);
        EXPECT_NEAR(grand(r.table), total, 1e-9 * total);
        EXPECT_TRUE(std::is_sorted(r.table.row_labels().begin(), r.table.row_labels().end()));
        EXPECT_EQ(std::adjacent_find(r.table.row_labels().begin(), r.table.row_labels().end()),
                  r.table.row_labels().end());
    }
}

// --- recoding -----------------------------------------------------------------

TEST(Binarize, Examples) {
    auto r = binarize(ContingencyTable::from_rows({{2, 0}, {0, 5}}), 0.0);
    EXPECT_EQ(rows_of(r.table), (std::vector<std::vector<double>>{{1, 0}, {0, 1}}));
    r = binarize(ContingencyTable::from_rows({{1, 1}, {1, 1}}), 0.0);
    EXPECT_EQ(rows_of(r.table), (std::vector<std::vector<double>>{{1, 1}, {1, 1}}));
    r = binarize(ContingencyTable::from_rows({{0.4, 3}, {2, 0.1}}), 1.0);
    EXPECT_EQ(rows_of(r.table), (std::vector<std::vector<double>>{{0, 1}, {1, 0}}));
}

TEST(Binarize, PrunesRowsThatFallBelowThreshold) {
    const auto t = ContingencyTable::from_rows({{5, 4}, {0.5, 0.2}, {1, 9}}, {"x", "y", "z"});
    const auto r = binarize(t, 1.0);
    EXPECT_EQ(r.table.row_labels(), (std::vector<std::string>{"x", "z"}));
    EXPECT_EQ(r.warnings, (std::vector<std::string>{"dropped row y"}));
    EXPECT_THROW(binarize(t, -1.0), UsageError);
}

TEST(MergeRare, MergesSmallColumnsIntoOther) {
    const auto t = ContingencyTable::from_rows({{20, 1, 0, 1}, {16, 0, 1, 0}}, {}, {"rick", "a", "b", "c"});
    const auto m = merge_rare_columns(t, 2.0, "other");
    EXPECT_EQ(m.col_labels(), (std::vector<std::string>{"rick", "other"}));
    EXPECT_DOUBLE_EQ(m.col_totals()[0], 36.0);
    EXPECT_DOUBLE_EQ(m.col_totals()[1], 3.0);
    EXPECT_DOUBLE_EQ(m.grand_total(), t.grand_total());
}

TEST(MergeRare, ZeroThresholdLeavesTableUnchanged) {
    const auto t = ContingencyTable::from_rows({{20, 1}, {16, 2}});
    EXPECT_EQ(merge_rare_columns(t, 0.0, "other"), t);
}

TEST(MergeRare, AllRareGivesRowSums) {
    const auto t = ContingencyTable::from_rows({{1, 2, 3}, {4, 5, 6}});
    const auto m = merge_rare_columns(t, 1000.0, "other");
    ASSERT_EQ(m.cols(), 1u);
    EXPECT_DOUBLE_EQ(m(0, 0), 6.0);
    EXPECT_DOUBLE_EQ(m(1, 0), 15.0);
}

TEST(MergeRare, SingleRareColumnIsRenamedNotDuplicated) {
    const auto t = ContingencyTable::from_rows({{10, 1, 7}, {10, 0, 7}}, {}, {"a", "b", "c"});
    const auto m = merge_rare_columns(t, 2.0, "misc");
    EXPECT_EQ(m.col_labels(), (std::vector<std::string>{"a", "c", "misc"}));
    EXPECT_DOUBLE_EQ(m(0, 2), 1.0);
}

TEST(MergeRare, LabelCollisionIsDomainError) {
    const auto t = ContingencyTable::from_rows({{10, 1}, {10, 0.5}}, {}, {"other", "b"});
    EXPECT_THROW(merge_rare_columns(t, 2.0, "other"), DomainError);
    EXPECT_THROW(merge_rare_columns(t, -1.0, "x"), UsageError);
}

TEST(MergeRare, ConservesTotalAndRowOrder) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> thr(0.0, 80.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = ContingencyTable::from_rows(testing::random_count_rows(rng, 12, 10));
        const auto m = merge_rare_columns(t, thr(rng), "zz-other");
        EXPECT_NEAR(grand(m), grand(t), 1e-9 * grand(t));
        EXPECT_EQ(m.row_labels(), t.row_labels());
    }
}

}  // namespace
}  // namespace chronoca
