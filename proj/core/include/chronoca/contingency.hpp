#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "chronoca/matrix.hpp"

namespace chronoca {

struct PrunedTable;

/// Observations (rows, in timeline order) crossed with attributes (columns).
///
/// A constructed table always satisfies: every count is finite and >= 0,
/// every row sum and column sum is > 0, and the label vectors match the
/// count matrix. Row order is significant and is never changed.
class ContingencyTable {
public:
    /// Validates counts, then drops zero rows and zero columns.
    /// Throws DomainError on a negative or non-finite count, on mismatched
    /// label/count shapes, or when nothing survives pruning.
    static PrunedTable prune(std::vector<std::string> row_labels,
                             std::vector<std::string> col_labels,
                             Matrix counts);

    /// Strict construction for already-clean data: throws DomainError if
    /// any row or column would need pruning. Missing labels default to
    /// "r1".. and "c1"..
    static ContingencyTable from_rows(const std::vector<std::vector<double>>& rows,
                                      std::vector<std::string> row_labels = {},
                                      std::vector<std::string> col_labels = {});

    std::size_t rows() const noexcept { return counts_.rows(); }
    std::size_t cols() const noexcept { return counts_.cols(); }

    const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
    const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }
    const Matrix& counts() const noexcept { return counts_; }
    double operator()(std::size_t i, std::size_t j) const { return counts_(i, j); }

    const std::vector<double>& row_totals() const noexcept { return row_totals_; }
    const std::vector<double>& col_totals() const noexcept { return col_totals_; }
    double grand_total() const noexcept { return grand_total_; }

    /// Header of the label column when read from or written to CSV.
    const std::string& row_header() const noexcept { return row_header_; }
    ContingencyTable with_row_header(std::string header) const;

    friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;

private:
    ContingencyTable() = default;

    std::string row_header_ = "obs";
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    Matrix counts_;
    std::vector<double> row_totals_;
    std::vector<double> col_totals_;
    double grand_total_ = 0.0;
};

/// A table together with the warnings produced while pruning it.
/// Warning texts look like "dropped row <label>" / "dropped column <label>".
struct PrunedTable {
    ContingencyTable table;
    std::vector<std::string> warnings;
};

/// Relative frequencies f_ij = k(i,j)/k with their marginals.
struct FrequencyView {
    Matrix f;
    std::vector<double> row_masses;
    std::vector<double> col_masses;
};

FrequencyView frequencies(const ContingencyTable& table);

/// Conditional distribution of a row (or column) with its mass.
struct Profile {
    std::vector<double> coords;
    double mass = 0.0;
};

Profile row_profile(const ContingencyTable& table, std::size_t i);
Profile col_profile(const ContingencyTable& table, std::size_t j);

// --- CSV tables -----------------------------------------------------------

/// Header row holds attribute names, first column holds observation labels.
/// Non-numeric cells raise ParseError carrying the line and column.
PrunedTable load_table(std::istream& in);

void write_table(std::ostream& out, const ContingencyTable& table);

// --- Event logs -----------------------------------------------------------

struct Date {
    int year = 0;
    unsigned month = 0;
    unsigned day = 0;

    friend auto operator<=>(const Date&, const Date&) = default;
};

/// Strict YYYY-MM-DD with calendar validation. Returns false on failure.
bool parse_iso_date(std::string_view text, Date& out);

struct EventRecord {
    Date date;
    std::vector<double> values;
};

struct EventLog {
    std::vector<std::string> attributes;
    std::vector<EventRecord> records;
};

/// Reads "date,<attr1>,<attr2>,..." CSV. Unparseable dates or values raise
/// ParseError identifying the record's line.
EventLog load_events(std::istream& in);

enum class TimeBin { month, year };

TimeBin parse_time_bin(std::string_view text);

/// Sums attributes per calendar bin from the earliest to the latest event.
/// Empty bins become zero rows and are pruned with a warning.
PrunedTable aggregate_events(const EventLog& log, TimeBin bin);

// --- Recoding -------------------------------------------------------------

/// 1 where count > threshold, else 0; pruning is re-applied.
PrunedTable binarize(const ContingencyTable& table, double threshold);

/// Sums every column whose total is below min_total into one appended
/// column named other_label. A single qualifying column is renamed and moved
/// to the end. Throws DomainError if other_label names a surviving column.
ContingencyTable merge_rare_columns(const ContingencyTable& table, double min_total,
                                   const std::string& other_label);

}  // namespace chronoca
