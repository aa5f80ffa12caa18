#include "chronoca/contingency.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <utility>

#include "chronoca/csv.hpp"
#include "chronoca/errors.hpp"

namespace chronoca {

namespace {

std::vector<std::string> default_labels(char prefix, std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

}  // namespace

PrunedTable ContingencyTable::prune(std::vector<std::string> row_labels,
                                    std::vector<std::string> col_labels, Matrix counts) {
    if (row_labels.size() != counts.rows() || col_labels.size() != counts.cols()) {
        throw DomainError("label count does not match the count matrix shape");
    }
    for (std::size_t i = 0; i < counts.rows(); ++i) {
        for (std::size_t j = 0; j < counts.cols(); ++j) {
            const double v = counts(i, j);
            if (!std::isfinite(v)) {
                throw DomainError("non-finite count at row '" + row_labels[i] + "', column '" +
                                  col_labels[j] + "'");
            }
            if (v < 0.0) {
                throw DomainError("negative count at row '" + row_labels[i] + "', column '" +
                                  col_labels[j] + "'");
            }
        }
    }

    std::vector<double> row_sum(counts.rows(), 0.0);
    std::vector<double> col_sum(counts.cols(), 0.0);
    for (std::size_t i = 0; i < counts.rows(); ++i) {
        for (std::size_t j = 0; j < counts.cols(); ++j) {
            row_sum[i] += counts(i, j);
            col_sum[j] += counts(i, j);
        }
    }

    std::vector<std::string> warnings;
    std::vector<std::size_t> keep_rows;
    std::vector<std::size_t> keep_cols;
    for (std::size_t i = 0; i < row_sum.size(); ++i) {
        if (row_sum[i] > 0.0) {
            keep_rows.push_back(i);
        } else {
            warnings.push_back("dropped row " + row_labels[i]);
        }
    }
    for (std::size_t j = 0; j < col_sum.size(); ++j) {
        if (col_sum[j] > 0.0) {
            keep_cols.push_back(j);
        } else {
            warnings.push_back("dropped column " + col_labels[j]);
        }
    }
    if (keep_rows.empty() || keep_cols.empty()) {
        throw DomainError("table is empty after dropping zero rows and columns");
    }

    ContingencyTable t;
    t.counts_ = Matrix(keep_rows.size(), keep_cols.size());
    t.row_labels_.reserve(keep_rows.size());
    t.col_labels_.reserve(keep_cols.size());
    for (std::size_t i : keep_rows) t.row_labels_.push_back(std::move(row_labels[i]));
    for (std::size_t j : keep_cols) t.col_labels_.push_back(std::move(col_labels[j]));
    for (std::size_t a = 0; a < keep_rows.size(); ++a) {
        for (std::size_t b = 0; b < keep_cols.size(); ++b) {
            t.counts_(a, b) = counts(keep_rows[a], keep_cols[b]);
        }
    }

    // Totals recomputed on the pruned matrix; dropping zero lines leaves them unchanged.
    t.row_totals_.assign(t.rows(), 0.0);
    t.col_totals_.assign(t.cols(), 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.cols(); ++j) {
            t.row_totals_[i] += t.counts_(i, j);
            t.col_totals_[j] += t.counts_(i, j);
        }
    }
    t.grand_total_ = 0.0;
    for (double v : t.row_totals_) t.grand_total_ += v;

    return {std::move(t), std::move(warnings)};
}

ContingencyTable ContingencyTable::from_rows(const std::vector<std::vector<double>>& rows,
                                             std::vector<std::string> row_labels,
                                             std::vector<std::string> col_labels) {
    const std::size_t n = rows.size();
    const std::size_t m = n == 0 ? 0 : rows.front().size();
    if (n == 0 || m == 0) throw DomainError("empty table");
    Matrix counts(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m) throw DomainError("ragged rows in table literal");
        std::copy(rows[i].begin(), rows[i].end(), counts.row(i).begin());
    }
    if (row_labels.empty()) row_labels = default_labels('r', n);
    if (col_labels.empty()) col_labels = default_labels('c', m);

    auto pruned = prune(std::move(row_labels), std::move(col_labels), std::move(counts));
    if (!pruned.warnings.empty()) {
        throw DomainError("table has zero margins (" + pruned.warnings.front() + ")");
    }
    return std::move(pruned.table);
}

ContingencyTable ContingencyTable::with_row_header(std::string header) const {
    ContingencyTable copy = *this;
    copy.row_header_ = std::move(header);
    return copy;
}

FrequencyView frequencies(const ContingencyTable& table) {
    const double k = table.grand_total();
    FrequencyView view;
    view.f = Matrix(table.rows(), table.cols());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.cols(); ++j) view.f(i, j) = table(i, j) / k;
    }
    view.row_masses.reserve(table.rows());
    view.col_masses.reserve(table.cols());
    for (double v : table.row_totals()) view.row_masses.push_back(v / k);
    for (double v : table.col_totals()) view.col_masses.push_back(v / k);
    return view;
}

Profile row_profile(const ContingencyTable& table, std::size_t i) {
    if (i >= table.rows()) throw UsageError("row index out of range");
    Profile p;
    const double total = table.row_totals()[i];
    p.mass = total / table.grand_total();
    p.coords.reserve(table.cols());
    for (std::size_t j = 0; j < table.cols(); ++j) p.coords.push_back(table(i, j) / total);
    return p;
}

Profile col_profile(const ContingencyTable& table, std::size_t j) {
    if (j >= table.cols()) throw UsageError("column index out of range");
    Profile p;
    const double total = table.col_totals()[j];
    p.mass = total / table.grand_total();
    p.coords.reserve(table.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) p.coords.push_back(table(i, j) / total);
    return p;
}

// --- CSV tables -----------------------------------------------------------

PrunedTable load_table(std::istream& in) {
    auto records = csv::read(in);
    if (records.empty()) throw DomainError("empty table: no header row");

    const auto& header = records.front();
    if (header.fields.size() < 2) {
        throw ParseError("header needs a label column and at least one attribute", header.line, 0);
    }
    const std::size_t m = header.fields.size() - 1;
    const std::size_t n = records.size() - 1;
    if (n == 0) throw DomainError("empty table: no observation rows");

    std::vector<std::string> col_labels(header.fields.begin() + 1, header.fields.end());
    std::vector<std::string> row_labels;
    row_labels.reserve(n);
    Matrix counts(n, m);

    for (std::size_t r = 0; r < n; ++r) {
        const auto& rec = records[r + 1];
        if (rec.fields.size() != m + 1) {
            throw ParseError("expected " + std::to_string(m + 1) + " fields, found " +
                                 std::to_string(rec.fields.size()),
                             rec.line, 0);
        }
        row_labels.push_back(rec.fields[0]);
        for (std::size_t j = 0; j < m; ++j) {
            double v = 0.0;
            if (!csv::parse_number(rec.fields[j + 1], v)) {
                throw ParseError("non-numeric cell '" + rec.fields[j + 1] + "'", rec.line, j + 2);
            }
            counts(r, j) = v;
        }
    }

    auto pruned = ContingencyTable::prune(std::move(row_labels), std::move(col_labels),
                                          std::move(counts));
    pruned.table = pruned.table.with_row_header(header.fields.front());
    return pruned;
}

void write_table(std::ostream& out, const ContingencyTable& table) {
    out << csv::escape(table.row_header());
    for (const auto& c : table.col_labels()) out << ',' << csv::escape(c);
    out << '\n';
    for (std::size_t i = 0; i < table.rows(); ++i) {
        out << csv::escape(table.row_labels()[i]);
        for (std::size_t j = 0; j < table.cols(); ++j) out << ',' << csv::format_number(table(i, j));
        out << '\n';
    }
    if (!out) throw IoError("failed writing table");
}

// --- Event logs -----------------------------------------------------------

bool parse_iso_date(std::string_view text, Date& out) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
    auto digits = [&](std::size_t pos, std::size_t len, int& value) {
        const char* first = text.data() + pos;
        const char* last = first + len;
        if (!std::all_of(first, last, [](char c) { return c >= '0' && c <= '9'; })) return false;
        auto [ptr, ec] = std::from_chars(first, last, value);
        return ec == std::errc{} && ptr == last;
    };
    int y = 0, m = 0, d = 0;
    if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) return false;
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return false;
    out = Date{y, static_cast<unsigned>(m), static_cast<unsigned>(d)};
    return true;
}

EventLog load_events(std::istream& in) {
    auto records = csv::read(in);
    if (records.empty()) throw DomainError("empty event log: no header row");

    const auto& header = records.front();
    if (header.fields.size() < 2 || header.fields.front() != "date") {
        throw ParseError("event log header must be \"date,<attr1>,...\"", header.line, 1);
    }

    EventLog log;
    log.attributes.assign(header.fields.begin() + 1, header.fields.end());
    const std::size_t m = log.attributes.size();
    log.records.reserve(records.size() - 1);

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = "record " + std::to_string(r);
        if (rec.fields.size() != m + 1) {
            throw ParseError(where + ": expected " + std::to_string(m + 1) + " fields, found " +
                                 std::to_string(rec.fields.size()),
                             rec.line, 0);
        }
        EventRecord ev;
        if (!parse_iso_date(rec.fields[0], ev.date)) {
            throw ParseError(where + ": unparseable date '" + rec.fields[0] + "'", rec.line, 1);
        }
        ev.values.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            double v = 0.0;
            if (!csv::parse_number(rec.fields[j + 1], v)) {
                throw ParseError(where + ": non-numeric value '" + rec.fields[j + 1] + "'",
                                 rec.line, j + 2);
            }
            if (v < 0.0) {
                throw DomainError(where + " (line " + std::to_string(rec.line) +
                                  "): negative value for '" + log.attributes[j] + "'");
            }
            ev.values.push_back(v);
        }
        log.records.push_back(std::move(ev));
    }
    return log;
}

TimeBin parse_time_bin(std::string_view text) {
    if (text == "month") return TimeBin::month;
    if (text == "year") return TimeBin::year;
    throw UsageError("unknown time bin '" + std::string(text) + "' (expected month or year)");
}

PrunedTable aggregate_events(const EventLog& log, TimeBin bin) {
    if (log.records.empty()) throw DomainError("empty event log");
    const std::size_t m = log.attributes.size();

    auto bin_index = [bin](const Date& d) -> long {
        return bin == TimeBin::month ? static_cast<long>(d.year) * 12 + (d.month - 1)
                                     : static_cast<long>(d.year);
    };

    long first = bin_index(log.records.front().date);
    long last = first;
    for (const auto& ev : log.records) {
        if (ev.values.size() != m) throw DomainError("event value vector length differs from header");
        first = std::min(first, bin_index(ev.date));
        last = std::max(last, bin_index(ev.date));
    }

    const auto n = static_cast<std::size_t>(last - first + 1);
    Matrix counts(n, m);
    for (const auto& ev : log.records) {
        auto row = counts.row(static_cast<std::size_t>(bin_index(ev.date) - first));
        for (std::size_t j = 0; j < m; ++j) row[j] += ev.values[j];
    }

    std::vector<std::string> labels;
    labels.reserve(n);
    for (long b = first; b <= last; ++b) {
        char buf[32];
        if (bin == TimeBin::month) {
            std::snprintf(buf, sizeof buf, "%04ld-%02ld", b / 12, b % 12 + 1);
        } else {
            std::snprintf(buf, sizeof buf, "%04ld", b);
        }
        labels.emplace_back(buf);
    }

    auto pruned = ContingencyTable::prune(std::move(labels), log.attributes, std::move(counts));
    pruned.table = pruned.table.with_row_header(bin == TimeBin::month ? "month" : "year");
    return pruned;
}

// --- Recoding -------------------------------------------------------------

PrunedTable binarize(const ContingencyTable& table, double threshold) {
    if (!(threshold >= 0.0)) throw UsageError("binarize threshold must be >= 0");
    Matrix counts(table.rows(), table.cols());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.cols(); ++j) {
            counts(i, j) = table(i, j) > threshold ? 1.0 : 0.0;
        }
    }
    auto pruned = ContingencyTable::prune(table.row_labels(), table.col_labels(), std::move(counts));
    pruned.table = pruned.table.with_row_header(table.row_header());
    return pruned;
}

ContingencyTable merge_rare_columns(const ContingencyTable& table, double min_total,
                                   const std::string& other_label) {
    if (!(min_total >= 0.0)) throw UsageError("merge-rare minimum total must be >= 0");

    std::vector<std::size_t> keep;
    std::vector<std::size_t> rare;
    for (std::size_t j = 0; j < table.cols(); ++j) {
        (table.col_totals()[j] < min_total ? rare : keep).push_back(j);
    }
    if (rare.empty()) return table;

    std::vector<std::string> labels;
    for (std::size_t j : keep) {
        if (table.col_labels()[j] == other_label) {
            throw DomainError("merge label '" + other_label + "' collides with an existing column");
        }
        labels.push_back(table.col_labels()[j]);
    }
    labels.push_back(other_label);

    Matrix counts(table.rows(), keep.size() + 1);
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t a = 0; a < keep.size(); ++a) counts(i, a) = table(i, keep[a]);
        double merged = 0.0;
        for (std::size_t j : rare) merged += table(i, j);
        counts(i, keep.size()) = merged;
    }

    auto pruned = ContingencyTable::prune(table.row_labels(), std::move(labels), std::move(counts));
    return pruned.table.with_row_header(table.row_header());
}

}  // namespace chronoca
