#include "chronoca/serialize.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "chronoca/csv.hpp"
#include "chronoca/errors.hpp"

namespace chronoca {

namespace {

using nlohmann::json;

std::string json_string(const std::string& s) { return json(s).dump(); }

void write_number_array(std::ostream& out, std::span<const double> values) {
    out << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << format_double17(values[i]);
    }
    out << ']';
}

void write_matrix(std::ostream& out, const Matrix& m) {
    out << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) out << ',';
        write_number_array(out, m.row(i));
    }
    out << ']';
}

void write_string_array(std::ostream& out, const std::vector<std::string>& values) {
    out << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << json_string(values[i]);
    }
    out << ']';
}

json parse_document(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), 0, 0);
    }
}

Matrix read_matrix(const json& value, std::size_t rows, std::size_t cols, const char* key) {
    if (!value.is_array() || value.size() != rows) {
        throw ParseError(std::string("'") + key + "' has the wrong number of rows", 0, 0);
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = value[i];
        if (!row.is_array() || row.size() != cols) {
            throw ParseError(std::string("'") + key + "' row " + std::to_string(i + 1) +
                                 " has the wrong length",
                             0, 0);
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (!row[j].is_number()) throw ParseError(std::string("'") + key + "' holds a non-number", 0, 0);
            m(i, j) = row[j].get<double>();
        }
    }
    return m;
}

bool needs_newick_quotes(const std::string& label) {
    if (label.empty()) return true;
    return label.find_first_of(" \t\r\n()[]':;,") != std::string::npos;
}

std::string newick_label(const std::string& label) {
    if (!needs_newick_quotes(label)) return label;
    std::string out = "'";
    for (char c : label) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

}  // namespace

std::string format_double17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_factors_json(std::ostream& out, const FactorModel& model) {
    out << "{\"eigenvalues\":";
    write_number_array(out, model.eigenvalues);
    out << ",\"total_inertia\":" << format_double17(model.total_inertia);
    out << ",\"row_coords\":";
    write_matrix(out, model.row_coords);
    out << ",\"col_coords\":";
    write_matrix(out, model.col_coords);
    out << ",\"row_labels\":";
    write_string_array(out, model.row_labels);
    out << ",\"col_labels\":";
    write_string_array(out, model.col_labels);
    out << "}\n";
    if (!out) throw IoError("failed writing factors JSON");
}

FactorModel read_factors_json(std::istream& in) {
    const json doc = parse_document(in);
    try {
        FactorModel model;
        model.eigenvalues = doc.at("eigenvalues").get<std::vector<double>>();
        model.total_inertia = doc.at("total_inertia").get<double>();
        model.row_labels = doc.at("row_labels").get<std::vector<std::string>>();
        model.col_labels = doc.at("col_labels").get<std::vector<std::string>>();
        const std::size_t n = model.eigenvalues.size();
        model.row_coords = read_matrix(doc.at("row_coords"), model.row_labels.size(), n, "row_coords");
        model.col_coords = read_matrix(doc.at("col_coords"), model.col_labels.size(), n, "col_coords");
        return model;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid factors document: ") + e.what(), 0, 0);
    }
}

void write_dendrogram_json(std::ostream& out, const Dendrogram& dend) {
    out << "{\"n_leaves\":" << dend.n_leaves << ",\"merges\":[";
    for (std::size_t t = 0; t < dend.merges.size(); ++t) {
        const Merge& m = dend.merges[t];
        if (t) out << ',';
        out << "{\"left\":" << m.left << ",\"right\":" << m.right
            << ",\"height\":" << format_double17(m.height) << ",\"span\":[" << m.span_start << ','
            << m.span_end << "]}";
    }
    out << "]}\n";
    if (!out) throw IoError("failed writing dendrogram JSON");
}

Dendrogram read_dendrogram_json(std::istream& in) {
    const json doc = parse_document(in);
    Dendrogram dend;
    try {
        dend.n_leaves = doc.at("n_leaves").get<std::size_t>();
        for (const json& m : doc.at("merges")) {
            const json& span = m.at("span");
            if (!span.is_array() || span.size() != 2) throw ParseError("span must be [start, end]", 0, 0);
            dend.merges.push_back(Merge{m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                                        m.at("height").get<double>(), span[0].get<std::size_t>(),
                                        span[1].get<std::size_t>()});
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid dendrogram document: ") + e.what(), 0, 0);
    }
    try {
        validate(dend);
    } catch (const UsageError& e) {
        throw ParseError(std::string("invalid dendrogram: ") + e.what(), 0, 0);
    }
    return dend;
}

std::string to_newick(const Dendrogram& dend, const std::vector<std::string>& labels) {
    const std::size_t n = dend.n_leaves;
    if (n == 0) throw UsageError("empty dendrogram");
    if (!labels.empty() && labels.size() != n) throw UsageError("label count does not match leaves");
    if (dend.merges.size() + 1 != n) throw UsageError("incomplete dendrogram");

    auto leaf_text = [&](std::size_t id) {
        return newick_label(labels.empty() ? std::to_string(id) : labels[id - 1]);
    };
    if (n == 1) return leaf_text(1) + ";";

    auto height_of = [&](std::size_t id) { return id <= n ? 0.0 : dend.merges[id - n - 1].height; };

    // Iterative walk; chains of 1e5 merges would overflow a recursive one.
    struct Frame {
        std::size_t id;
        double parent_height;
        int stage;
    };
    std::ostringstream out;
    std::vector<Frame> stack{{n + dend.merges.size(), height_of(n + dend.merges.size()), 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.id <= n) {
            out << leaf_text(f.id) << ':' << csv::format_number(f.parent_height);
            stack.pop_back();
            continue;
        }
        const Merge& m = dend.merges[f.id - n - 1];
        const bool is_root = stack.size() == 1;
        switch (f.stage++) {
            case 0:
                out << '(';
                stack.push_back({m.left, m.height, 0});
                break;
            case 1:
                out << ',';
                stack.push_back({m.right, m.height, 0});
                break;
            default: {
                out << ')';
                if (!is_root) out << ':' << csv::format_number(f.parent_height - m.height);
                stack.pop_back();
                break;
            }
        }
    }
    out << ';';
    return out.str();
}

}  // namespace chronoca
