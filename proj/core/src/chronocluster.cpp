#include "chronoca/chronocluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "chronoca/errors.hpp"

namespace chronoca {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Active clusters are intervals of leaves identified by their first leaf.
class SequenceAgglomerator {
public:
    explicit SequenceAgglomerator(const PointSet& points)
        : pts_(points),
          n_(points.rows()),
          dim_(points.cols()),
          end_(n_),
          id_(n_),
          next_(n_),
          prev_(n_),
          right_sq_(n_, 0.0),
          stamp_(n_, 0),
          box_min_(points.data().begin(), points.data().end()),
          box_max_(points.data().begin(), points.data().end()) {
        for (std::size_t s = 0; s < n_; ++s) {
            end_[s] = s;
            id_[s] = s + 1;
            next_[s] = s + 1 < n_ ? s + 1 : kNone;
            prev_[s] = s > 0 ? s - 1 : kNone;
        }
        for (std::size_t s = 0; s + 1 < n_; ++s) {
            right_sq_[s] = squared_distance(s, s + 1);
            push(s);
        }
    }

    Dendrogram run() {
        Dendrogram dend;
        dend.n_leaves = n_;
        dend.merges.reserve(n_ > 0 ? n_ - 1 : 0);

        for (std::size_t t = 0; t + 1 < n_; ++t) {
            const std::size_t a = pop_valid();
            const std::size_t b = next_[a];
            const std::size_t left = prev_[a];
            const std::size_t right = next_[b];

            dend.merges.push_back(Merge{id_[a], id_[b], std::sqrt(right_sq_[a]), a + 1, end_[b] + 1});

            // d(L, AB) = max(d(L, A), D(L, B)); d(AB, R) = max(d(B, R), D(A, R)).
            double left_sq = 0.0;
            double right_sq = 0.0;
            if (left != kNone) left_sq = cross_max(left, end_[left], b, end_[b], right_sq_[left], b);
            if (right != kNone) right_sq = cross_max(a, end_[a], right, end_[right], right_sq_[b], right);

            end_[a] = end_[b];
            id_[a] = n_ + 1 + t;
            next_[a] = right;
            if (right != kNone) prev_[right] = a;
            for (std::size_t d = 0; d < dim_; ++d) {
                box_min_[a * dim_ + d] = std::min(box_min_[a * dim_ + d], box_min_[b * dim_ + d]);
                box_max_[a * dim_ + d] = std::max(box_max_[a * dim_ + d], box_max_[b * dim_ + d]);
            }
            ++stamp_[b];
            next_[b] = kNone;
            prev_[b] = kNone;

            ++stamp_[a];
            if (right != kNone) {
                right_sq_[a] = right_sq;
                push(a);
            }
            if (left != kNone) {
                right_sq_[left] = left_sq;
                ++stamp_[left];
                push(left);
            }
        }
        return dend;
    }

private:
    struct Entry {
        double height;
        std::size_t start;
        std::size_t stamp;
    };
    struct Later {
        bool operator()(const Entry& x, const Entry& y) const {
            if (x.height != y.height) return x.height > y.height;
            return x.start > y.start;
        }
    };

    void push(std::size_t s) { heap_.push(Entry{std::sqrt(right_sq_[s]), s, stamp_[s]}); }

    std::size_t pop_valid() {
        for (;;) {
            const Entry e = heap_.top();
            heap_.pop();
            if (e.stamp == stamp_[e.start] && next_[e.start] != kNone) return e.start;
        }
    }

    double squared_distance(std::size_t i, std::size_t j) const {
        const auto x = pts_.row(i);
        const auto y = pts_.row(j);
        double sum = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) {
            const double diff = x[d] - y[d];
            sum += diff * diff;
        }
        return sum;
    }

    // max(floor, max squared distance between leaves [x0, x1] and [y0, y1]).
    // `box` names the cluster whose bounding box bounds the y side.
    double cross_max(std::size_t x0, std::size_t x1, std::size_t y0, std::size_t y1, double floor,
                     std::size_t box) const {
        const double* lo = box_min_.data() + box * dim_;
        const double* hi = box_max_.data() + box * dim_;
        double best = floor;
        for (std::size_t i = x0; i <= x1; ++i) {
            const auto x = pts_.row(i);
            double bound = 0.0;
            for (std::size_t d = 0; d < dim_; ++d) {
                const double u = x[d] - lo[d];
                const double v = x[d] - hi[d];
                bound += std::max(u * u, v * v);
            }
            if (bound <= best) continue;
            for (std::size_t j = y0; j <= y1; ++j) best = std::max(best, squared_distance(i, j));
        }
        return best;
    }

    const PointSet& pts_;
    std::size_t n_;
    std::size_t dim_;
    std::vector<std::size_t> end_;
    std::vector<std::size_t> id_;
    std::vector<std::size_t> next_;
    std::vector<std::size_t> prev_;
    std::vector<double> right_sq_;
    std::vector<std::size_t> stamp_;
    std::vector<double> box_min_;
    std::vector<double> box_max_;
    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
};

// Position (1-based) of the last leaf of each merge's left child.
std::vector<std::size_t> split_positions(const Dendrogram& dend) {
    const std::size_t n = dend.n_leaves;
    std::vector<std::size_t> span_end(n + dend.merges.size() + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) span_end[i] = i;
    std::vector<std::size_t> splits;
    splits.reserve(dend.merges.size());
    for (std::size_t t = 0; t < dend.merges.size(); ++t) {
        const Merge& m = dend.merges[t];
        splits.push_back(span_end[m.left]);
        span_end[n + 1 + t] = m.span_end;
    }
    return splits;
}

void check_k(const Dendrogram& dend, std::size_t k) {
    if (k < 1 || k > dend.n_leaves) {
        throw UsageError("k = " + std::to_string(k) + " outside [1, " +
                         std::to_string(dend.n_leaves) + "]");
    }
}

}  // namespace

Dendrogram cluster_sequence(const PointSet& points) {
    if (points.rows() == 0) throw UsageError("cluster_sequence needs at least one point");
    return SequenceAgglomerator(points).run();
}

Dendrogram cluster_sequence(std::span<const std::vector<double>> points) {
    if (points.empty()) throw UsageError("cluster_sequence needs at least one point");
    const std::size_t dim = points.front().size();
    PointSet flat(points.size(), dim);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim) {
            throw UsageError("point " + std::to_string(i + 1) + " has dimension " +
                             std::to_string(points[i].size()) + ", expected " + std::to_string(dim));
        }
        std::copy(points[i].begin(), points[i].end(), flat.row(i).begin());
    }
    return cluster_sequence(flat);
}

Matrix cophenetic(const Dendrogram& dend) {
    const std::size_t n = dend.n_leaves;
    Matrix c(n, n, 0.0);
    const auto splits = split_positions(dend);
    for (std::size_t t = 0; t < dend.merges.size(); ++t) {
        const Merge& m = dend.merges[t];
        for (std::size_t i = m.span_start; i <= splits[t]; ++i) {
            for (std::size_t j = splits[t] + 1; j <= m.span_end; ++j) {
                c(i - 1, j - 1) = m.height;
                c(j - 1, i - 1) = m.height;
            }
        }
    }
    return c;
}

std::vector<UltrametricViolation> verify_ultrametric(const Matrix& m, double slack) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw UsageError("ultrametric check needs a square matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (m(i, i) != 0.0) throw UsageError("ultrametric check needs a zero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (!(m(i, j) >= 0.0)) throw UsageError("ultrametric check needs non-negative entries");
            if (m(i, j) != m(j, i)) throw UsageError("ultrametric check needs a symmetric matrix");
        }
    }

    std::vector<UltrametricViolation> out;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t via = 0; via < n; ++via) {
                if (via == a || via == b) continue;
                const double rhs = std::max(m(a, via), m(via, b));
                if (m(a, b) > rhs + slack) out.push_back({a + 1, b + 1, via + 1, m(a, b), rhs});
            }
        }
    }
    return out;
}

Partition cut(const Dendrogram& dend, std::size_t k) {
    check_k(dend, k);
    const auto report = changepoints(dend, k);
    Partition p;
    p.k = k;
    p.labels.assign(dend.n_leaves, 0);
    std::size_t label = 1;
    auto next_boundary = report.boundaries.begin();
    for (std::size_t pos = 1; pos <= dend.n_leaves; ++pos) {
        p.labels[pos - 1] = label;
        if (next_boundary != report.boundaries.end() && next_boundary->position == pos) {
            ++label;
            ++next_boundary;
        }
    }
    return p;
}

ChangepointReport changepoints(const Dendrogram& dend, std::size_t k) {
    check_k(dend, k);
    if (dend.merges.size() + 1 != dend.n_leaves) throw UsageError("incomplete dendrogram");
    const auto splits = split_positions(dend);
    ChangepointReport report;
    for (std::size_t t = dend.merges.size() - (k - 1); t < dend.merges.size(); ++t) {
        report.boundaries.push_back({splits[t], dend.merges[t].height});
    }
    std::sort(report.boundaries.begin(), report.boundaries.end(),
              [](const Boundary& x, const Boundary& y) { return x.position < y.position; });
    return report;
}

std::vector<std::size_t> boundaries_from_partition(const Partition& p) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i + 1 < p.labels.size(); ++i) {
        if (p.labels[i] != p.labels[i + 1]) out.push_back(i + 1);
    }
    return out;
}

Partition make_partition(std::vector<std::size_t> labels) {
    if (labels.empty()) throw UsageError("partition needs at least one label");
    if (labels.front() != 1) throw UsageError("partition labels must start at 1");
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (labels[i] != labels[i - 1] && labels[i] != labels[i - 1] + 1) {
            throw UsageError("partition labels must form contiguous runs numbered 1..k (position " +
                             std::to_string(i + 1) + ")");
        }
    }
    Partition p;
    p.k = labels.back();
    p.labels = std::move(labels);
    return p;
}

void validate(const Dendrogram& dend) {
    const std::size_t n = dend.n_leaves;
    if (n == 0) throw UsageError("dendrogram has no leaves");
    if (dend.merges.size() != n - 1) {
        throw UsageError("dendrogram with " + std::to_string(n) + " leaves needs " +
                         std::to_string(n - 1) + " merges, found " + std::to_string(dend.merges.size()));
    }
    struct Span {
        std::size_t start = 0;
        std::size_t end = 0;
        bool active = false;
    };
    std::vector<Span> spans(2 * n);
    for (std::size_t i = 1; i <= n; ++i) spans[i] = {i, i, true};

    double previous = 0.0;
    for (std::size_t t = 0; t < dend.merges.size(); ++t) {
        const Merge& m = dend.merges[t];
        const std::string where = "merge " + std::to_string(t + 1) + ": ";
        const std::size_t limit = n + t;
        if (m.left == 0 || m.left > limit || m.right == 0 || m.right > limit ||
            !spans[m.left].active || !spans[m.right].active) {
            throw UsageError(where + "refers to an unknown or already merged cluster");
        }
        const Span& l = spans[m.left];
        const Span& r = spans[m.right];
        if (l.end + 1 != r.start) throw UsageError(where + "clusters are not adjacent");
        if (m.span_start != l.start || m.span_end != r.end) throw UsageError(where + "span mismatch");
        if (!std::isfinite(m.height) || m.height < 0.0) throw UsageError(where + "invalid height");
        if (m.height < previous) throw UsageError(where + "height decreases");
        previous = m.height;
        spans[m.left].active = false;
        spans[m.right].active = false;
        spans[n + 1 + t] = {m.span_start, m.span_end, true};
    }
}

}  // namespace chronoca
