#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chronoca/matrix.hpp"

namespace chronoca {

/// One agglomeration. Ids follow the usual convention: leaves are 1..n,
/// the cluster created by merge t (0-based) is n + 1 + t. span_start and
/// span_end are the 1-based inclusive leaf positions covered by the result.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t span_start = 0;
    std::size_t span_end = 0;

    friend bool operator==(const Merge&, const Merge&) = default;
};

/// Sequence-constrained hierarchy: every cluster is an interval of leaves,
/// heights are non-decreasing along merges, and the last merge spans
/// [1, n_leaves]. Heights are Euclidean (not squared) distances.
struct Dendrogram {
    std::size_t n_leaves = 0;
    std::vector<Merge> merges;

    friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

/// Contiguous k-cluster labelling, ids 1..k left to right.
struct Partition {
    std::vector<std::size_t> labels;
    std::size_t k = 0;

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// "Change between leaf position and position + 1" (1-based) at height.
struct Boundary {
    std::size_t position = 0;
    double height = 0.0;

    friend bool operator==(const Boundary&, const Boundary&) = default;
};

struct ChangepointReport {
    std::vector<Boundary> boundaries;
};

/// Flat n x dim point storage; row i is point i.
using PointSet = Matrix;

/// Contiguity-constrained complete-link agglomeration under the Euclidean
/// distance. At each step the adjacent pair with the smallest complete-link
/// distance merges; exact ties go to the leftmost pair.
///
/// Adjacent-pair distances are kept in a heap and refreshed only around
/// each merge: after merging A|B between neighbours L and R,
///   d(L, AB) = max(d(L, A), D(L, B)),   d(AB, R) = max(d(B, R), D(A, R)),
/// where D is the cross-set maximum, scanned over contiguous storage with a
/// bounding-box cut-off. Each leaf pair enters a scan at most once.
/// Throws UsageError for an empty point set.
Dendrogram cluster_sequence(const PointSet& points);

/// Same, for a list of equally sized vectors (UsageError on a mismatch).
Dendrogram cluster_sequence(std::span<const std::vector<double>> points);

/// Height of the lowest merge joining each pair of leaves (0 on the diagonal).
Matrix cophenetic(const Dendrogram& dend);

/// A triple where d(a, b) > max(d(a, via), d(via, b)). Indices are 1-based.
struct UltrametricViolation {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t via = 0;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Checks the strong triangle inequality with an absolute slack.
/// Throws UsageError for a non-square, asymmetric, negative or non-zero
/// diagonal matrix.
std::vector<UltrametricViolation> verify_ultrametric(const Matrix& m, double slack = 1e-12);

/// Undoes the last k - 1 merges. Throws UsageError unless 1 <= k <= n_leaves.
Partition cut(const Dendrogram& dend, std::size_t k);

/// Boundaries of cut(dend, k), each at the height of the merge spanning it.
ChangepointReport changepoints(const Dendrogram& dend, std::size_t k);

/// Positions p (1-based) where labels[p] != labels[p + 1].
std::vector<std::size_t> boundaries_from_partition(const Partition& p);

/// Checks run lengths and 1..k numbering; throws UsageError when invalid.
Partition make_partition(std::vector<std::size_t> labels);

/// Checks the structural invariants (ids, adjacency, spans, monotone
/// heights); throws UsageError describing the first violation.
void validate(const Dendrogram& dend);

}  // namespace chronoca
