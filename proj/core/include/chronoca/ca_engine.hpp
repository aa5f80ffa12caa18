#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chronoca/contingency.hpp"
#include "chronoca/matrix.hpp"

namespace chronoca {

/// Principal-axis decomposition of a contingency table under the chi-squared
/// metric.
///
/// eigenvalues are non-increasing and only non-null factors are kept, so
/// n_factors() <= min(rows - 1, cols - 1). row_coords is rows x N holding
/// F_a(i); col_coords is cols x N holding G_a(j). Both clouds are centred
/// on their mass-weighted barycentres and sum_i f_i F_a(i)^2 = eigenvalue a.
struct FactorModel {
    std::vector<double> eigenvalues;
    Matrix row_coords;
    Matrix col_coords;
    std::vector<double> row_masses;
    std::vector<double> col_masses;
    double total_inertia = 0.0;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;

    std::size_t n_factors() const noexcept { return eigenvalues.size(); }
};

/// Sum over cells of (f_ij - f_i f_j)^2 / (f_i f_j), evaluated directly.
double total_inertia(const ContingencyTable& table);

/// Squared chi-squared distance between the profiles of rows i and i2,
/// sum_j (f_ij/f_i - f_i2j/f_i2)^2 / f_j.
double chi2_sq_distance(const ContingencyTable& table, std::size_t i, std::size_t i2);

/// Thresholds applied to the singular values of the standardized residuals.
struct AnalyzeOptions {
    /// A factor is null when sqrt(lambda) < relative_tolerance * sqrt(lambda_1).
    double relative_tolerance = 1e-10;
    /// All factors are null when lambda_1 < this.
    double absolute_floor = 1e-20;
};

/// Decomposes the standardized residual matrix (f_ij - f_i f_j)/sqrt(f_i f_j)
/// by SVD. Per factor, signs are set so the row coordinate of largest
/// magnitude is positive (earliest row wins a tie).
/// Throws DomainError("degenerate cloud") for fewer than 2 rows or columns.
FactorModel analyze(const ContingencyTable& table, const AnalyzeOptions& options = {});

/// Share of total inertia carried by the first top_k factors.
/// Throws UsageError when top_k > n_factors().
double explained_ratio(const FactorModel& model, std::size_t top_k);

/// Inertia share of a single factor (0-based).
double factor_share(const FactorModel& model, std::size_t factor);

/// Full-dimensional row coordinates (F_1(i), ..., F_N(i)) in table row order.
std::vector<std::vector<double>> row_points(const FactorModel& model);

}  // namespace chronoca
