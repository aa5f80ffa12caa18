#include "chronoca/ca_engine.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "chronoca/errors.hpp"

namespace chronoca {

double total_inertia(const ContingencyTable& table) {
    const FrequencyView fv = frequencies(table);
    double sum = 0.0;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.cols(); ++j) {
            const double expected = fv.row_masses[i] * fv.col_masses[j];
            const double diff = fv.f(i, j) - expected;
            sum += diff * diff / expected;
        }
    }
    return sum;
}

double chi2_sq_distance(const ContingencyTable& table, std::size_t i, std::size_t i2) {
    if (i >= table.rows() || i2 >= table.rows()) {
        throw UsageError("row index out of range in chi2_sq_distance");
    }
    const double k = table.grand_total();
    const double ri = table.row_totals()[i];
    const double ri2 = table.row_totals()[i2];
    double sum = 0.0;
    for (std::size_t j = 0; j < table.cols(); ++j) {
        const double fj = table.col_totals()[j] / k;
        const double diff = table(i, j) / ri - table(i2, j) / ri2;
        sum += diff * diff / fj;
    }
    return sum;
}

FactorModel analyze(const ContingencyTable& table, const AnalyzeOptions& options) {
    const std::size_t n = table.rows();
    const std::size_t m = table.cols();
    if (n < 2 || m < 2) {
        throw DomainError("degenerate cloud: analysis needs at least 2 rows and 2 columns");
    }

    const FrequencyView fv = frequencies(table);
    Eigen::VectorXd sqrt_r(n);
    Eigen::VectorXd sqrt_c(m);
    for (std::size_t i = 0; i < n; ++i) sqrt_r(i) = std::sqrt(fv.row_masses[i]);
    for (std::size_t j = 0; j < m; ++j) sqrt_c(j) = std::sqrt(fv.col_masses[j]);

    Eigen::MatrixXd residual(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double expected = fv.row_masses[i] * fv.col_masses[j];
            residual(i, j) = (fv.f(i, j) - expected) / (sqrt_r(i) * sqrt_c(j));
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();

    // The trivial direction (sqrt of the masses) is in the null space, so at
    // most min(n, m) - 1 factors can be genuine.
    const std::size_t max_rank = std::min(n, m) - 1;
    std::size_t rank = 0;
    if (sigma.size() > 0 && sigma(0) * sigma(0) >= options.absolute_floor) {
        const double cutoff = options.relative_tolerance * sigma(0);
        while (rank < max_rank && sigma(static_cast<Eigen::Index>(rank)) >= cutoff) ++rank;
    }

    FactorModel model;
    model.total_inertia = total_inertia(table);
    model.row_masses = fv.row_masses;
    model.col_masses = fv.col_masses;
    model.row_labels = table.row_labels();
    model.col_labels = table.col_labels();
    model.row_coords = Matrix(n, rank);
    model.col_coords = Matrix(m, rank);
    model.eigenvalues.reserve(rank);

    const Eigen::MatrixXd& u = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();
    for (std::size_t a = 0; a < rank; ++a) {
        const auto ea = static_cast<Eigen::Index>(a);
        const double s = sigma(ea);
        model.eigenvalues.push_back(s * s);
        for (std::size_t i = 0; i < n; ++i) {
            model.row_coords(i, a) = s * u(static_cast<Eigen::Index>(i), ea) / sqrt_r(i);
        }
        for (std::size_t j = 0; j < m; ++j) {
            model.col_coords(j, a) = s * v(static_cast<Eigen::Index>(j), ea) / sqrt_c(j);
        }

        // Sign rule. Near-ties within 1e-12 relative count as ties so that
        // mirror-symmetric clouds do not depend on the last bit of the SVD.
        double largest = 0.0;
        for (std::size_t i = 0; i < n; ++i) largest = std::max(largest, std::abs(model.row_coords(i, a)));
        std::size_t pick = 0;
        while (std::abs(model.row_coords(pick, a)) < largest * (1.0 - 1e-12)) ++pick;
        if (model.row_coords(pick, a) < 0.0) {
            for (std::size_t i = 0; i < n; ++i) model.row_coords(i, a) = -model.row_coords(i, a);
            for (std::size_t j = 0; j < m; ++j) model.col_coords(j, a) = -model.col_coords(j, a);
        }
    }
    return model;
}

double explained_ratio(const FactorModel& model, std::size_t top_k) {
    const std::size_t n = model.n_factors();
    if (top_k > n) {
        throw UsageError("explained_ratio: top_k " + std::to_string(top_k) + " exceeds " +
                         std::to_string(n) + " factors");
    }
    if (top_k == n) return 1.0;
    if (top_k == 0 || model.total_inertia <= 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t a = 0; a < top_k; ++a) sum += model.eigenvalues[a];
    return std::clamp(sum / model.total_inertia, 0.0, 1.0);
}

double factor_share(const FactorModel& model, std::size_t factor) {
    if (factor >= model.n_factors()) throw UsageError("factor index out of range");
    if (model.total_inertia <= 0.0) return 0.0;
    return model.eigenvalues[factor] / model.total_inertia;
}

std::vector<std::vector<double>> row_points(const FactorModel& model) {
    std::vector<std::vector<double>> out;
    out.reserve(model.row_coords.rows());
    for (std::size_t i = 0; i < model.row_coords.rows(); ++i) {
        const auto r = model.row_coords.row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

}  // namespace chronoca
