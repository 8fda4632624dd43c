#include "landex/regress.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace landex {

namespace {

constexpr double kPivotThreshold = 1e-10;

void check_shape(const DesignMatrix& X, const Eigen::VectorXd& y) {
    if (X.cols() < 1 || X.rows() < X.cols())
        throw DimensionMismatch("design needs n >= k >= 1, got " +
                                std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
    if (y.size() != X.rows())
        throw DimensionMismatch("response length " + std::to_string(y.size()) +
                                " does not match " + std::to_string(X.rows()) + " rows");
    if (static_cast<Eigen::Index>(X.column_labels.size()) != X.cols())
        throw DimensionMismatch("expected " + std::to_string(X.cols()) +
                                " column labels, got " +
                                std::to_string(X.column_labels.size()));
    std::set<std::string> unique(X.column_labels.begin(), X.column_labels.end());
    if (static_cast<Eigen::Index>(unique.size()) != X.cols())
        throw DimensionMismatch("column labels are not unique");
}

// Decomposes and enforces the rank contract; shared by the solver and the
// sandwich. Returns the QR object by value (Eigen moves it cheaply).
Eigen::ColPivHouseholderQR<Eigen::MatrixXd> decompose(const DesignMatrix& X) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X.values);
    const Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
    const double largest = diag(0);
    if (!(largest > 0.0) || !std::isfinite(largest))
        throw RankDeficient("design matrix is zero or non-finite");

    std::vector<std::string> offending;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag(i) < kPivotThreshold * largest)
            offending.push_back(X.column_labels[static_cast<std::size_t>(perm(i))]);
    }
    if (!offending.empty()) {
        std::ostringstream msg;
        msg << "rank-deficient design; collinear columns:";
        for (const auto& label : offending) msg << " '" << label << "'";
        throw RankDeficient(msg.str());
    }
    return qr;
}

Eigen::VectorXd sandwich_se(const DesignMatrix& X,
                            const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr,
                            const Eigen::VectorXd& residuals, HcFlavor flavor) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();

    // (X'X)^-1 = P R^-1 R^-T P' from the pivoted factorization.
    const Eigen::MatrixXd r =
        qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = perm * (r_inv * r_inv.transpose()) * perm.transpose();

    const Eigen::VectorXd e2 = residuals.array().square();
    const Eigen::MatrixXd meat = X.values.transpose() * e2.asDiagonal() * X.values;
    Eigen::MatrixXd cov = xtx_inv * meat * xtx_inv;
    if (flavor == HcFlavor::HC1 && n > k)
        cov *= static_cast<double>(n) / static_cast<double>(n - k);
    return cov.diagonal().cwiseMax(0.0).cwiseSqrt();
}

}  // namespace

double RegressionResult::coefficient(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw MissingTerm("no term '" + label + "' in fit");
    return coefficients(static_cast<Eigen::Index>(it - labels.begin()));
}

double RegressionResult::robust_se_of(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw MissingTerm("no term '" + label + "' in fit");
    return robust_se(static_cast<Eigen::Index>(it - labels.begin()));
}

RegressionResult ols(const DesignMatrix& X, const Eigen::VectorXd& y, HcFlavor flavor) {
    check_shape(X, y);
    const auto qr = decompose(X);

    RegressionResult result;
    result.coefficients = qr.solve(y);
    result.residuals = y - X.values * result.coefficients;
    result.robust_se = sandwich_se(X, qr, result.residuals, flavor);
    result.n_obs = X.rows();
    result.labels = X.column_labels;

    const double ss_res = result.residuals.squaredNorm();
    const double mean_y = y.mean();
    const double ss_tot = (y.array() - mean_y).square().sum();
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    const double n = static_cast<double>(X.rows());
    const double k = static_cast<double>(X.cols());
    result.adj_r_squared = n > k ? 1.0 - (1.0 - r2) * (n - 1.0) / (n - k) : r2;
    return result;
}

RegressionResult wls(const DesignMatrix& X, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& weights, HcFlavor flavor) {
    check_shape(X, y);
    if (weights.size() != X.rows())
        throw DimensionMismatch("weights length " + std::to_string(weights.size()) +
                                " does not match " + std::to_string(X.rows()) + " rows");
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (!(weights(i) > 0.0) || !std::isfinite(weights(i)))
            throw NonPositiveWeight("weight " + std::to_string(weights(i)) + " at row " +
                                    std::to_string(i) + " must be positive and finite");
    }

    const Eigen::VectorXd root_w = weights.cwiseSqrt();
    DesignMatrix scaled{root_w.asDiagonal() * X.values, X.column_labels};
    const Eigen::VectorXd scaled_y = root_w.asDiagonal() * y;

    RegressionResult result = ols(scaled, scaled_y, flavor);
    result.residuals = y - X.values * result.coefficients;
    return result;
}

Eigen::VectorXd hc0_se(const DesignMatrix& X, const Eigen::VectorXd& residuals,
                       HcFlavor flavor) {
    check_shape(X, residuals);
    const auto qr = decompose(X);
    return sandwich_se(X, qr, residuals, flavor);
}

}  // namespace landex
