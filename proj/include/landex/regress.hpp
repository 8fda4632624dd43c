#ifndef LANDEX_REGRESS_HPP
#define LANDEX_REGRESS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "landex/errors.hpp"

namespace landex {

// Dense regressor matrix with labeled columns. The hedonic design (about a
// hundred week dummies plus a handful of controls on tens of thousands of
// rows) fits comfortably dense.
struct DesignMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> column_labels;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

enum class HcFlavor {
    HC0,  // White's baseline sandwich
    HC1,  // HC0 scaled by n/(n-k)
};

struct RegressionResult {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd residuals;  // y - X*coefficients, on the caller's scale
    Eigen::VectorXd robust_se;
    double adj_r_squared = 0.0;
    Eigen::Index n_obs = 0;
    std::vector<std::string> labels;

    double coefficient(const std::string& label) const;  // MissingTerm
    double robust_se_of(const std::string& label) const;
};

// Ordinary least squares via a column-pivoted Householder QR (never the
// normal equations), single-threaded so reruns are bit-identical.
// Rank deficiency is detected against a 1e-10 pivot threshold relative to
// the largest diagonal of R and reported with the offending column labels.
// Throws RankDeficient, DimensionMismatch.
RegressionResult ols(const DesignMatrix& X, const Eigen::VectorXd& y,
                     HcFlavor flavor = HcFlavor::HC0);

// Weighted least squares: identical to ols on rows scaled by sqrt(weight).
// Residuals are reported on the original (unweighted) scale; the robust
// covariance comes from the scaled system. Throws NonPositiveWeight plus
// everything ols throws.
RegressionResult wls(const DesignMatrix& X, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& weights, HcFlavor flavor = HcFlavor::HC0);

// Heteroskedasticity-robust standard errors: square roots of the diagonal of
//   (X'X)^-1  X' diag(e^2) X  (X'X)^-1.
Eigen::VectorXd hc0_se(const DesignMatrix& X, const Eigen::VectorXd& residuals,
                       HcFlavor flavor = HcFlavor::HC0);

}  // namespace landex

#endif  // LANDEX_REGRESS_HPP
