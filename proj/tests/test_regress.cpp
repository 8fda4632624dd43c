#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "landex/regress.hpp"
#include "landex/synth.hpp"

using namespace landex;

namespace {

DesignMatrix make_design(std::vector<std::vector<double>> rows,
                         std::vector<std::string> labels) {
    DesignMatrix X;
    X.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < labels.size(); ++j)
            X.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
    X.column_labels = std::move(labels);
    return X;
}

Eigen::VectorXd make_vector(std::vector<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = values[i];
    return v;
}

// Brute-force normal-equations oracle: exhaustive long-double summation for
// X'X and X'y, then Gauss-Jordan elimination. Shares nothing with the QR
// path under test.
std::vector<double> normal_equations_oracle(const DesignMatrix& X,
                                            const Eigen::VectorXd& y) {
    const std::size_t n = static_cast<std::size_t>(X.rows());
    const std::size_t k = static_cast<std::size_t>(X.cols());
    std::vector<std::vector<long double>> a(k, std::vector<long double>(k + 1, 0.0L));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t i = 0; i < n; ++i)
                a[r][c] += static_cast<long double>(X.values(static_cast<Eigen::Index>(i),
                                                             static_cast<Eigen::Index>(r))) *
                           X.values(static_cast<Eigen::Index>(i),
                                    static_cast<Eigen::Index>(c));
        for (std::size_t i = 0; i < n; ++i)
            a[r][k] += static_cast<long double>(X.values(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(r))) *
                       y(static_cast<Eigen::Index>(i));
    }
    // Gauss-Jordan with partial pivoting.
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(static_cast<double>(a[r][col])) >
                std::fabs(static_cast<double>(a[pivot][col])))
                pivot = r;
        std::swap(a[col], a[pivot]);
        const long double scale = a[col][col];
        for (std::size_t c = col; c <= k; ++c) a[col][c] /= scale;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const long double factor = a[r][col];
            for (std::size_t c = col; c <= k; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    std::vector<double> beta(k);
    for (std::size_t r = 0; r < k; ++r) beta[r] = static_cast<double>(a[r][k]);
    return beta;
}

}  // namespace

TEST_CASE("ols recovers an exact line") {
    const DesignMatrix X =
        make_design({{1, 1}, {1, 2}, {1, 3}}, {"intercept", "slope"});
    const RegressionResult fit = ols(X, make_vector({2, 4, 6}));
    CHECK(fit.coefficients(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.coefficients(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.residuals.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(fit.adj_r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.n_obs == 3);
}

TEST_CASE("ols single-column fixture matches hand normal equations") {
    const DesignMatrix X = make_design({{1}, {2}}, {"x"});
    const RegressionResult fit = ols(X, make_vector({1, 6}));
    CHECK(fit.coefficients(0) == doctest::Approx(2.6).epsilon(1e-15));
    CHECK(fit.residuals(0) == doctest::Approx(-1.6).epsilon(1e-14));
    CHECK(fit.residuals(1) == doctest::Approx(0.8).epsilon(1e-14));
    // HC0 by hand: sqrt((1*2.56 + 4*0.64) / 25) = sqrt(0.2048)
    CHECK(fit.robust_se(0) == doctest::Approx(std::sqrt(0.2048)).epsilon(1e-12));
}

TEST_CASE("ols rejects collinear and misshapen inputs") {
    const DesignMatrix twin =
        make_design({{1, 1}, {2, 2}, {3, 3}}, {"a", "a_copy"});
    try {
        ols(twin, make_vector({1, 2, 3}));
        FAIL("expected RankDeficient");
    } catch (const RankDeficient& e) {
        const std::string what = e.what();
        CHECK(what.find("a_copy") != std::string::npos);
    }

    const DesignMatrix X = make_design({{1}, {2}}, {"x"});
    CHECK_THROWS_AS(ols(X, make_vector({1, 2, 3})), DimensionMismatch);
    const DesignMatrix wide = make_design({{1, 2}}, {"a", "b"});
    CHECK_THROWS_AS(ols(wide, make_vector({1})), DimensionMismatch);
}

TEST_CASE("wls equals ols under constant weights and weights means") {
    const DesignMatrix X =
        make_design({{1, 0.5}, {1, 1.5}, {1, 2.0}, {1, 3.5}}, {"c", "x"});
    const Eigen::VectorXd y = make_vector({1.0, 2.2, 2.9, 4.5});

    const RegressionResult plain = ols(X, y);
    const RegressionResult weighted = wls(X, y, Eigen::VectorXd::Constant(4, 3.7));
    CHECK((plain.coefficients - weighted.coefficients).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((plain.residuals - weighted.residuals).cwiseAbs().maxCoeff() < 1e-12);

    const DesignMatrix ones = make_design({{1}, {1}}, {"c"});
    const RegressionResult mean_fit =
        wls(ones, make_vector({0, 3}), make_vector({2, 1}));
    CHECK(mean_fit.coefficients(0) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(wls(ones, make_vector({0, 3}), make_vector({1, 0})),
                    NonPositiveWeight);
    CHECK_THROWS_AS(wls(ones, make_vector({0, 3}), make_vector({1, -2})),
                    NonPositiveWeight);
}

TEST_CASE("hc0_se closed forms") {
    const DesignMatrix X = make_design({{1}, {2}}, {"x"});
    const Eigen::VectorXd se = hc0_se(X, make_vector({-1.6, 0.8}));
    CHECK(se(0) == doctest::Approx(std::sqrt(0.2048)).epsilon(1e-12));

    CHECK(hc0_se(X, make_vector({0, 0}))(0) == 0.0);

    // Single all-ones column, equal residuals c: SE = c / sqrt(2).
    const DesignMatrix ones = make_design({{1}, {1}}, {"c"});
    const double c = 0.35;
    CHECK(hc0_se(ones, make_vector({c, c}))(0) ==
          doctest::Approx(c / std::sqrt(2.0)).epsilon(1e-12));

    // HC1 scales HC0 by n/(n-k).
    const Eigen::VectorXd hc1 = hc0_se(X, make_vector({-1.6, 0.8}), HcFlavor::HC1);
    CHECK(hc1(0) == doctest::Approx(std::sqrt(0.2048 * 2.0)).epsilon(1e-12));
}

TEST_CASE("ols matches the brute-force oracle on random systems") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index n = 50, k = 5;
        DesignMatrix X;
        X.values.resize(n, k);
        X.column_labels = {"c0", "c1", "c2", "c3", "c4"};
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            X.values(i, 0) = 1.0;
            for (Eigen::Index j = 1; j < k; ++j) X.values(i, j) = rng.normal();
            y(i) = rng.normal() * 2.0 + X.values.row(i).sum();
        }

        const RegressionResult fit = ols(X, y);
        const auto oracle = normal_equations_oracle(X, y);
        for (Eigen::Index j = 0; j < k; ++j) {
            const double denom = std::max(1.0, std::fabs(oracle[static_cast<std::size_t>(j)]));
            CHECK(std::fabs(fit.coefficients(j) - oracle[static_cast<std::size_t>(j)]) /
                      denom <
                  1e-8);
        }

        // Residual orthogonality, scaled by norms.
        const double scaled = (X.values.transpose() * fit.residuals).norm() /
                              (X.values.norm() * std::max(fit.residuals.norm(), 1e-30));
        CHECK(scaled < 1e-8);
    }
}

TEST_CASE("ols is deterministic across repeated runs") {
    SplitMix64 rng(5);
    DesignMatrix X;
    X.values.resize(30, 3);
    X.column_labels = {"a", "b", "c"};
    Eigen::VectorXd y(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) X.values(i, j) = rng.normal();
        y(i) = rng.normal();
    }
    const RegressionResult first = ols(X, y);
    const RegressionResult second = ols(X, y);
    CHECK(first.coefficients == second.coefficients);
    CHECK(first.residuals == second.residuals);
    CHECK(first.robust_se == second.robust_se);
    CHECK(first.adj_r_squared == second.adj_r_squared);
}
