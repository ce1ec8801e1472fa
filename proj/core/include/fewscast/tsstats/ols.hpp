#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fewscast/common/error.hpp"

namespace fewscast::tsstats {

class RankDeficientError : public NumericalError {
public:
    RankDeficientError(const std::string& what, std::vector<std::size_t> columns)
        : NumericalError(what), columns_(std::move(columns)) {}
    /// Zero-based design columns that are zero or collinear with the rest.
    [[nodiscard]] const std::vector<std::size_t>& columns() const { return columns_; }

private:
    std::vector<std::size_t> columns_;
};

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd covariance;  ///< sigma^2 (X'X)^-1; empty unless requested
    double rss = 0.0;
    double sigma2 = 0.0;  ///< rss / (nobs - cols)
    std::size_t nobs = 0;
};

/// Least squares via column-pivoted Householder QR on unit-norm-scaled columns.
///
/// Requires rows > cols. A design whose numerical rank falls short of its
/// column count is a NumericalError naming the columns that were pivoted out.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool with_covariance = true);

}  // namespace fewscast::tsstats
