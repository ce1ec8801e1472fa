#include "fewscast/tsstats/ols.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fewscast/common/error.hpp"

namespace fewscast::tsstats {

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool with_covariance) {
    const Eigen::Index n = X.rows(), k = X.cols();
    if (y.size() != n) throw DataError("OLS: response length differs from design rows");
    if (n <= k) {
        throw NumericalError("OLS: need more rows (" + std::to_string(n) + ") than columns (" +
                             std::to_string(k) + ")");
    }
    if (!X.allFinite() || !y.allFinite()) throw NumericalError("OLS: non-finite input");

    Eigen::VectorXd norms = X.colwise().norm().transpose();
    std::string zero_cols;
    std::vector<std::size_t> zero_idx;
    for (Eigen::Index j = 0; j < k; ++j) {
        if (norms[j] == 0.0) {
            zero_cols += (zero_cols.empty() ? "" : ",") + std::to_string(j);
            zero_idx.push_back(static_cast<std::size_t>(j));
            norms[j] = 1.0;
        }
    }
    if (!zero_cols.empty()) {
        throw RankDeficientError("OLS: rank-deficient design, all-zero columns {" + zero_cols + "}",
                                 std::move(zero_idx));
    }
    const Eigen::MatrixXd Xs = X * norms.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        const auto& perm = qr.colsPermutation().indices();
        std::vector<Eigen::Index> bad(perm.data() + qr.rank(), perm.data() + k);
        std::sort(bad.begin(), bad.end());
        std::string list;
        for (auto j : bad) list += (list.empty() ? "" : ",") + std::to_string(j);
        throw RankDeficientError("OLS: rank-deficient design, collinear columns {" + list + "}",
                                 {bad.begin(), bad.end()});
    }

    OlsFit fit;
    fit.nobs = static_cast<std::size_t>(n);
    fit.beta = norms.cwiseInverse().asDiagonal() * qr.solve(y);
    fit.residuals = y - X * fit.beta;
    fit.rss = fit.residuals.squaredNorm();
    fit.sigma2 = fit.rss / static_cast<double>(n - k);

    if (with_covariance) {
        // (Xs'Xs)^-1 = P R^-1 R^-T P'
        const auto R = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
        Eigen::MatrixXd Rinv = R.solve(Eigen::MatrixXd::Identity(k, k));
        Eigen::MatrixXd inner = Rinv * Rinv.transpose();
        const auto& P = qr.colsPermutation();
        Eigen::MatrixXd unscaled = P * inner * P.transpose();
        fit.covariance = fit.sigma2 * (norms.cwiseInverse().asDiagonal() * unscaled *
                                       norms.cwiseInverse().asDiagonal());
    }
    return fit;
}

}  // namespace fewscast::tsstats
