#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fewscast/semantics/embedding.hpp"

namespace oracle {

/// Cheapest integer transport plan with row sums `a` and column sums `b`, by
/// enumerating every such plan. Integral plans suffice for integral margins.
inline double integer_transport(const std::vector<int>& a, const std::vector<int>& b,
                                const std::vector<double>& cost) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<int> rows(a), cols(b);
    double best = std::numeric_limits<double>::infinity();
    double acc = 0.0;
    auto rec = [&](auto&& self, std::size_t cell) -> void {
        if (cell == m * n) {
            for (int r : rows)
                if (r != 0) return;
            best = std::min(best, acc);
            return;
        }
        const std::size_t i = cell / n, j = cell % n;
        if (j == n - 1) {
            const int f = rows[i];
            if (f > cols[j]) return;
            rows[i] -= f;
            cols[j] -= f;
            acc += f * cost[cell];
            self(self, cell + 1);
            acc -= f * cost[cell];
            rows[i] += f;
            cols[j] += f;
            return;
        }
        for (int f = 0; f <= std::min(rows[i], cols[j]); ++f) {
            rows[i] -= f;
            cols[j] -= f;
            acc += f * cost[cell];
            self(self, cell + 1);
            acc -= f * cost[cell];
            rows[i] += f;
            cols[j] += f;
        }
    };
    rec(rec, 0);
    return best;
}

inline double euclid(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
    return std::sqrt(s);
}

/// Word mover's distance with uniform token mass, by exhaustive integer plans
/// on a grid of |a| * |b| mass units.
inline double wmd(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  const fewscast::semantics::EmbeddingTable& table) {
    const int units = static_cast<int>(a.size() * b.size());
    std::vector<int> ra(a.size(), static_cast<int>(b.size()));
    std::vector<int> cb(b.size(), static_cast<int>(a.size()));
    std::vector<double> cost;
    for (const auto& s : a)
        for (const auto& t : b) cost.push_back(euclid(*table.find(s), *table.find(t)));
    return integer_transport(ra, cb, cost) / units;
}

/// 2x2 transport by scanning the single free flow variable.
inline double transport_2x2_grid(double a0, double b0, const std::vector<double>& cost,
                                 std::size_t steps = 200000) {
    const double lo = std::max(0.0, a0 + b0 - 1.0), hi = std::min(a0, b0);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s <= steps; ++s) {
        const double f = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps);
        const double c = f * cost[0] + (a0 - f) * cost[1] + (b0 - f) * cost[2] +
                         (1.0 - a0 - b0 + f) * cost[3];
        best = std::min(best, c);
    }
    return best;
}

inline Eigen::VectorXd normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    return (X.transpose() * X).ldlt().solve(X.transpose() * y);
}

/// Subgradient violation of (1/2n)|y - Xb|^2 + lambda * sum_j sd_j |b_j|.
inline double lasso_kkt(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& beta, double lambda,
                        const std::vector<bool>& penalized) {
    const double n = static_cast<double>(X.rows());
    const Eigen::VectorXd g = X.transpose() * (y - X * beta) / n;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const auto col = X.col(j);
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().sum() / n);
        double v;
        if (!penalized[static_cast<std::size_t>(j)]) {
            v = std::abs(g(j));
        } else if (beta(j) != 0.0) {
            v = std::abs(g(j) - lambda * sd * (beta(j) > 0 ? 1.0 : -1.0));
        } else {
            v = std::max(0.0, std::abs(g(j)) - lambda * sd);
        }
        worst = std::max(worst, sd > 0 ? v / sd : v);
    }
    return worst;
}

/// Outbreak starts: x(t-1) <= 2, x(t) >= 3, x(t+1) >= 3.
inline std::vector<std::size_t> outbreak_starts(const std::vector<double>& x, double l = 2.0,
                                                double u = 3.0) {
    std::vector<std::size_t> out;
    for (std::size_t t = 1; t + 1 < x.size(); ++t)
        if (x[t - 1] <= l && x[t] >= u && x[t + 1] >= u) out.push_back(t);
    return out;
}

struct PR {
    std::optional<double> precision;
    double recall = 0.0;
};

/// Exact-period matching of predicted against actual starts, district by district.
inline PR precision_recall(const std::vector<std::vector<std::size_t>>& predicted,
                           const std::vector<std::vector<std::size_t>>& actual) {
    std::size_t p = 0, a = 0, m = 0;
    for (std::size_t d = 0; d < predicted.size(); ++d) {
        p += predicted[d].size();
        a += actual[d].size();
        for (auto t : predicted[d])
            if (std::find(actual[d].begin(), actual[d].end(), t) != actual[d].end()) ++m;
    }
    PR r;
    if (p > 0) r.precision = static_cast<double>(m) / static_cast<double>(p);
    r.recall = a > 0 ? static_cast<double>(m) / static_cast<double>(a) : 0.0;
    return r;
}

/// (l, u, precision, recall) of every grid pair l < u on [1, 5] by 0.1, then
/// the points no other point dominates. Equal pairs keep the smallest (l, u).
inline std::set<std::tuple<int, int, double, double>> exhaustive_front(
    const std::vector<std::vector<double>>& pred, const std::vector<std::vector<double>>& phases,
    bool crossed = false) {
    std::vector<std::vector<std::size_t>> actual;
    for (const auto& s : phases) actual.push_back(outbreak_starts(s));
    struct P {
        int l, u;
        double p, r;
    };
    std::vector<P> pts;
    for (int l = 10; l <= 50; ++l)
        for (int u = crossed ? 10 : l + 1; u <= 50; ++u) {
            std::vector<std::vector<std::size_t>> predicted;
            for (const auto& s : pred) predicted.push_back(outbreak_starts(s, l / 10.0, u / 10.0));
            const PR pr = precision_recall(predicted, actual);
            if (pr.precision) pts.push_back({l, u, *pr.precision, pr.recall});
        }
    std::set<std::tuple<int, int, double, double>> front;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < pts.size() && keep; ++j) {
            if (i == j) continue;
            const bool ge = pts[j].p >= pts[i].p && pts[j].r >= pts[i].r;
            const bool gt = pts[j].p > pts[i].p || pts[j].r > pts[i].r;
            if (ge && gt) keep = false;
            if (!gt && ge && std::tie(pts[j].l, pts[j].u) < std::tie(pts[i].l, pts[i].u)) keep = false;
        }
        if (keep) front.emplace(pts[i].l, pts[i].u, pts[i].p, pts[i].r);
    }
    return front;
}

}  // namespace oracle

namespace testutil {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("fewscast_" + tag + "_" + std::to_string(rd()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace testutil
