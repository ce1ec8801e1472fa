#include "fewscast/semantics/wmd.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "fewscast/common/error.hpp"
#include "fewscast/common/text.hpp"

namespace fewscast::semantics {

namespace {

constexpr std::size_t kMaxCells = 16;
constexpr double kFeasibilityTol = 1e-12;

// Flow on the spanning tree selected by `mask`, or false if the cells do not
// form a spanning tree or the tree flow goes negative.
bool tree_flow(std::uint32_t mask, std::size_t m, std::size_t n, std::span<const double> supply,
               std::span<const double> demand, std::vector<double>& flow) {
    const std::size_t nodes = m + n;
    std::vector<std::size_t> parent(nodes);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto root = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<int> degree(nodes, 0);
    for (std::size_t cell = 0; cell < m * n; ++cell) {
        if (!(mask >> cell & 1U)) continue;
        const std::size_t a = root(cell / n), b = root(m + cell % n);
        if (a == b) return false;  // cycle
        parent[a] = b;
        ++degree[cell / n];
        ++degree[m + cell % n];
    }

    std::vector<double> residual(nodes);
    for (std::size_t i = 0; i < m; ++i) residual[i] = supply[i];
    for (std::size_t j = 0; j < n; ++j) residual[m + j] = demand[j];
    std::fill(flow.begin(), flow.end(), 0.0);

    // Peel leaves: a leaf's only edge must carry its whole residual mass.
    std::uint32_t remaining = mask;
    while (remaining != 0) {
        bool progressed = false;
        for (std::size_t cell = 0; cell < m * n; ++cell) {
            if (!(remaining >> cell & 1U)) continue;
            const std::size_t r = cell / n, c = m + cell % n;
            std::size_t leaf = nodes, other = nodes;
            if (degree[r] == 1) {
                leaf = r;
                other = c;
            } else if (degree[c] == 1) {
                leaf = c;
                other = r;
            }
            if (leaf == nodes) continue;
            const double f = residual[leaf];
            if (f < -kFeasibilityTol) return false;
            flow[cell] = std::max(f, 0.0);
            residual[leaf] = 0.0;
            residual[other] -= f;
            --degree[r];
            --degree[c];
            remaining &= ~(1U << cell);
            progressed = true;
        }
        if (!progressed) return false;
    }
    for (double r : residual) {
        if (std::abs(r) > 1e-9) return false;
    }
    return true;
}

std::vector<std::span<const double>> lookup(std::span<const std::string> tokens,
                                            const EmbeddingTable& emb, OovPolicy oov) {
    std::vector<std::span<const double>> out;
    for (const auto& t : tokens) {
        if (auto v = emb.find(t)) {
            out.push_back(*v);
        } else if (oov == OovPolicy::Error) {
            throw DataError("token '" + t + "' has no embedding");
        }
    }
    if (out.empty()) throw DataError("phrase has no embeddable tokens");
    return out;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost) {
    const std::size_t m = supply.size(), n = demand.size();
    if (m == 0 || n == 0) throw DataError("transport problem has an empty side");
    if (m * n > kMaxCells) throw DataError("transport problem too large for exact enumeration");
    if (cost.size() != m * n) throw DataError("cost matrix has wrong size");
    const double total_s = std::accumulate(supply.begin(), supply.end(), 0.0);
    const double total_d = std::accumulate(demand.begin(), demand.end(), 0.0);
    if (std::abs(total_s - total_d) > 1e-9 * std::max(1.0, total_s)) {
        throw DataError("supply and demand totals differ");
    }

    TransportPlan best;
    best.rows = m;
    best.cols = n;
    best.cost = std::numeric_limits<double>::infinity();
    std::vector<double> flow(m * n);
    const std::size_t edges = m + n - 1;
    for (std::uint32_t mask = 0; mask < (1U << (m * n)); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != edges) continue;
        if (!tree_flow(mask, m, n, supply, demand, flow)) continue;
        double c = 0.0;
        for (std::size_t k = 0; k < m * n; ++k) c += flow[k] * cost[k];
        if (c < best.cost) {
            best.cost = c;
            best.flow = flow;
        }
    }
    if (best.flow.empty()) throw NumericalError("no feasible transport plan found");
    return best;
}

TransportPlan wmd_plan(std::span<const std::string> a, std::span<const std::string> b,
                       const EmbeddingTable& embeddings, OovPolicy oov) {
    if (a.empty() || b.empty()) throw DataError("WMD needs two non-empty phrases");
    if (a.size() > 3 || b.size() > 3) throw DataError("WMD phrases are limited to 3 tokens");
    const auto va = lookup(a, embeddings, oov);
    const auto vb = lookup(b, embeddings, oov);
    const std::vector<double> supply(va.size(), 1.0 / static_cast<double>(va.size()));
    const std::vector<double> demand(vb.size(), 1.0 / static_cast<double>(vb.size()));
    std::vector<double> cost(va.size() * vb.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
        for (std::size_t j = 0; j < vb.size(); ++j) cost[i * vb.size() + j] = euclidean(va[i], vb[j]);
    }
    return solve_transport(supply, demand, cost);
}

double wmd(std::string_view a, std::string_view b, const EmbeddingTable& embeddings,
           OovPolicy oov) {
    const auto ta = text::split(a);
    const auto tb = text::split(b);
    return wmd_plan(ta, tb, embeddings, oov).cost;
}

bool embeddable(std::string_view phrase, const EmbeddingTable& embeddings) {
    const auto tokens = text::split(phrase);
    if (tokens.empty()) return false;
    for (const auto& t : tokens) {
        if (!embeddings.contains(t)) return false;
    }
    return true;
}

}  // namespace fewscast::semantics
