#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fewscast/semantics/embedding.hpp"

namespace fewscast::semantics {

/// Optimal flow between two discrete distributions.
struct TransportPlan {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> flow;  ///< row-major rows x cols
    double cost = 0.0;

    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return flow[i * cols + j]; }
};

/// Exact minimum-cost transport for small problems (rows * cols <= 16).
///
/// Every vertex of the transportation polytope is the unique flow on some
/// spanning tree of the complete bipartite graph; the solver enumerates those
/// trees, keeps the non-negative ones and returns the cheapest. `supply` and
/// `demand` must be positive and sum to the same total.
TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost);

enum class OovPolicy {
    Error,  ///< out-of-vocabulary token is a DataError
    Skip,   ///< drop unknown tokens; the phrase must keep at least one
};

/// Word mover's distance between two phrases of 1-3 tokens (space separated):
/// uniform mass per token occurrence, Euclidean ground cost.
double wmd(std::string_view a, std::string_view b, const EmbeddingTable& embeddings,
           OovPolicy oov = OovPolicy::Error);

TransportPlan wmd_plan(std::span<const std::string> a, std::span<const std::string> b,
                       const EmbeddingTable& embeddings, OovPolicy oov = OovPolicy::Error);

/// True when every token of the phrase has a vector.
bool embeddable(std::string_view phrase, const EmbeddingTable& embeddings);

}  // namespace fewscast::semantics
