#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fewscast/common/month.hpp"
#include "fewscast/corpus/corpus_index.hpp"

namespace fewscast::corpus {

/// Monthly share of articles that mention a feature together with a location.
struct NewsFactorSeries {
    std::string feature;
    LocationKey location;
    Month first;
    std::vector<double> values;          ///< one value per month from `first`, each in [0,1]
    std::vector<bool> zero_denominator;  ///< months where no article was eligible
    int differencing_order = 0;

    [[nodiscard]] Month last() const { return first + static_cast<int>(values.size()) - 1; }
};

enum class Denominator {
    Country,  ///< articles that month tagged with the location's country
    Corpus,   ///< every article that month
};

/// Articles flagged true are dropped from numerator and denominator.
using ArticleMask = std::vector<bool>;

ArticleMask mark_articles(const CorpusIndex& index,
                          const std::function<bool(const Article&)>& predicate);

struct FactorOptions {
    Denominator denominator = Denominator::Country;
    const ArticleMask* excluded = nullptr;
    /// Month range of the output; defaults to the corpus window.
    std::optional<Month> first;
    std::optional<Month> last;
};

/// Throws DataError when the location is unknown or a feature token never occurs in the corpus.
NewsFactorSeries compute_news_factor(const std::string& feature, const LocationKey& location,
                                     const CorpusIndex& index, const FactorOptions& options = {});

/// Batch form: every feature against every location, in feature-major order.
/// Features with out-of-vocabulary tokens yield all-zero series instead of throwing.
std::vector<NewsFactorSeries> compute_news_factors(const std::vector<std::string>& features,
                                                   const std::vector<LocationKey>& locations,
                                                   const CorpusIndex& index,
                                                   const FactorOptions& options = {});

/// Factor CSV: feature,location_id,level,month,value
void write_factors_csv(const std::filesystem::path& path,
                       const std::vector<NewsFactorSeries>& factors);
std::vector<NewsFactorSeries> read_factors_csv(const std::filesystem::path& path);

}  // namespace fewscast::corpus
