#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fewscast::semantics {

/// Word vectors of one fixed dimension, stored contiguously.
class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dim);

    /// Adds or replaces a word. Returns true when an existing vector was replaced.
    /// Throws DataError on dimension mismatch or non-finite components.
    bool insert(std::string word, std::span<const double> vector);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return words_.size(); }
    [[nodiscard]] bool contains(std::string_view word) const;
    [[nodiscard]] std::optional<std::span<const double>> find(std::string_view word) const;
    [[nodiscard]] const std::vector<std::string>& words() const { return words_; }

private:
    std::size_t dim_;
    std::vector<std::string> words_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// word2vec text format: a "V D" header, then "word v1 ... vD" per line.
/// Duplicate words keep the last vector and add a warning.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace fewscast::semantics
