#include "fewscast/semantics/embedding.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fewscast/common/error.hpp"

namespace fewscast::semantics {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw DataError("embedding dimension must be positive");
}

bool EmbeddingTable::insert(std::string word, std::span<const double> vector) {
    if (vector.size() != dim_) {
        throw DataError("embedding for '" + word + "' has " + std::to_string(vector.size()) +
                        " components, expected " + std::to_string(dim_));
    }
    for (double v : vector) {
        if (!std::isfinite(v)) throw DataError("embedding for '" + word + "' is not finite");
    }
    if (auto it = index_.find(word); it != index_.end()) {
        std::copy(vector.begin(), vector.end(), data_.begin() + it->second * dim_);
        return true;
    }
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    data_.insert(data_.end(), vector.begin(), vector.end());
    return false;
}

bool EmbeddingTable::contains(std::string_view word) const {
    return index_.count(std::string(word)) > 0;
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return std::span<const double>(data_).subspan(it->second * dim_, dim_);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embeddings " + path.string());
    std::string line;
    std::size_t line_no = 0;
    std::size_t vocab = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream header(line);
        if (!(header >> vocab >> dim) || dim == 0) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected header 'V D'");
        }
        break;
    }
    if (dim == 0) throw DataError(path.string() + ": empty embedding file");

    EmbeddingTable table(dim);
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::istringstream fields(line);
        std::string word;
        fields >> word;
        values.clear();
        std::string tok;
        while (fields >> tok) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw DataError(path.string() + ":" + std::to_string(line_no) +
                                ": bad number '" + tok + "'");
            }
        }
        if (values.size() != dim) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": '" + word +
                            "' has " + std::to_string(values.size()) + " values, expected " +
                            std::to_string(dim));
        }
        try {
            if (table.insert(word, values) && warnings) {
                warnings->push_back(path.string() + ":" + std::to_string(line_no) +
                                    ": duplicate word '" + word + "', keeping the last vector");
            }
        } catch (const DataError& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (warnings && vocab != table.size()) {
        warnings->push_back(path.string() + ": header declares " + std::to_string(vocab) +
                            " words, file has " + std::to_string(table.size()));
    }
    return table;
}

}  // namespace fewscast::semantics
