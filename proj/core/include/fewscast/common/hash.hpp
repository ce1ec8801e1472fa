#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace fewscast {

/// Streaming 64-bit FNV-1a. Used for content hashes in run manifests, not for security.
class ContentHash {
public:
    ContentHash& update(std::string_view bytes);
    ContentHash& update_file(const std::filesystem::path& path);

    [[nodiscard]] std::uint64_t value() const { return state_; }
    [[nodiscard]] std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hash_file(const std::filesystem::path& path);

}  // namespace fewscast
