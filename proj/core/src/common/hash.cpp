#include "fewscast/common/hash.hpp"

#include <cstdio>
#include <fstream>

#include "fewscast/common/error.hpp"

namespace fewscast {

ContentHash& ContentHash::update(std::string_view bytes) {
    for (unsigned char c : bytes) {
        state_ ^= c;
        state_ *= 0x100000001b3ULL;
    }
    return *this;
}

ContentHash& ContentHash::update_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string() + " for hashing");
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        update(std::string_view(buf, static_cast<std::size_t>(in.gcount())));
    }
    return *this;
}

std::string ContentHash::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return buf;
}

std::string hash_file(const std::filesystem::path& path) {
    return ContentHash{}.update_file(path).hex();
}

}  // namespace fewscast
