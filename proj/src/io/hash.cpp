#include "ptlab/io/hash.hpp"

#include <cstdio>

namespace ptlab::io {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string config_hash(const nlohmann::json& config) { return hex64(fnv1a64(config.dump())); }

}  // namespace ptlab::io
