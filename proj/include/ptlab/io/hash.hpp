#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace ptlab::io {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lower-case hex digits.
std::string hex64(std::uint64_t v);

/// Hash of the compact dump of a config object. nlohmann::json keeps object
/// keys sorted, so equal configs hash equally regardless of insertion order.
std::string config_hash(const nlohmann::json& config);

}  // namespace ptlab::io
