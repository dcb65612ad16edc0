#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace motisim::io {

// 17 significant digits: doubles round-trip exactly through the text formats.
std::string full_precision(double v);

// FNV-1a 64-bit, used as the run-manifest hash.
std::uint64_t fnv1a(std::string_view data);
std::string fnv1a_hex(std::string_view data);

}  // namespace motisim::io
