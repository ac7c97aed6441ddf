#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plweb {

void append_utf8(std::string& out, std::uint32_t code);
std::string utf8_encode(std::uint32_t code);
std::vector<std::uint32_t> decode_utf8(std::string_view s);
// Byte length of a UTF-8 sequence given its lead byte.
std::size_t utf8_length(unsigned char lead);
std::size_t utf8_count(std::string_view s);

} // namespace plweb
