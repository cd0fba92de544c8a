#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "augkit/image.hpp"

namespace augkit {

class IoError : public Error {
 public:
  using Error::Error;
};

/// 8-bit RGB PNG, fixed compression settings and no timestamp chunk, so equal
/// images always encode to equal bytes.
std::vector<std::uint8_t> encode_png(const Image& img);

/// Decoders convert gray, palette, alpha and 16-bit inputs to 8-bit RGB.
/// Both throw IoError on malformed data.
Image decode_png(std::span<const std::uint8_t> bytes);
Image decode_jpeg(std::span<const std::uint8_t> bytes);
/// Sniffs the signature and dispatches to the PNG or JPEG decoder.
Image decode_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace augkit
