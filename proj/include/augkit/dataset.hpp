#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augkit/image.hpp"

namespace augkit {

enum class DatasetFormat { kFolder, kCifarBinary };

std::string_view format_name(DatasetFormat f);
DatasetFormat parse_format(std::string_view name);

inline constexpr int kCifarSide = 32;
inline constexpr std::size_t kCifarPixelBytes = 3 * kCifarSide * kCifarSide;
inline constexpr std::size_t kCifarRecordBytes = 1 + kCifarPixelBytes;

struct DatasetSource {
  DatasetFormat kind = DatasetFormat::kFolder;
  /// Folder of PNG/JPEG files, or a CIFAR .bin file / directory of .bin files.
  std::filesystem::path path;
};

/// One ingested item. Exactly one of `image` and `error` is meaningful.
struct Sample {
  std::uint64_t index = 0;
  std::string name;
  std::optional<Image> image;
  std::optional<int> label;
  std::string error;

  bool ok() const { return image.has_value(); }
};

/// Streams items in stable index order. Per-item failures (truncated record,
/// undecodable file) are reported as Samples with `error` set and the stream
/// continues. An unreadable path throws IoError.
void ingest(const DatasetSource& src, const std::function<void(Sample&&)>& sink);
std::vector<Sample> ingest_all(const DatasetSource& src);

/// Decodes one 3073-byte CIFAR record: label byte then R, G, B planes.
Sample decode_cifar_record(std::span<const std::uint8_t> record, std::uint64_t index);
/// Inverse of decode_cifar_record; the image must be 32x32.
std::vector<std::uint8_t> encode_cifar_record(const Image& img, std::uint8_t label);

}  // namespace augkit
