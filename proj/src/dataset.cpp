#include "augkit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "augkit/image_io.hpp"

namespace augkit {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<fs::path> sorted_files(const fs::path& dir, std::initializer_list<std::string_view> exts) {
  std::vector<fs::path> files;
  std::error_code ec;
  fs::directory_iterator it(dir, ec);
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = lower(entry.path().extension().string());
    if (std::find(exts.begin(), exts.end(), ext) != exts.end()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

void ingest_folder(const fs::path& dir, const std::function<void(Sample&&)>& sink) {
  std::uint64_t index = 0;
  for (const auto& file : sorted_files(dir, {".png", ".jpg", ".jpeg"})) {
    Sample s;
    s.index = index++;
    s.name = file.filename().string();
    try {
      s.image = decode_image(read_file(file));
    } catch (const Error& e) {
      s.error = s.name + ": " + e.what();
    }
    sink(std::move(s));
  }
}

void ingest_cifar_file(const fs::path& file, std::uint64_t& index,
                       const std::function<void(Sample&&)>& sink) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<std::uint8_t> record(kCifarRecordBytes);
  while (true) {
    in.read(reinterpret_cast<char*>(record.data()), static_cast<std::streamsize>(record.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    if (got != kCifarRecordBytes) {
      Sample s;
      s.index = index++;
      s.name = file.filename().string();
      s.error = "truncated record in " + s.name + ": " + std::to_string(got) + " of " +
                std::to_string(kCifarRecordBytes) + " bytes";
      sink(std::move(s));
      break;
    }
    Sample s = decode_cifar_record(record, index++);
    s.name = file.filename().string();
    sink(std::move(s));
  }
}

}  // namespace

std::string_view format_name(DatasetFormat f) {
  return f == DatasetFormat::kFolder ? "folder" : "cifar";
}

DatasetFormat parse_format(std::string_view name) {
  const std::string key = lower(std::string(name));
  if (key == "folder") return DatasetFormat::kFolder;
  if (key == "cifar" || key == "cifar_binary") return DatasetFormat::kCifarBinary;
  throw ConfigError("unknown dataset format '" + std::string(name) + "'; valid: folder, cifar");
}

Sample decode_cifar_record(std::span<const std::uint8_t> record, std::uint64_t index) {
  Sample s;
  s.index = index;
  if (record.size() != kCifarRecordBytes) {
    s.error = "cifar record must be " + std::to_string(kCifarRecordBytes) + " bytes";
    return s;
  }
  s.label = record[0];
  constexpr std::size_t plane = kCifarSide * kCifarSide;
  std::vector<std::uint8_t> data(kCifarPixelBytes);
  for (std::size_t p = 0; p < plane; ++p) {
    data[p * 3] = record[1 + p];
    data[p * 3 + 1] = record[1 + plane + p];
    data[p * 3 + 2] = record[1 + 2 * plane + p];
  }
  s.image = Image(kCifarSide, kCifarSide, std::move(data));
  return s;
}

std::vector<std::uint8_t> encode_cifar_record(const Image& img, std::uint8_t label) {
  if (img.width() != kCifarSide || img.height() != kCifarSide) {
    throw ConfigError("cifar records hold 32x32 images");
  }
  constexpr std::size_t plane = kCifarSide * kCifarSide;
  std::vector<std::uint8_t> rec(kCifarRecordBytes);
  rec[0] = label;
  const auto px = img.data();
  for (std::size_t p = 0; p < plane; ++p) {
    rec[1 + p] = px[p * 3];
    rec[1 + plane + p] = px[p * 3 + 1];
    rec[1 + 2 * plane + p] = px[p * 3 + 2];
  }
  return rec;
}

void ingest(const DatasetSource& src, const std::function<void(Sample&&)>& sink) {
  std::error_code ec;
  if (!fs::exists(src.path, ec)) throw IoError("input path does not exist: " + src.path.string());
  if (src.kind == DatasetFormat::kFolder) {
    if (!fs::is_directory(src.path)) throw IoError("folder input must be a directory: " + src.path.string());
    ingest_folder(src.path, sink);
    return;
  }
  std::uint64_t index = 0;
  if (fs::is_directory(src.path)) {
    for (const auto& file : sorted_files(src.path, {".bin"})) ingest_cifar_file(file, index, sink);
  } else {
    ingest_cifar_file(src.path, index, sink);
  }
}

std::vector<Sample> ingest_all(const DatasetSource& src) {
  std::vector<Sample> out;
  ingest(src, [&out](Sample&& s) { out.push_back(std::move(s)); });
  return out;
}

}  // namespace augkit
