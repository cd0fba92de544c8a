#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "augkit/dataset.hpp"
#include "augkit/image.hpp"
#include "augkit/imgcore.hpp"
#include "augkit/policy.hpp"
#include "augkit/rng.hpp"

namespace augkit {

// Standard (non-learned) chain steps placed around the policy.

/// Mirror along `axis` with probability `prob`.
struct MirrorStep {
  FlipAxis axis = FlipAxis::kHorizontal;
  double prob = 0.5;
};

/// Zero-pad by `pad` and crop the original size at a uniform origin.
struct PadCropStep {
  int pad = 4;
};

/// Fixed-side cutout at a uniform center.
struct FixedCutoutStep {
  int side = 16;
};

using ChainStep = std::variant<MirrorStep, PadCropStep, FixedCutoutStep>;

struct Normalization {
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  std::array<double, 3> std{1.0, 1.0, 1.0};
};

inline constexpr Normalization kCifar10Normalization{{0.4914, 0.4822, 0.4465},
                                                     {0.2470, 0.2435, 0.2616}};

enum class ChainPreset { kNone, kCifar, kSvhn };
ChainPreset parse_chain_preset(std::string_view name);

struct ChainConfig {
  std::vector<ChainStep> pre_ops;
  std::optional<PolicyConfig> policy;
  std::vector<ChainStep> post_ops;
  std::optional<Normalization> normalization;
  Rgb fill = kMidGray;

  /// Policy only.
  static ChainConfig none(std::optional<PolicyConfig> policy);
  /// Mirror (p = 0.5), pad-4 crop, policy, 16 px cutout, CIFAR-10 normalization.
  static ChainConfig cifar(PolicyConfig policy, FlipAxis mirror_axis = FlipAxis::kHorizontal);
  /// Policy then 16 px cutout.
  static ChainConfig svhn(PolicyConfig policy);
  static ChainConfig preset(ChainPreset preset, PolicyConfig policy,
                            FlipAxis mirror_axis = FlipAxis::kHorizontal);

  /// At most one fixed cutout in post_ops; probabilities in [0, 1]; pads >= 0.
  void validate() const;
  /// True when the last post op is a fixed cutout, which is applied after normalization.
  bool has_trailing_cutout() const;
};

/// Draw record of one executed chain step.
struct StepRecord {
  enum class Kind { kMirror, kPadCrop, kFixedCutout };
  Kind kind = Kind::kMirror;
  FlipAxis axis = FlipAxis::kHorizontal;  // mirror
  int size = 0;                           // pad (pad-crop) or side (cutout)
  Point point;                            // crop origin or cutout center

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct ChainRecord {
  std::vector<StepRecord> pre;  // only mirrors that fired are listed
  AugRecord policy;
  std::vector<StepRecord> post;

  friend bool operator==(const ChainRecord&, const ChainRecord&) = default;
};

/// Real-valued normalized image, HWC layout.
struct Tensor {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  float at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
};

struct ChainResult {
  Image image;
  std::optional<Tensor> tensor;
  ChainRecord record;
};

Tensor normalize(const Image& img, const Normalization& norm);

ChainResult run_chain(const Image& img, const ChainConfig& chain, RngState& rng,
                      const PartnerPool* pool = nullptr);

/// Rebuild a chain output from its record. Needs the chain only for the
/// policy space, the fill color and normalization.
ChainResult replay_chain(const Image& img, const ChainConfig& chain, const ChainRecord& record,
                         const PartnerLookup& partners = {});

// Corpus generation.

inline constexpr int kDefaultBatchSize = 128;
inline constexpr const char* kManifestName = "manifest.jsonl";
inline constexpr const char* kIncompleteMarker = ".incomplete";

struct CorpusOptions {
  int replicas = kDefaultReplicas;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Sample-pairing partners come from consecutive groups of this many images.
  int batch_size = kDefaultBatchSize;
};

struct CorpusSummary {
  std::uint64_t images = 0;
  std::uint64_t outputs = 0;
  std::vector<std::string> ingest_errors;
  double seconds = 0.0;
};

/// Writes {index}_{replica}.png for every decodable input plus manifest.jsonl
/// (one header line then one record per output, in (index, replica) order).
/// Output bytes depend only on (source, chain, seed, replicas, batch_size).
/// On an I/O failure the marker file .incomplete is left in out_dir and
/// IoError is thrown.
CorpusSummary augment_corpus(const DatasetSource& src, const ChainConfig& chain,
                             const std::filesystem::path& out_dir, const CorpusOptions& opts);

struct ReplaySummary {
  std::uint64_t records = 0;
  std::uint64_t matched = 0;
  std::uint64_t written = 0;
  std::uint64_t mismatched = 0;
  std::string first_mismatch;
  std::vector<std::string> errors;

  bool ok() const { return mismatched == 0 && errors.empty(); }
};

/// Regenerates every output listed in a manifest. Existing files in out_dir
/// are compared byte-for-byte; missing files are written. `input` overrides
/// the source path recorded in the manifest header.
ReplaySummary replay_corpus(const std::filesystem::path& manifest,
                            const std::optional<std::filesystem::path>& input,
                            const std::filesystem::path& out_dir);

}  // namespace augkit
