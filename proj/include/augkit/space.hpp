#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "augkit/image.hpp"
#include "augkit/imgcore.hpp"
#include "augkit/rng.hpp"

namespace augkit {

enum class OpKind {
  kIdentity,
  kAutoContrast,
  kEqualize,
  kRotate,
  kSolarize,
  kColor,
  kPosterize,
  kContrast,
  kBrightness,
  kSharpness,
  kShearX,
  kShearY,
  kTranslateX,
  kTranslateY,
  kCutout,
  kInvert,
  kFlipLr,
  kFlipUd,
  kSamplePairing,
  kBlur,
  kSmooth,
};

inline constexpr int kOpKindCount = 21;
inline constexpr int kMaxStrength = 30;

std::string_view op_name(OpKind op);
std::optional<OpKind> parse_op(std::string_view name);
const std::array<OpKind, kOpKindCount>& all_op_kinds();

/// Parameter range of one op within a space.
///
/// For signed ops (rotate, shear, translate, the four enhancers) a random
/// direction is drawn at application time. Geometric ops store magnitudes,
/// so `low` is 0 and `high` is the maximum magnitude; enhancers store the
/// printed factor interval around 1.
struct StrengthRange {
  double low = 0.0;
  double high = 0.0;
  bool is_signed = false;
  bool parameterless = true;

  static StrengthRange none() { return {}; }
  static StrengthRange magnitude(double max, bool is_signed) {
    return {0.0, max, is_signed, false};
  }
  static StrengthRange interval(double low, double high, bool is_signed) {
    return {low, high, is_signed, false};
  }

  friend bool operator==(const StrengthRange&, const StrengthRange&) = default;
};

struct SpaceOp {
  OpKind kind;
  StrengthRange range;
};

enum class SpaceName { kRA, kAA, kAAminusInvert, kUA, kOHL, kWide, kFull };

std::string_view space_name(SpaceName name);
/// Accepts canonical names ("RA", "AAminusInvert") and lower-case CLI
/// aliases ("ra", "aa-invert"); throws ConfigError listing valid names.
SpaceName parse_space_name(std::string_view name);
const std::array<SpaceName, 7>& all_space_names();

class AugmentationSpace {
 public:
  AugmentationSpace(SpaceName name, std::vector<SpaceOp> ops, std::vector<int> levels);

  SpaceName name() const { return name_; }
  const std::vector<SpaceOp>& ops() const { return ops_; }
  const std::vector<int>& levels() const { return levels_; }

  bool contains(OpKind op) const;
  bool has_level(int m) const;
  /// Throws ConfigError if op is not part of the space.
  const StrengthRange& range(OpKind op) const;
  std::vector<OpKind> op_kinds() const;

 private:
  SpaceName name_;
  std::vector<SpaceOp> ops_;
  std::vector<int> levels_;
};

AugmentationSpace build_space(SpaceName name);
AugmentationSpace build_space(std::string_view name);

/// Concrete op parameter for strength m (see map_strength).
double map_strength(OpKind op, int m, const AugmentationSpace& space, int sign);

bool op_is_signed(OpKind op, const AugmentationSpace& space);
bool op_is_parameterless(OpKind op);

/// Random draws that accompany an op application besides the strength.
struct OpDraws {
  int sign = 1;
  std::optional<Point> center;  // cutout
};

/// Draw the sign (signed ops) and cutout center (cutout) for one application.
OpDraws draw_op_aux(OpKind op, const AugmentationSpace& space, const Image& img, RngState& rng);

/// Apply op at strength m with already-drawn auxiliary values. Deterministic.
/// Throws ConfigError for sample_pairing without a partner, an op outside the
/// space or m outside the space's levels.
Image apply_resolved(const Image& img, OpKind op, int m, const AugmentationSpace& space,
                     const OpDraws& draws, const Image* partner = nullptr,
                     Rgb fill = kMidGray);

/// Draw auxiliaries from rng and apply.
Image apply_op(const Image& img, OpKind op, int m, const AugmentationSpace& space, RngState& rng,
               const Image* partner = nullptr, Rgb fill = kMidGray);

}  // namespace augkit
