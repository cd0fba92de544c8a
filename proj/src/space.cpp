#include "augkit/space.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace augkit {

namespace {

struct OpInfo {
  OpKind kind;
  std::string_view name;
};

constexpr std::array<OpInfo, kOpKindCount> kOpTable{{
    {OpKind::kIdentity, "identity"},
    {OpKind::kAutoContrast, "auto_contrast"},
    {OpKind::kEqualize, "equalize"},
    {OpKind::kRotate, "rotate"},
    {OpKind::kSolarize, "solarize"},
    {OpKind::kColor, "color"},
    {OpKind::kPosterize, "posterize"},
    {OpKind::kContrast, "contrast"},
    {OpKind::kBrightness, "brightness"},
    {OpKind::kSharpness, "sharpness"},
    {OpKind::kShearX, "shear_x"},
    {OpKind::kShearY, "shear_y"},
    {OpKind::kTranslateX, "translate_x"},
    {OpKind::kTranslateY, "translate_y"},
    {OpKind::kCutout, "cutout"},
    {OpKind::kInvert, "invert"},
    {OpKind::kFlipLr, "flip_lr"},
    {OpKind::kFlipUd, "flip_ud"},
    {OpKind::kSamplePairing, "sample_pairing"},
    {OpKind::kBlur, "blur"},
    {OpKind::kSmooth, "smooth"},
}};

struct SpaceInfo {
  SpaceName name;
  std::string_view canonical;
  std::string_view alias;
};

constexpr std::array<SpaceInfo, 7> kSpaceTable{{
    {SpaceName::kRA, "RA", "ra"},
    {SpaceName::kAA, "AA", "aa"},
    {SpaceName::kAAminusInvert, "AAminusInvert", "aa-invert"},
    {SpaceName::kUA, "UA", "ua"},
    {SpaceName::kOHL, "OHL", "ohl"},
    {SpaceName::kWide, "Wide", "wide"},
    {SpaceName::kFull, "Full", "full"},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Ranges shared by AA and RA; the Wide space swaps in the enlarged ones.
struct RangeSet {
  double rotate;
  double enhance_low;
  double enhance_high;
  double posterize_low;
  double shear;
  double translate;
};

constexpr RangeSet kStandardRanges{30.0, 0.1, 1.9, 4.0, 0.3, 10.0};
constexpr RangeSet kWideRanges{135.0, 0.01, 2.0, 2.0, 0.99, 32.0};

std::vector<SpaceOp> ra_ops(const RangeSet& r) {
  const auto enhancer = StrengthRange::interval(r.enhance_low, r.enhance_high, true);
  return {
      {OpKind::kIdentity, StrengthRange::none()},
      {OpKind::kAutoContrast, StrengthRange::none()},
      {OpKind::kEqualize, StrengthRange::none()},
      {OpKind::kRotate, StrengthRange::magnitude(r.rotate, true)},
      {OpKind::kSolarize, StrengthRange::interval(0.0, 256.0, false)},
      {OpKind::kColor, enhancer},
      {OpKind::kPosterize, StrengthRange::interval(r.posterize_low, 8.0, false)},
      {OpKind::kContrast, enhancer},
      {OpKind::kBrightness, enhancer},
      {OpKind::kSharpness, enhancer},
      {OpKind::kShearX, StrengthRange::magnitude(r.shear, true)},
      {OpKind::kShearY, StrengthRange::magnitude(r.shear, true)},
      {OpKind::kTranslateX, StrengthRange::magnitude(r.translate, true)},
      {OpKind::kTranslateY, StrengthRange::magnitude(r.translate, true)},
  };
}

const SpaceOp kCutoutOp{OpKind::kCutout, StrengthRange::magnitude(0.2, false)};
const SpaceOp kInvertOp{OpKind::kInvert, StrengthRange::none()};
const SpaceOp kSamplePairingOp{OpKind::kSamplePairing, StrengthRange::magnitude(0.4, false)};

std::vector<int> all_levels() {
  std::vector<int> levels(kMaxStrength + 1);
  for (int m = 0; m <= kMaxStrength; ++m) levels[m] = m;
  return levels;
}

std::vector<SpaceOp> aa_ops() {
  auto ops = ra_ops(kStandardRanges);
  ops.push_back(kCutoutOp);
  ops.push_back(kInvertOp);
  ops.push_back(kSamplePairingOp);
  return ops;
}

}  // namespace

std::string_view op_name(OpKind op) { return kOpTable[static_cast<std::size_t>(op)].name; }

std::optional<OpKind> parse_op(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& info : kOpTable) {
    if (info.name == key) return info.kind;
  }
  return std::nullopt;
}

const std::array<OpKind, kOpKindCount>& all_op_kinds() {
  static const auto kinds = [] {
    std::array<OpKind, kOpKindCount> k{};
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = kOpTable[i].kind;
    return k;
  }();
  return kinds;
}

std::string_view space_name(SpaceName name) {
  return kSpaceTable[static_cast<std::size_t>(name)].canonical;
}

SpaceName parse_space_name(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& info : kSpaceTable) {
    if (key == lower(info.canonical) || key == info.alias) return info.name;
  }
  std::string valid;
  for (const auto& info : kSpaceTable) {
    if (!valid.empty()) valid += ", ";
    valid += info.canonical;
  }
  throw ConfigError("unknown augmentation space '" + std::string(name) + "'; valid: " + valid);
}

const std::array<SpaceName, 7>& all_space_names() {
  static const std::array<SpaceName, 7> names{SpaceName::kRA,   SpaceName::kAA,
                                              SpaceName::kAAminusInvert,
                                              SpaceName::kUA,   SpaceName::kOHL,
                                              SpaceName::kWide, SpaceName::kFull};
  return names;
}

AugmentationSpace::AugmentationSpace(SpaceName name, std::vector<SpaceOp> ops,
                                     std::vector<int> levels)
    : name_(name), ops_(std::move(ops)), levels_(std::move(levels)) {
  for (const auto& op : ops_) {
    if (!op.range.parameterless && op.range.low > op.range.high) {
      throw ConfigError("range low > high for " + std::string(op_name(op.kind)));
    }
  }
  std::sort(levels_.begin(), levels_.end());
  levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
  if (levels_.empty() || levels_.front() < 0 || levels_.back() > kMaxStrength) {
    throw ConfigError("strength levels must be a nonempty subset of 0..30");
  }
}

bool AugmentationSpace::contains(OpKind op) const {
  return std::any_of(ops_.begin(), ops_.end(), [op](const SpaceOp& s) { return s.kind == op; });
}

bool AugmentationSpace::has_level(int m) const {
  return std::binary_search(levels_.begin(), levels_.end(), m);
}

const StrengthRange& AugmentationSpace::range(OpKind op) const {
  for (const auto& s : ops_) {
    if (s.kind == op) return s.range;
  }
  throw ConfigError("op " + std::string(op_name(op)) + " is not part of space " +
                    std::string(space_name(name_)));
}

std::vector<OpKind> AugmentationSpace::op_kinds() const {
  std::vector<OpKind> kinds;
  kinds.reserve(ops_.size());
  for (const auto& s : ops_) kinds.push_back(s.kind);
  return kinds;
}

AugmentationSpace build_space(SpaceName name) {
  switch (name) {
    case SpaceName::kRA:
      return {name, ra_ops(kStandardRanges), all_levels()};
    case SpaceName::kAA:
      return {name, aa_ops(), all_levels()};
    case SpaceName::kAAminusInvert: {
      auto ops = aa_ops();
      std::erase_if(ops, [](const SpaceOp& s) { return s.kind == OpKind::kInvert; });
      return {name, std::move(ops), all_levels()};
    }
    case SpaceName::kUA: {
      auto ops = ra_ops(kStandardRanges);
      for (auto& s : ops) {
        if (s.kind == OpKind::kTranslateX || s.kind == OpKind::kTranslateY) {
          s.range = StrengthRange::magnitude(14.0, true);
        }
      }
      ops.push_back(kCutoutOp);
      ops.push_back(kInvertOp);
      return {name, std::move(ops), all_levels()};
    }
    case SpaceName::kOHL: {
      auto ops = ra_ops(kStandardRanges);
      ops.push_back(kInvertOp);
      return {name, std::move(ops), {0, 15, 30}};
    }
    case SpaceName::kWide:
      return {name, ra_ops(kWideRanges), all_levels()};
    case SpaceName::kFull: {
      auto ops = aa_ops();
      ops.push_back({OpKind::kBlur, StrengthRange::none()});
      ops.push_back({OpKind::kSmooth, StrengthRange::none()});
      ops.push_back({OpKind::kFlipLr, StrengthRange::none()});
      ops.push_back({OpKind::kFlipUd, StrengthRange::none()});
      return {name, std::move(ops), all_levels()};
    }
  }
  throw ConfigError("unhandled space");
}

AugmentationSpace build_space(std::string_view name) { return build_space(parse_space_name(name)); }

bool op_is_parameterless(OpKind op) {
  switch (op) {
    case OpKind::kIdentity:
    case OpKind::kAutoContrast:
    case OpKind::kEqualize:
    case OpKind::kInvert:
    case OpKind::kFlipLr:
    case OpKind::kFlipUd:
    case OpKind::kBlur:
    case OpKind::kSmooth:
      return true;
    default:
      return false;
  }
}

bool op_is_signed(OpKind op, const AugmentationSpace& space) { return space.range(op).is_signed; }

double map_strength(OpKind op, int m, const AugmentationSpace& space, int sign) {
  const StrengthRange& r = space.range(op);
  if (!space.has_level(m)) {
    throw ConfigError("strength " + std::to_string(m) + " is not a level of space " +
                      std::string(space_name(space.name())));
  }
  if (r.parameterless) return 0.0;
  if (r.is_signed && sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
  const double t = static_cast<double>(m) / kMaxStrength;
  const double s = r.is_signed ? sign : 1.0;

  switch (op) {
    case OpKind::kRotate:
    case OpKind::kShearX:
    case OpKind::kShearY:
      return s * r.high * t;
    case OpKind::kTranslateX:
    case OpKind::kTranslateY:
      return s * round_half_away(r.high * t);
    case OpKind::kSolarize:
      return r.high * (1.0 - t);
    case OpKind::kPosterize:
      return round_half_away(r.high - (r.high - r.low) * t);
    case OpKind::kColor:
    case OpKind::kContrast:
    case OpKind::kBrightness:
    case OpKind::kSharpness: {
      // Interpolated so the end points come out exact.
      const double end = s > 0 ? r.high : r.low;
      return (1.0 - t) + t * end;
    }
    case OpKind::kCutout:
    case OpKind::kSamplePairing:
      return r.low + (r.high - r.low) * t;
    default:
      return 0.0;
  }
}

OpDraws draw_op_aux(OpKind op, const AugmentationSpace& space, const Image& img, RngState& rng) {
  OpDraws d;
  if (op_is_signed(op, space)) d.sign = rng.sign();
  if (op == OpKind::kCutout) {
    const int x = rng.uniform_int(0, img.width() - 1);
    const int y = rng.uniform_int(0, img.height() - 1);
    d.center = Point{x, y};
  }
  return d;
}

Image apply_resolved(const Image& img, OpKind op, int m, const AugmentationSpace& space,
                     const OpDraws& draws, const Image* partner, Rgb fill) {
  const double v = map_strength(op, m, space, draws.sign);
  switch (op) {
    case OpKind::kIdentity:
      return img;
    case OpKind::kAutoContrast:
      return autocontrast(img);
    case OpKind::kEqualize:
      return equalize(img);
    case OpKind::kRotate: {
      if (v == 0.0) return img;
      auto p = AffineParams::rotation(v, img.width(), img.height());
      p.fill = fill;
      return warp_affine(img, p);
    }
    case OpKind::kShearX:
    case OpKind::kShearY: {
      if (v == 0.0) return img;
      auto p = op == OpKind::kShearX ? AffineParams::shear_x(v) : AffineParams::shear_y(v);
      p.fill = fill;
      return warp_affine(img, p);
    }
    case OpKind::kTranslateX:
    case OpKind::kTranslateY: {
      if (v == 0.0) return img;
      auto p = op == OpKind::kTranslateX ? AffineParams::translation(v, 0)
                                         : AffineParams::translation(0, v);
      p.fill = fill;
      return warp_affine(img, p);
    }
    case OpKind::kSolarize:
      return pixel_map(img, PixelMap::solarize(static_cast<int>(round_half_away(v))));
    case OpKind::kPosterize:
      return pixel_map(img, PixelMap::posterize(static_cast<int>(v)));
    case OpKind::kColor:
      return enhance(img, EnhanceKind::kColor, v);
    case OpKind::kContrast:
      return enhance(img, EnhanceKind::kContrast, v);
    case OpKind::kBrightness:
      return enhance(img, EnhanceKind::kBrightness, v);
    case OpKind::kSharpness:
      return enhance(img, EnhanceKind::kSharpness, v);
    case OpKind::kCutout: {
      if (!draws.center) throw ConfigError("cutout requires a center");
      return cutout(img, v, *draws.center, fill);
    }
    case OpKind::kInvert:
      return pixel_map(img, PixelMap::invert());
    case OpKind::kFlipLr:
      return flip(img, FlipAxis::kHorizontal);
    case OpKind::kFlipUd:
      return flip(img, FlipAxis::kVertical);
    case OpKind::kSamplePairing:
      if (partner == nullptr) throw ConfigError("sample_pairing requires a partner image");
      return blend_pair(img, *partner, v);
    case OpKind::kBlur:
      return convolve(img, Kernel::blur());
    case OpKind::kSmooth:
      return convolve(img, Kernel::smooth());
  }
  return img;
}

Image apply_op(const Image& img, OpKind op, int m, const AugmentationSpace& space, RngState& rng,
               const Image* partner, Rgb fill) {
  if (op == OpKind::kSamplePairing && partner == nullptr) {
    throw ConfigError("sample_pairing requires a partner image");
  }
  const OpDraws draws = draw_op_aux(op, space, img, rng);
  return apply_resolved(img, op, m, space, draws, partner, fill);
}

}  // namespace augkit
