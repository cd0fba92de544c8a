#include "augkit/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "augkit/imgcore.hpp"
#include "augkit/policy.hpp"
#include "augkit/space.hpp"
#include "augkit/stats.hpp"

namespace augkit {

namespace {

using OpSet = std::set<OpKind>;
using Mapper = std::function<double(OpKind, int, const AugmentationSpace&, int)>;

OpSet op_set(SpaceName name) {
  const auto kinds = build_space(name).op_kinds();
  return {kinds.begin(), kinds.end()};
}

OpSet with(OpSet s, std::initializer_list<OpKind> add) {
  s.insert(add.begin(), add.end());
  return s;
}

OpSet without(OpSet s, std::initializer_list<OpKind> remove) {
  for (OpKind op : remove) s.erase(op);
  return s;
}

Image random_image(RngState& rng, int w, int h) {
  Image img(w, h);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.next_u64() >> 56);
  return img;
}

double identity_param(OpKind op) {
  switch (op) {
    case OpKind::kSolarize:
      return 256.0;
    case OpKind::kPosterize:
      return 8.0;
    case OpKind::kColor:
    case OpKind::kContrast:
    case OpKind::kBrightness:
    case OpKind::kSharpness:
      return 1.0;
    default:
      return 0.0;
  }
}

CheckResult check_space_algebra() {
  CheckResult r{"space_algebra", true, ""};
  std::ostringstream why;
  const std::map<SpaceName, std::size_t> sizes{
      {SpaceName::kRA, 14}, {SpaceName::kAA, 17},  {SpaceName::kAAminusInvert, 16},
      {SpaceName::kUA, 16}, {SpaceName::kOHL, 15}, {SpaceName::kWide, 14},
      {SpaceName::kFull, 21}};
  for (const auto& [name, size] : sizes) {
    const auto got = build_space(name).ops().size();
    if (got != size) {
      r.passed = false;
      why << space_name(name) << " has " << got << " ops, expected " << size << "; ";
    }
  }
  const OpSet ra = op_set(SpaceName::kRA);
  const OpSet aa = op_set(SpaceName::kAA);
  auto expect = [&](bool ok, const char* what) {
    if (!ok) {
      r.passed = false;
      why << what << " violated; ";
    }
  };
  expect(ra == without(aa, {OpKind::kSamplePairing, OpKind::kInvert, OpKind::kCutout}),
         "RA = AA - {sample_pairing, invert, cutout}");
  expect(op_set(SpaceName::kUA) == without(aa, {OpKind::kSamplePairing}), "UA = AA - {sample_pairing}");
  expect(op_set(SpaceName::kAAminusInvert) == without(aa, {OpKind::kInvert}),
         "AAminusInvert = AA - {invert}");
  expect(op_set(SpaceName::kOHL) == with(ra, {OpKind::kInvert}), "OHL = RA + {invert}");
  expect(op_set(SpaceName::kFull) ==
             with(aa, {OpKind::kBlur, OpKind::kSmooth, OpKind::kFlipLr, OpKind::kFlipUd}),
         "Full = AA + {blur, smooth, flip_lr, flip_ud}");
  expect(op_set(SpaceName::kWide) == ra, "Wide has RA's ops");
  expect(build_space(SpaceName::kOHL).levels().size() == 3, "OHL has 3 levels");
  r.detail = why.str();
  return r;
}

CheckResult check_pixel_oracles(RngState& rng) {
  CheckResult r{"pixel_oracles", true, ""};
  std::ostringstream why;
  auto expect = [&](bool ok, const char* what) {
    if (!ok && r.passed) why << what;
    if (!ok) r.passed = false;
  };
  for (int i = 0; i < 20; ++i) {
    const Image img = random_image(rng, 32, 32);
    const Image inv = pixel_map(img, PixelMap::invert());
    expect(pixel_map(inv, PixelMap::invert()) == img, "invert twice != identity");
    expect(pixel_map(img, PixelMap::solarize(0)) == inv, "solarize(0) != invert");
    expect(pixel_map(img, PixelMap::solarize(256)) == img, "solarize(256) != identity");
    expect(pixel_map(img, PixelMap::posterize(8)) == img, "posterize(8) != identity");
    for (auto axis : {FlipAxis::kHorizontal, FlipAxis::kVertical}) {
      expect(flip(flip(img, axis), axis) == img, "flip twice != identity");
    }
    for (auto kind : {EnhanceKind::kColor, EnhanceKind::kContrast, EnhanceKind::kBrightness,
                      EnhanceKind::kSharpness}) {
      expect(enhance(img, kind, 1.0) == img, "enhance(1.0) != identity");
    }
    expect(blend_pair(img, inv, 0.0) == img, "blend_pair(w=0) != identity");
    for (auto interp : {Interpolation::kNearest, Interpolation::kBilinear}) {
      AffineParams p;
      p.interpolation = interp;
      expect(warp_affine(img, p) == img, "identity warp changed pixels");
    }
  }
  r.detail = why.str();
  return r;
}

CheckResult check_identity_at_zero(RngState& rng) {
  CheckResult r{"identity_at_zero", true, ""};
  std::ostringstream why;
  const Image img = random_image(rng, 32, 32);
  const Image partner = random_image(rng, 32, 32);
  for (SpaceName name : all_space_names()) {
    const auto space = build_space(name);
    for (const auto& s : space.ops()) {
      if (s.range.parameterless) continue;
      for (int sign : {1, -1}) {
        OpDraws d;
        d.sign = sign;
        d.center = Point{16, 16};
        const Image out = apply_resolved(img, s.kind, 0, space, d, &partner);
        if (!(out == img)) {
          r.passed = false;
          why << space_name(name) << "/" << op_name(s.kind) << " sign " << sign << "; ";
        }
      }
    }
  }
  r.detail = why.str();
  return r;
}

CheckResult check_monotonicity(const Mapper& mapper) {
  CheckResult r{"strength_monotonicity", true, ""};
  std::ostringstream why;
  for (SpaceName name : all_space_names()) {
    const auto space = build_space(name);
    for (const auto& s : space.ops()) {
      if (s.range.parameterless) continue;
      for (int sign : {1, -1}) {
        double prev = -1.0;
        for (int m : space.levels()) {
          const double dist = std::fabs(mapper(s.kind, m, space, sign) - identity_param(s.kind));
          if (dist < prev) {
            r.passed = false;
            why << space_name(name) << "/" << op_name(s.kind) << " decreases at m=" << m << "; ";
            break;
          }
          prev = dist;
        }
      }
    }
  }
  r.detail = why.str();
  return r;
}

CheckResult check_record_replay(RngState& rng) {
  CheckResult r{"record_replay", true, ""};
  std::ostringstream why;
  std::vector<Image> batch;
  for (int i = 0; i < 4; ++i) batch.push_back(random_image(rng, 24, 24));
  const PartnerLookup lookup = [&batch](std::uint64_t id) -> const Image* {
    return id < batch.size() ? &batch[id] : nullptr;
  };
  const std::vector<PolicyConfig> configs{
      PolicyConfig::ta(build_space(SpaceName::kFull)),
      PolicyConfig::ra(build_space(SpaceName::kAA), 3, 17),
      PolicyConfig::ua(build_space(SpaceName::kUA)),
      PolicyConfig::ta(build_space(SpaceName::kWide)),
  };
  for (const auto& cfg : configs) {
    for (int i = 0; i < 100; ++i) {
      const std::size_t self = static_cast<std::size_t>(i) % batch.size();
      const PartnerPool pool{batch, self, 0, {}};
      RngState stream(rng.seed(), derive_stream(rng.seed(), 77, static_cast<std::uint64_t>(i)));
      const auto [out, rec] = policy_transform(batch[self], cfg, stream, &pool);
      if (!(replay_record(batch[self], rec, cfg.space, lookup) == out)) {
        r.passed = false;
        why << policy_name(cfg.kind) << "/" << space_name(cfg.space.name()) << " draw " << i
            << " did not replay; ";
        break;
      }
    }
  }
  r.detail = why.str();
  return r;
}

CheckResult check_ta_uniformity(std::uint64_t draws, std::uint64_t seed) {
  CheckResult r{"ta_uniformity", true, ""};
  const auto cfg = PolicyConfig::ta(build_space(SpaceName::kRA));
  const auto ops = cfg.effective_ops();
  const auto levels = cfg.effective_strengths();
  std::vector<std::uint64_t> counts(ops.size() * levels.size(), 0);
  const Image img(4, 4, Rgb{90, 140, 200});
  for (std::uint64_t i = 0; i < draws; ++i) {
    RngState rng(seed, derive_stream(seed, i, 0));
    const auto [out, rec] = ta_transform(img, cfg, rng);
    const auto& a = rec.ops.front();
    const auto op_pos = static_cast<std::size_t>(
        std::find(ops.begin(), ops.end(), a.op) - ops.begin());
    ++counts[op_pos * levels.size() + static_cast<std::size_t>(a.m)];
  }
  const auto u = stats::uniformity_test(counts);
  r.passed = u.p_value > 0.001;
  std::ostringstream why;
  why << "chi2=" << u.statistic << " p=" << u.p_value << " cells=" << u.cells;
  r.detail = why.str();
  return r;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& opts) {
  if (opts.draws < kMinSelfcheckDraws) {
    throw ConfigError("selfcheck needs at least " + std::to_string(kMinSelfcheckDraws) +
                      " draws for the chi-square test");
  }
  Mapper mapper = [](OpKind op, int m, const AugmentationSpace& space, int sign) {
    return map_strength(op, m, space, sign);
  };
  if (opts.corrupt_strength_mapping) {
    mapper = [](OpKind op, int m, const AugmentationSpace& space, int sign) {
      if (op == OpKind::kRotate) m = kMaxStrength - m;
      return map_strength(op, m, space, sign);
    };
  }
  RngState rng(opts.seed, 0x5E1FC4ECull);
  std::vector<CheckResult> results;
  results.push_back(check_space_algebra());
  results.push_back(check_pixel_oracles(rng));
  results.push_back(check_identity_at_zero(rng));
  results.push_back(check_monotonicity(mapper));
  results.push_back(check_record_replay(rng));
  results.push_back(check_ta_uniformity(opts.draws, opts.seed));
  return results;
}

}  // namespace augkit
