#include "augkit/imgcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace augkit {

double round_half_away(double v) { return std::round(v); }

std::uint8_t saturate_u8(double v) {
  const double r = round_half_away(v);
  if (r <= 0.0) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

namespace {

std::uint8_t clamp_u8(long v) { return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L)); }

using Lut = std::array<std::uint8_t, 256>;

Image apply_luts(const Image& img, const std::array<Lut, 3>& luts) {
  Image out = img;
  auto px = out.data();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    px[i] = luts[0][px[i]];
    px[i + 1] = luts[1][px[i + 1]];
    px[i + 2] = luts[2][px[i + 2]];
  }
  return out;
}

std::array<std::array<std::size_t, 256>, 3> histograms(const Image& img) {
  std::array<std::array<std::size_t, 256>, 3> h{};
  const auto px = img.data();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    ++h[0][px[i]];
    ++h[1][px[i + 1]];
    ++h[2][px[i + 2]];
  }
  return h;
}

Lut identity_lut() {
  Lut lut{};
  for (int i = 0; i < 256; ++i) lut[i] = static_cast<std::uint8_t>(i);
  return lut;
}

// Blend toward a degenerate image: degenerate + factor * (img - degenerate).
Image blend_toward(const Image& img, const Image& degenerate, double factor) {
  Image out = img;
  auto dst = out.data();
  const auto src = img.data();
  const auto deg = degenerate.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double d = deg[i];
    dst[i] = saturate_u8(d + factor * (static_cast<double>(src[i]) - d));
  }
  return out;
}

}  // namespace

AffineParams AffineParams::rotation(double degrees, int width, int height) {
  AffineParams p;
  const double a = -degrees * std::numbers::pi / 180.0;
  const double c = degrees == 0.0 ? 1.0 : std::cos(a);
  const double s = degrees == 0.0 ? 0.0 : std::sin(a);
  const double cx = width / 2.0;
  const double cy = height / 2.0;
  p.m = {c, s, cx - (c * cx + s * cy), -s, c, cy - (-s * cx + c * cy)};
  return p;
}

AffineParams AffineParams::shear_x(double factor) {
  AffineParams p;
  p.m = {1, factor, 0, 0, 1, 0};
  return p;
}

AffineParams AffineParams::shear_y(double factor) {
  AffineParams p;
  p.m = {1, 0, 0, factor, 1, 0};
  return p;
}

AffineParams AffineParams::translation(double dx, double dy) {
  AffineParams p;
  p.m = {1, 0, dx, 0, 1, dy};
  return p;
}

Image warp_affine(const Image& img, const AffineParams& p) {
  const int w = img.width();
  const int h = img.height();
  Image out(w, h);
  const auto& m = p.m;
  const std::array<std::uint8_t, 3> fill{p.fill.r, p.fill.g, p.fill.b};
  const auto src = img.data();
  auto dst = out.data();

  if (p.interpolation == Interpolation::kNearest) {
    for (int y = 0; y < h; ++y) {
      const double oy = y + 0.5;
      for (int x = 0; x < w; ++x) {
        const double ox = x + 0.5;
        const double u = m[0] * ox + m[1] * oy + m[2];
        const double v = m[3] * ox + m[4] * oy + m[5];
        const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
        // Comparison form also rejects NaN.
        if (!(u >= 0.0 && u < w && v >= 0.0 && v < h)) {
          dst[o] = fill[0];
          dst[o + 1] = fill[1];
          dst[o + 2] = fill[2];
          continue;
        }
        const std::size_t s =
            (static_cast<std::size_t>(v) * w + static_cast<std::size_t>(u)) * 3;
        dst[o] = src[s];
        dst[o + 1] = src[s + 1];
        dst[o + 2] = src[s + 2];
      }
    }
    return out;
  }

  auto sample = [&](int sx, int sy, int c) -> double {
    if (sx < 0 || sx >= w || sy < 0 || sy >= h) return fill[c];
    return src[(static_cast<std::size_t>(sy) * w + sx) * 3 + c];
  };
  for (int y = 0; y < h; ++y) {
    const double oy = y + 0.5;
    for (int x = 0; x < w; ++x) {
      const double ox = x + 0.5;
      const double u = m[0] * ox + m[1] * oy + m[2];
      const double v = m[3] * ox + m[4] * oy + m[5];
      const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
      if (!(u >= 0.0 && u < w && v >= 0.0 && v < h)) {
        dst[o] = fill[0];
        dst[o + 1] = fill[1];
        dst[o + 2] = fill[2];
        continue;
      }
      const double fu = u - 0.5;
      const double fv = v - 0.5;
      const int x0 = static_cast<int>(std::floor(fu));
      const int y0 = static_cast<int>(std::floor(fv));
      const double ax = fu - x0;
      const double ay = fv - y0;
      for (int c = 0; c < 3; ++c) {
        const double top = sample(x0, y0, c) * (1.0 - ax) + (ax == 0.0 ? 0.0 : sample(x0 + 1, y0, c) * ax);
        const double bot = ay == 0.0 ? 0.0
                                     : sample(x0, y0 + 1, c) * (1.0 - ax) +
                                           (ax == 0.0 ? 0.0 : sample(x0 + 1, y0 + 1, c) * ax);
        dst[o + c] = saturate_u8(top * (1.0 - ay) + bot * ay);
      }
    }
  }
  return out;
}

void Kernel::validate() const {
  if (size < 1 || size % 2 == 0) {
    throw ConfigError("kernel side length must be odd and positive, got " + std::to_string(size));
  }
  if (weights.size() != static_cast<std::size_t>(size) * size) {
    throw ConfigError("kernel expects " + std::to_string(size * size) + " weights, got " +
                      std::to_string(weights.size()));
  }
  if (scale <= 0) throw ConfigError("kernel scale must be positive");
}

Kernel Kernel::blur() {
  return {5,
          {1, 1, 1, 1, 1,  //
           1, 0, 0, 0, 1,  //
           1, 0, 0, 0, 1,  //
           1, 0, 0, 0, 1,  //
           1, 1, 1, 1, 1},
          16};
}

Kernel Kernel::smooth() { return {3, {1, 1, 1, 1, 5, 1, 1, 1, 1}, 13}; }

Image convolve(const Image& img, const Kernel& k) {
  k.validate();
  Image out = img;
  const int w = img.width();
  const int h = img.height();
  const int r = k.size / 2;
  if (w <= 2 * r || h <= 2 * r) return out;

  const auto src = img.data();
  auto dst = out.data();
  const long scale = k.scale;
  for (int y = r; y < h - r; ++y) {
    for (int x = r; x < w - r; ++x) {
      for (int c = 0; c < 3; ++c) {
        long sum = 0;
        for (int ky = 0; ky < k.size; ++ky) {
          const std::size_t row = static_cast<std::size_t>(y + ky - r) * w;
          for (int kx = 0; kx < k.size; ++kx) {
            sum += static_cast<long>(k.weights[ky * k.size + kx]) *
                   src[(row + (x + kx - r)) * 3 + c];
          }
        }
        // sum / scale rounded half away from zero, in integers
        const long mag = (2 * (sum < 0 ? -sum : sum) + scale) / (2 * scale);
        dst[(static_cast<std::size_t>(y) * w + x) * 3 + c] = clamp_u8(sum < 0 ? -mag : mag);
      }
    }
  }
  return out;
}

Image equalize(const Image& img) {
  const auto hist = histograms(img);
  std::array<Lut, 3> luts;
  for (int c = 0; c < 3; ++c) {
    const auto& hc = hist[c];
    luts[c] = identity_lut();
    std::size_t total = 0;
    std::size_t occupied = 0;
    std::size_t last = 0;
    for (std::size_t count : hc) {
      total += count;
      if (count != 0) {
        ++occupied;
        last = count;
      }
    }
    if (occupied <= 1) continue;
    const std::size_t step = (total - last) / 255;
    if (step == 0) continue;
    std::size_t n = step / 2;
    for (int i = 0; i < 256; ++i) {
      luts[c][i] = static_cast<std::uint8_t>(std::min<std::size_t>(n / step, 255));
      n += hc[i];
    }
  }
  return apply_luts(img, luts);
}

Image autocontrast(const Image& img) {
  const auto hist = histograms(img);
  std::array<Lut, 3> luts;
  for (int c = 0; c < 3; ++c) {
    luts[c] = identity_lut();
    int lo = 0;
    while (lo < 256 && hist[c][lo] == 0) ++lo;
    int hi = 255;
    while (hi >= 0 && hist[c][hi] == 0) --hi;
    if (hi <= lo) continue;
    const long span = hi - lo;
    for (int i = 0; i < 256; ++i) {
      // round((i - lo) * 255 / span) half away from zero
      const long num = static_cast<long>(i - lo) * 255;
      const long mag = (2 * (num < 0 ? -num : num) + span) / (2 * span);
      luts[c][i] = clamp_u8(num < 0 ? -mag : mag);
    }
  }
  return apply_luts(img, luts);
}

Image pixel_map(const Image& img, const PixelMap& map) {
  Lut lut{};
  switch (map.kind) {
    case PixelMap::Kind::kInvert:
      for (int i = 0; i < 256; ++i) lut[i] = static_cast<std::uint8_t>(255 - i);
      break;
    case PixelMap::Kind::kSolarize:
      if (map.threshold < 0 || map.threshold > 256) {
        throw ConfigError("solarize threshold must be in [0, 256], got " +
                          std::to_string(map.threshold));
      }
      for (int i = 0; i < 256; ++i) {
        lut[i] = static_cast<std::uint8_t>(i >= map.threshold ? 255 - i : i);
      }
      break;
    case PixelMap::Kind::kPosterize: {
      if (map.bits < 1 || map.bits > 8) {
        throw ConfigError("posterize bits must be in [1, 8], got " + std::to_string(map.bits));
      }
      const int mask = (0xFF << (8 - map.bits)) & 0xFF;
      for (int i = 0; i < 256; ++i) lut[i] = static_cast<std::uint8_t>(i & mask);
      break;
    }
  }
  return apply_luts(img, {lut, lut, lut});
}

Image grayscale(const Image& img) {
  Image out = img;
  auto px = out.data();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    const long l = (299L * px[i] + 587L * px[i + 1] + 114L * px[i + 2] + 500) / 1000;
    px[i] = px[i + 1] = px[i + 2] = static_cast<std::uint8_t>(l);
  }
  return out;
}

Image enhance(const Image& img, EnhanceKind kind, double factor) {
  if (!std::isfinite(factor) || factor < 0.0) {
    throw ConfigError("enhance factor must be finite and non-negative");
  }
  switch (kind) {
    case EnhanceKind::kColor:
      return blend_toward(img, grayscale(img), factor);
    case EnhanceKind::kContrast: {
      const Image gray = grayscale(img);
      std::uint64_t sum = 0;
      const auto px = gray.data();
      for (std::size_t i = 0; i < px.size(); i += 3) sum += px[i];
      const auto mean = static_cast<std::uint8_t>(
          round_half_away(static_cast<double>(sum) / static_cast<double>(gray.pixel_count())));
      return blend_toward(img, Image(img.width(), img.height(), Rgb{mean, mean, mean}), factor);
    }
    case EnhanceKind::kBrightness:
      return blend_toward(img, Image(img.width(), img.height(), Rgb{0, 0, 0}), factor);
    case EnhanceKind::kSharpness:
      return blend_toward(img, convolve(img, Kernel::smooth()), factor);
  }
  return img;
}

Rect cutout_rect(int width, int height, int side, Point center) {
  if (side <= 0) return {};
  const int x0 = center.x - side / 2;
  const int y0 = center.y - side / 2;
  Rect r{std::max(x0, 0), std::max(y0, 0), std::min(x0 + side, width), std::min(y0 + side, height)};
  if (r.x1 <= r.x0 || r.y1 <= r.y0) return {};
  return r;
}

Image cutout_side(const Image& img, int side, Point center, Rgb fill) {
  Image out = img;
  const Rect r = cutout_rect(img.width(), img.height(), side, center);
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) out.set_pixel(x, y, fill);
  }
  return out;
}

Image cutout(const Image& img, double frac, Point center, Rgb fill) {
  if (!(frac >= 0.0 && frac <= 1.0)) throw ConfigError("cutout fraction must be in [0, 1]");
  const int side =
      static_cast<int>(round_half_away(frac * std::min(img.width(), img.height())));
  return cutout_side(img, side, center, fill);
}

Image blend_pair(const Image& a, const Image& b, double w) {
  if (!a.same_shape(b)) {
    throw IncompatibleImages("sample pairing needs equal dimensions: " +
                             std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                             " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()));
  }
  Image out = a;
  auto dst = out.data();
  const auto pb = b.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = saturate_u8((1.0 - w) * dst[i] + w * pb[i]);
  }
  return out;
}

Image flip(const Image& img, FlipAxis axis) {
  const int w = img.width();
  const int h = img.height();
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int sx = axis == FlipAxis::kHorizontal ? w - 1 - x : x;
      const int sy = axis == FlipAxis::kVertical ? h - 1 - y : y;
      out.set_pixel(x, y, img.pixel(sx, sy));
    }
  }
  return out;
}

Image pad_and_crop(const Image& img, int pad, Point origin) {
  if (pad < 0) throw ConfigError("pad must be non-negative");
  if (origin.x < 0 || origin.x > 2 * pad || origin.y < 0 || origin.y > 2 * pad) {
    throw ConfigError("crop origin (" + std::to_string(origin.x) + ", " +
                      std::to_string(origin.y) + ") outside [0, " + std::to_string(2 * pad) + "]");
  }
  const int w = img.width();
  const int h = img.height();
  Image out(w, h, Rgb{0, 0, 0});
  for (int y = 0; y < h; ++y) {
    const int sy = y + origin.y - pad;
    if (sy < 0 || sy >= h) continue;
    for (int x = 0; x < w; ++x) {
      const int sx = x + origin.x - pad;
      if (sx < 0 || sx >= w) continue;
      out.set_pixel(x, y, img.pixel(sx, sy));
    }
  }
  return out;
}

}  // namespace augkit
