#pragma once

// Pixel-exact primitive image operations. Every function is pure and returns
// a new image of the same dimensions as its input.

#include <array>
#include <cstdint>
#include <vector>

#include "augkit/image.hpp"

namespace augkit {

enum class Interpolation { kNearest, kBilinear };

/// 2x3 matrix mapping output coordinates to input coordinates.
/// Coordinates refer to pixel centers: output pixel (x, y) is sampled at
/// matrix * (x + 0.5, y + 0.5, 1).
struct AffineParams {
  std::array<double, 6> m{1, 0, 0, 0, 1, 0};
  Rgb fill = kMidGray;
  Interpolation interpolation = Interpolation::kNearest;

  static AffineParams identity() { return {}; }
  /// Rotation about the image center, counter-clockwise for positive degrees.
  static AffineParams rotation(double degrees, int width, int height);
  static AffineParams shear_x(double factor);
  static AffineParams shear_y(double factor);
  static AffineParams translation(double dx, double dy);
};

struct Kernel {
  int size = 1;
  std::vector<int> weights{1};
  int scale = 1;

  /// Throws ConfigError on even side length, wrong weight count or scale <= 0.
  void validate() const;

  static Kernel blur();
  static Kernel smooth();
};

enum class EnhanceKind { kColor, kContrast, kBrightness, kSharpness };
enum class FlipAxis { kHorizontal, kVertical };

struct PixelMap {
  enum class Kind { kInvert, kSolarize, kPosterize };
  Kind kind = Kind::kInvert;
  int threshold = 256;  // solarize: pixels >= threshold are inverted
  int bits = 8;         // posterize: number of high bits kept

  static PixelMap invert() { return {Kind::kInvert, 256, 8}; }
  static PixelMap solarize(int threshold) { return {Kind::kSolarize, threshold, 8}; }
  static PixelMap posterize(int bits) { return {Kind::kPosterize, 256, bits}; }
};

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Round half away from zero; the single real -> integer rule of the engine.
double round_half_away(double v);
std::uint8_t saturate_u8(double v);

Image warp_affine(const Image& img, const AffineParams& p);
Image convolve(const Image& img, const Kernel& k);
Image equalize(const Image& img);
Image autocontrast(const Image& img);
Image pixel_map(const Image& img, const PixelMap& map);
Image enhance(const Image& img, EnhanceKind kind, double factor);

/// Grayscale L = round((299 R + 587 G + 114 B) / 1000), replicated to all channels.
Image grayscale(const Image& img);

/// Square of side round(frac * min(width, height)) centered at `center`.
Image cutout(const Image& img, double frac, Point center, Rgb fill = kMidGray);
/// Square with an absolute side length, clipped to the image.
Image cutout_side(const Image& img, int side, Point center, Rgb fill = kMidGray);

/// Half-open pixel rectangle covered by a cutout square, already clipped.
struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  int area() const { return (x1 - x0) * (y1 - y0); }
};
Rect cutout_rect(int width, int height, int side, Point center);

/// (1 - w) * a + w * b; throws IncompatibleImages on a dimension mismatch.
Image blend_pair(const Image& a, const Image& b, double w);
Image flip(const Image& img, FlipAxis axis);
/// Zero-pad by `pad` on every side and crop the original size at `origin`.
/// Throws ConfigError when origin is outside [0, 2 * pad].
Image pad_and_crop(const Image& img, int pad, Point origin);

}  // namespace augkit
