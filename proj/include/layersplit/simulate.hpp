#pragma once

#include <cstdint>
#include <variant>

#include "layersplit/core.hpp"

namespace layersplit {

namespace texture {

struct Constant {
  double value = 0.0;
};

enum class Orientation { Vertical, Horizontal };

/// Bands of `period` pixels: the first half at `lo`, the second at `hi`.
/// Vertical stripes vary along x.
struct Stripes {
  int period = 4;
  double lo = 0.0;
  double hi = 1.0;
  Orientation orientation = Orientation::Vertical;
};

struct Checker {
  int cell = 4;
  double lo = 0.0;
  double hi = 1.0;
};

/// Samples `source` at canvas coordinates, tiling when it is smaller.
struct FromImage {
  Image2D source;
};

}  // namespace texture

using Texture = std::variant<texture::Constant, texture::Stripes,
                             texture::Checker, texture::FromImage>;

/// Reflectance of `tex` at canvas pixel (x, y).
double sample(const Texture& tex, int x, int y);

/// Synthetic two-tissue scene. tissue1 is the top layer (coefficient x),
/// tissue2 lies beneath it (coefficient y).
struct SceneSpec {
  int width = 64;
  int height = 64;
  CropWindow tissue1_rect;
  CropWindow tissue2_rect;
  Texture tissue1_texture = texture::Constant{0.4};
  Texture tissue2_texture = texture::Constant{0.6};
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;
  /// Neighborhoods keep each tissue's exclusive pixels within this many
  /// pixels of the overlap's bounding box.
  int neighborhood_margin = 16;
};

struct SyntheticCase {
  Image2D composite;
  RegionSpec regions;
  Image2D truth_x;  // over the overlap's bounding window
  Image2D truth_y;
};

/// Renders the scene: background 0, single-tissue pixels carry their
/// texture, overlap pixels carry compose(x, y); optional Gaussian noise is
/// added to tissue pixels and clamped.
SyntheticCase simulate_overlap(const SceneSpec& spec);

struct Metrics {
  double mse = 0.0;
  /// 10 log10(1 / mse); +infinity when mse == 0.
  double psnr = 0.0;
  double max_abs_error = 0.0;
};

Metrics evaluate(const Image2D& recovered, const Image2D& truth,
                 const Mask2D& mask);

}  // namespace layersplit
