#pragma once

#include <vector>

#include "layersplit/core.hpp"

namespace layersplit {

/// Fixed assumptions of the imaging model. Not tunable; exported so
/// reports can state them.
struct ModelConstants {
  static constexpr double source_intensity = 1.0;
  static constexpr double absorption = 0.0;
  static constexpr int bounce_paths = 2;
};

/// Two reflectance layers over the overlap's crop window.
///
/// `x` is the top tissue (light hits it first), `y` the one beneath it.
/// `valid` is the overlap mask cropped to `window`; every per-pixel
/// computation is restricted to it.
struct LayerPair {
  CropWindow window;
  Image2D x;
  Image2D y;
  Mask2D valid;
};

/// Throws DimensionMismatch unless x, y and valid share the window size.
void check_layers(const LayerPair& layers);

/// Observed intensity of a two-layer stack with unit source light:
/// z = x + y(1-x)^2 + x y^2 (1-x)^2.
double compose(double x, double y);

/// Partial derivatives of compose.
double dz_dx(double x, double y);
double dz_dy(double x, double y);

/// Pixelwise compose over `layers.valid`; 0 elsewhere.
Image2D compose_field(const LayerPair& layers);

/// Mean squared error between the composite and `observed` over the
/// validity mask. Summation runs in row-major order with Neumaier
/// compensation, so the value is independent of threading.
double objective(const LayerPair& layers, const Image2D& observed);

struct Gradient {
  int width = 0;
  int height = 0;
  std::vector<double> gx;
  std::vector<double> gy;
};

/// Exact gradient of objective(): 2/|valid| * (z - z') * dz/d{x,y}, zero
/// outside the validity mask.
Gradient gradient(const LayerPair& layers, const Image2D& observed);

}  // namespace layersplit
