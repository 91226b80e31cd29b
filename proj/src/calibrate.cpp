#include "layersplit/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "layersplit/parallel.hpp"

namespace layersplit {

double ErrorSurface::weight(int k) const {
  return std::min(1.0, k * grid_step);
}

LayerPair apply_weights(const LayerPair& layers, const WeightPair& w) {
  check_layers(layers);
  const auto bad = [](double v) { return !(v >= 0.0 && v <= 1.0); };
  if (bad(w.w1) || bad(w.w2)) {
    std::ostringstream msg;
    msg << "weights (" << w.w1 << ", " << w.w2 << ") outside [0,1]";
    throw Error(ErrorCode::DomainError, msg.str());
  }
  const auto scale = [](const Image2D& img, double s) {
    std::vector<double> out(img.pixels().begin(), img.pixels().end());
    for (double& v : out) v *= s;
    return Image2D(img.width(), img.height(), std::move(out));
  };
  LayerPair out = layers;
  out.x = scale(layers.x, w.w1);
  out.y = scale(layers.y, w.w2);
  return out;
}

ErrorSurface error_surface(const LayerPair& layers, const Image2D& observed,
                           double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    std::ostringstream msg;
    msg << "grid_step must lie in (0, 0.5], got " << grid_step;
    throw Error(ErrorCode::ConfigError, msg.str());
  }
  check_layers(layers);
  if (observed.width() != layers.x.width() ||
      observed.height() != layers.x.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "observed crop does not match layer dimensions");
  }

  ErrorSurface surface;
  surface.grid_step = grid_step;
  // The epsilon keeps steps like 0.01 from losing the final grid point.
  surface.n = static_cast<int>(std::floor(1.0 / grid_step + 1e-9)) + 1;
  const std::size_t n = static_cast<std::size_t>(surface.n);
  surface.values.assign(n * n, 0.0);
  parallel_for(0, n * n, [&](std::size_t k) {
    const WeightPair w{surface.weight(static_cast<int>(k / n)),
                       surface.weight(static_cast<int>(k % n))};
    surface.values[k] = objective(apply_weights(layers, w), observed);
  });
  return surface;
}

WeightPair best_weights(const ErrorSurface& surface) {
  if (surface.values.empty()) {
    throw Error(ErrorCode::EmptyRegion, "error surface is empty");
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < surface.values.size(); ++k)
    if (surface.values[k] < surface.values[best]) best = k;
  const auto n = static_cast<std::size_t>(surface.n);
  return {surface.weight(static_cast<int>(best / n)),
          surface.weight(static_cast<int>(best % n))};
}

}  // namespace layersplit
