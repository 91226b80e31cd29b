#pragma once

#include <vector>

#include "layersplit/model.hpp"

namespace layersplit {

/// Global scale factors for the two layers, each in [0,1].
struct WeightPair {
  double w1 = 1.0;  // applied to x
  double w2 = 1.0;  // applied to y

  bool operator==(const WeightPair&) const = default;
};

/// Objective values on the regular grid (i*step, j*step), i,j in [0,n).
/// values is row-major in i: values[i*n + j].
struct ErrorSurface {
  double grid_step = 0.01;
  int n = 0;
  std::vector<double> values;

  double weight(int k) const;
  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * n + j];
  }
};

LayerPair apply_weights(const LayerPair& layers, const WeightPair& w);

/// Sweeps every grid weight pair; n = floor(1/grid_step) + 1.
/// grid_step must lie in (0, 0.5].
ErrorSurface error_surface(const LayerPair& layers, const Image2D& observed,
                           double grid_step = 0.01);

/// Grid minimum; ties go to the smallest i, then the smallest j.
WeightPair best_weights(const ErrorSurface& surface);

}  // namespace layersplit
