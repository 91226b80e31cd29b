#pragma once

#include <vector>

#include "layersplit/calibrate.hpp"
#include "layersplit/inpaint.hpp"
#include "layersplit/model.hpp"

namespace layersplit {

struct SolveConfig {
  /// Step length applied to each pixel's residual gradient
  /// 2(z - z') * dz/d{x,y}. Equivalent to alpha * |valid| on the mean
  /// objective, so a fixed value behaves the same at any region size.
  double alpha = 0.1;
  /// Stop once |G_t - G_{t-1}| < epsilon (mean squared intensity units).
  double epsilon = 1e-10;
  int max_iterations = 10000;
  /// Project x and y back onto [0,1] after every step.
  bool clamp = true;
};

void validate(const SolveConfig& cfg);

enum class StopReason { Converged, MaxIterations };

const char* to_string(StopReason reason);

struct SolveReport {
  int iterations_run = 0;
  /// G before the first step, then one entry per iteration.
  std::vector<double> objective_trace;
  StopReason stop_reason = StopReason::MaxIterations;
  WeightPair chosen_weights;
  double final_objective = 0.0;
  /// Objective evaluations including the initial one and backtracking.
  int objective_evaluations = 0;
};

struct DescentResult {
  LayerPair layers;
  SolveReport report;
};

/// Projected gradient descent on the objective with simultaneous x/y
/// updates. A step that would raise G is halved (up to 30 times) before it
/// is taken; a step that cannot be made non-increasing is skipped, which
/// registers as convergence.
DescentResult descend(const LayerPair& layers, const Image2D& observed,
                      const SolveConfig& cfg);

struct SeparationResult {
  LayerPair layers;
  Image2D virtual_overlap;  // compose_field of the final layers
  SolveReport report;
};

/// Full pipeline: inpaint both layers, calibrate global weights on the
/// error surface, then refine per pixel by descent.
SeparationResult separate(const Image2D& image, const RegionSpec& regions,
                          const InpaintConfig& inpaint_cfg, double grid_step,
                          const SolveConfig& solve_cfg);

/// Full-size views of each recovered tissue: the input image with the
/// overlap replaced by layer x (first) or layer y (second).
std::pair<Image2D, Image2D> render_layers(const Image2D& image,
                                          const RegionSpec& regions,
                                          const LayerPair& layers);

/// Observed overlap crop with the composite written over the valid pixels.
Image2D overlay_virtual(const Image2D& image, const LayerPair& layers);

}  // namespace layersplit
