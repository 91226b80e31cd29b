#include "layersplit/solve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace layersplit {

namespace {

constexpr int kMaxHalvings = 30;

Image2D step_field(const Image2D& field, const std::vector<double>& grad,
                   double step, bool clamp) {
  std::vector<double> out(field.pixels().begin(), field.pixels().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] -= step * grad[i];
    if (clamp) out[i] = std::clamp(out[i], 0.0, 1.0);
  }
  return Image2D(field.width(), field.height(), std::move(out));
}

}  // namespace

void validate(const SolveConfig& cfg) {
  std::ostringstream msg;
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha))
    msg << "alpha must be > 0 (got " << cfg.alpha << ")";
  else if (!(cfg.epsilon > 0.0))
    msg << "epsilon must be > 0 (got " << cfg.epsilon << ")";
  else if (cfg.max_iterations < 1)
    msg << "max_iterations must be >= 1";
  else
    return;
  throw Error(ErrorCode::ConfigError, msg.str());
}

const char* to_string(StopReason reason) {
  return reason == StopReason::Converged ? "Converged" : "MaxIterations";
}

DescentResult descend(const LayerPair& layers, const Image2D& observed,
                      const SolveConfig& cfg) {
  validate(cfg);
  DescentResult result{layers, {}};
  SolveReport& report = result.report;

  double g_prev = objective(layers, observed);
  report.objective_evaluations = 1;
  report.objective_trace.push_back(g_prev);
  const double pixel_scale = static_cast<double>(layers.valid.count());

  LayerPair& cur = result.layers;
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    const Gradient grad = gradient(cur, observed);
    double step = cfg.alpha * pixel_scale;
    LayerPair cand = cur;
    double g_next = g_prev;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
      cand.x = step_field(cur.x, grad.gx, step, cfg.clamp);
      cand.y = step_field(cur.y, grad.gy, step, cfg.clamp);
      g_next = objective(cand, observed);
      ++report.objective_evaluations;
      if (g_next <= g_prev) {
        accepted = true;
        break;
      }
    }
    if (accepted) {
      cur = std::move(cand);
    } else {
      g_next = g_prev;
    }
    report.objective_trace.push_back(g_next);
    report.iterations_run = t;
    const bool converged = std::abs(g_next - g_prev) < cfg.epsilon;
    g_prev = g_next;
    if (converged) {
      report.stop_reason = StopReason::Converged;
      break;
    }
  }
  report.final_objective = report.objective_trace.back();
  return result;
}

SeparationResult separate(const Image2D& image, const RegionSpec& regions,
                          const InpaintConfig& inpaint_cfg, double grid_step,
                          const SolveConfig& solve_cfg) {
  validate(inpaint_cfg);
  validate(solve_cfg);
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw Error(ErrorCode::ConfigError, "grid_step must lie in (0, 0.5]");
  }
  validate_regions(image, regions, inpaint_cfg.patch_size);

  const LayerPair init = initialize_layers(image, regions, inpaint_cfg);
  const Image2D observed = crop(image, init.window);
  const ErrorSurface surface = error_surface(init, observed, grid_step);
  const WeightPair weights = best_weights(surface);

  DescentResult refined =
      descend(apply_weights(init, weights), observed, solve_cfg);
  refined.report.chosen_weights = weights;

  SeparationResult out;
  out.virtual_overlap = compose_field(refined.layers);
  out.layers = std::move(refined.layers);
  out.report = std::move(refined.report);
  return out;
}

namespace {

Image2D paste_valid(const Image2D& image, const Image2D& layer,
                    const LayerPair& layers) {
  std::vector<double> out(image.pixels().begin(), image.pixels().end());
  const CropWindow& w = layers.window;
  for (int y = 0; y < w.height; ++y)
    for (int x = 0; x < w.width; ++x)
      if (layers.valid(x, y))
        out[static_cast<std::size_t>(w.y0 + y) * image.width() + w.x0 + x] =
            layer(x, y);
  return Image2D(image.width(), image.height(), std::move(out));
}

void check_window_fits(const Image2D& image, const LayerPair& layers) {
  check_layers(layers);
  const CropWindow& w = layers.window;
  if (w.x0 < 0 || w.y0 < 0 || w.x0 + w.width > image.width() ||
      w.y0 + w.height > image.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "layer window does not fit inside the image");
  }
}

}  // namespace

std::pair<Image2D, Image2D> render_layers(const Image2D& image,
                                          const RegionSpec& regions,
                                          const LayerPair& layers) {
  check_window_fits(image, layers);
  if (regions.overlap.width() != image.width() ||
      regions.overlap.height() != image.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "overlap mask does not match the image");
  }
  if (regions.overlap.any()) {
    if (!(bounding_window(regions.overlap) == layers.window)) {
      throw Error(ErrorCode::DimensionMismatch,
                  "layer window is not the overlap's bounding window");
    }
  }
  return {paste_valid(image, layers.x, layers),
          paste_valid(image, layers.y, layers)};
}

Image2D overlay_virtual(const Image2D& image, const LayerPair& layers) {
  check_window_fits(image, layers);
  const Image2D composite = compose_field(layers);
  LayerPair local = layers;
  local.window = {0, 0, layers.window.width, layers.window.height};
  return paste_valid(crop(image, layers.window), composite, local);
}

}  // namespace layersplit
