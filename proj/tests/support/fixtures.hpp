#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "layersplit/core.hpp"
#include "layersplit/model.hpp"
#include "layersplit/simulate.hpp"

namespace layersplit::testing {

// Forward model typed out independently of the library (long double).
inline long double reference_compose(long double x, long double y) {
  const long double u = 1.0L - x;
  return x + y * u * u + x * y * y * u * u;
}

// Per-pixel brute-force objective: plain loop, long double accumulator.
inline double brute_force_objective(const LayerPair& p, const Image2D& obs) {
  long double sum = 0.0L;
  std::size_t n = 0;
  for (int y = 0; y < obs.height(); ++y)
    for (int x = 0; x < obs.width(); ++x)
      if (p.valid(x, y)) {
        const long double r = reference_compose(p.x(x, y), p.y(x, y)) - obs(x, y);
        sum += r * r;
        ++n;
      }
  return static_cast<double>(sum / static_cast<long double>(n));
}

inline Image2D with_pixel(const Image2D& img, int x, int y, double v) {
  std::vector<double> d(img.pixels().begin(), img.pixels().end());
  d[static_cast<std::size_t>(y) * img.width() + x] = v;
  return Image2D(img.width(), img.height(), std::move(d));
}

// Central finite difference of the objective in one coordinate.
inline double fd_partial(const LayerPair& p, const Image2D& obs, bool along_x,
                         int x, int y, double h) {
  LayerPair plus = p, minus = p;
  const Image2D& f = along_x ? p.x : p.y;
  const double v = f(x, y);
  (along_x ? plus.x : plus.y) = with_pixel(f, x, y, v + h);
  (along_x ? minus.x : minus.y) = with_pixel(f, x, y, v - h);
  return (objective(plus, obs) - objective(minus, obs)) / (2.0 * h);
}

inline Image2D random_image(int w, int h, std::uint64_t seed, double lo = 0.0,
                            double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> d(static_cast<std::size_t>(w) * h);
  for (double& v : d) v = dist(gen);
  return Image2D(w, h, std::move(d));
}

inline LayerPair full_layers(Image2D x, Image2D y) {
  LayerPair p;
  p.window = {0, 0, x.width(), x.height()};
  p.valid = Mask2D(x.width(), x.height(), true);
  p.x = std::move(x);
  p.y = std::move(y);
  return p;
}

// Observed crop rendered exactly from the layers.
inline Image2D rendered(const LayerPair& p) {
  return Image2D::generate(p.x.width(), p.x.height(), [&](int x, int y) {
    return static_cast<double>(reference_compose(p.x(x, y), p.y(x, y)));
  });
}

// 64x64 canvas, tissue1 on the left, tissue2 on the right; the overlap is
// the 24-column band in the middle.
inline SceneSpec constant_scene(double a = 0.4, double b = 0.6) {
  SceneSpec s;
  s.width = 64;
  s.height = 64;
  s.tissue1_rect = {4, 8, 36, 48};
  s.tissue2_rect = {24, 8, 36, 48};
  s.tissue1_texture = texture::Constant{a};
  s.tissue2_texture = texture::Constant{b};
  s.rng_seed = 7;
  return s;
}

// Ω = 48x48 with stripes on top and a checkerboard beneath.
inline SceneSpec textured_scene() {
  SceneSpec s;
  s.width = 112;
  s.height = 112;
  s.tissue1_rect = {8, 32, 80, 48};
  s.tissue2_rect = {40, 32, 64, 48};
  s.tissue1_texture = texture::Stripes{4, 0.15, 0.45, texture::Orientation::Vertical};
  s.tissue2_texture = texture::Checker{4, 0.2, 0.6};
  s.rng_seed = 11;
  return s;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("layersplit_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace layersplit::testing
