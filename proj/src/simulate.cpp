#include "layersplit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "layersplit/model.hpp"
#include "layersplit/rng.hpp"

namespace layersplit {

namespace {

int positive_mod(int a, int m) { return ((a % m) + m) % m; }

void check_value(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << what << " " << v << " outside [0,1]";
    throw Error(ErrorCode::ConfigError, msg.str());
  }
}

void check_texture(const Texture& tex) {
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, texture::Constant>) {
          check_value(t.value, "constant texture value");
        } else if constexpr (std::is_same_v<T, texture::Stripes>) {
          if (t.period < 2)
            throw Error(ErrorCode::ConfigError, "stripe period must be >= 2");
          check_value(t.lo, "stripe lo");
          check_value(t.hi, "stripe hi");
        } else if constexpr (std::is_same_v<T, texture::Checker>) {
          if (t.cell < 1)
            throw Error(ErrorCode::ConfigError, "checker cell must be >= 1");
          check_value(t.lo, "checker lo");
          check_value(t.hi, "checker hi");
        } else {
          if (t.source.empty())
            throw Error(ErrorCode::ConfigError, "image texture is empty");
        }
      },
      tex);
}

void check_rect(const SceneSpec& spec, const CropWindow& r, const char* name) {
  if (r.width < 1 || r.height < 1 || r.x0 < 0 || r.y0 < 0 ||
      r.x0 + r.width > spec.width || r.y0 + r.height > spec.height) {
    std::ostringstream msg;
    msg << name << " (" << r.x0 << "," << r.y0 << "," << r.width << ","
        << r.height << ") is not inside the " << spec.width << "x"
        << spec.height << " canvas";
    throw Error(ErrorCode::ConfigError, msg.str());
  }
}

}  // namespace

double sample(const Texture& tex, int x, int y) {
  return std::visit(
      [x, y](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, texture::Constant>) {
          return t.value;
        } else if constexpr (std::is_same_v<T, texture::Stripes>) {
          const int coord =
              t.orientation == texture::Orientation::Vertical ? x : y;
          return positive_mod(coord, t.period) < t.period / 2 ? t.lo : t.hi;
        } else if constexpr (std::is_same_v<T, texture::Checker>) {
          const int parity = (positive_mod(x, 2 * t.cell) / t.cell +
                              positive_mod(y, 2 * t.cell) / t.cell) %
                             2;
          return parity == 0 ? t.lo : t.hi;
        } else {
          return t.source(positive_mod(x, t.source.width()),
                          positive_mod(y, t.source.height()));
        }
      },
      tex);
}

SyntheticCase simulate_overlap(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1)
    throw Error(ErrorCode::ConfigError, "canvas must be at least 1x1");
  if (!(spec.noise_sigma >= 0.0))
    throw Error(ErrorCode::ConfigError, "noise_sigma must be >= 0");
  if (spec.neighborhood_margin < 1)
    throw Error(ErrorCode::ConfigError, "neighborhood_margin must be >= 1");
  check_rect(spec, spec.tissue1_rect, "tissue1_rect");
  check_rect(spec, spec.tissue2_rect, "tissue2_rect");
  check_texture(spec.tissue1_texture);
  check_texture(spec.tissue2_texture);

  const CropWindow& a = spec.tissue1_rect;
  const CropWindow& b = spec.tissue2_rect;
  const int ix0 = std::max(a.x0, b.x0), iy0 = std::max(a.y0, b.y0);
  const int ix1 = std::min(a.x0 + a.width, b.x0 + b.width);
  const int iy1 = std::min(a.y0 + a.height, b.y0 + b.height);
  if (ix1 <= ix0 || iy1 <= iy0)
    throw Error(ErrorCode::GeometryError, "tissue rectangles do not intersect");
  const CropWindow overlap{ix0, iy0, ix1 - ix0, iy1 - iy0};

  const int m = spec.neighborhood_margin;
  const CropWindow reach{overlap.x0 - m, overlap.y0 - m, overlap.width + 2 * m,
                         overlap.height + 2 * m};
  const auto in1 = [&](int x, int y) { return a.contains(x, y); };
  const auto in2 = [&](int x, int y) { return b.contains(x, y); };

  SyntheticCase out;
  out.regions.overlap = Mask2D::generate(
      spec.width, spec.height, [&](int x, int y) { return overlap.contains(x, y); });
  out.regions.n1 = Mask2D::generate(spec.width, spec.height, [&](int x, int y) {
    return in1(x, y) && !in2(x, y) && reach.contains(x, y);
  });
  out.regions.n2 = Mask2D::generate(spec.width, spec.height, [&](int x, int y) {
    return in2(x, y) && !in1(x, y) && reach.contains(x, y);
  });
  if (!out.regions.n1.any() || !out.regions.n2.any()) {
    throw Error(ErrorCode::GeometryError,
                "each tissue needs pixels outside the overlap");
  }

  const CounterRng noise_root = CounterRng(spec.rng_seed).split(0x6e6f697365);
  out.composite = Image2D::generate(spec.width, spec.height, [&](int x, int y) {
    const bool t1 = in1(x, y), t2 = in2(x, y);
    if (!t1 && !t2) return 0.0;
    double v;
    if (t1 && t2)
      v = compose(sample(spec.tissue1_texture, x, y),
                  sample(spec.tissue2_texture, x, y));
    else
      v = sample(t1 ? spec.tissue1_texture : spec.tissue2_texture, x, y);
    if (spec.noise_sigma > 0.0) {
      CounterRng rng = noise_root.split(
          static_cast<std::uint64_t>(y) * spec.width + x);
      v += spec.noise_sigma * rng.normal();
    }
    return std::clamp(v, 0.0, 1.0);
  });
  out.truth_x = Image2D::generate(overlap.width, overlap.height, [&](int x, int y) {
    return sample(spec.tissue1_texture, overlap.x0 + x, overlap.y0 + y);
  });
  out.truth_y = Image2D::generate(overlap.width, overlap.height, [&](int x, int y) {
    return sample(spec.tissue2_texture, overlap.x0 + x, overlap.y0 + y);
  });
  return out;
}

Metrics evaluate(const Image2D& recovered, const Image2D& truth,
                 const Mask2D& mask) {
  if (recovered.width() != truth.width() ||
      recovered.height() != truth.height() ||
      mask.width() != truth.width() || mask.height() != truth.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "recovered, truth and mask must share dimensions");
  }
  const std::size_t n = mask.count();
  if (n == 0) throw Error(ErrorCode::EmptyRegion, "evaluation mask is empty");

  Metrics m;
  double sum = 0.0;
  for (int y = 0; y < truth.height(); ++y) {
    for (int x = 0; x < truth.width(); ++x) {
      if (!mask(x, y)) continue;
      const double d = recovered(x, y) - truth(x, y);
      sum += d * d;
      m.max_abs_error = std::max(m.max_abs_error, std::abs(d));
    }
  }
  m.mse = sum / static_cast<double>(n);
  m.psnr = m.mse == 0.0 ? std::numeric_limits<double>::infinity()
                        : 10.0 * std::log10(1.0 / m.mse);
  return m;
}

}  // namespace layersplit
