#include "layersplit/model.hpp"

#include <cmath>
#include <sstream>

namespace layersplit {

namespace {

void check_domain(double x, double y) {
  const auto bad = [](double v) {
    return !(v >= -kDomainTolerance && v <= 1.0 + kDomainTolerance);
  };
  if (bad(x) || bad(y)) {
    std::ostringstream msg;
    msg << "reflectance pair (" << x << ", " << y << ") outside [0,1]";
    throw Error(ErrorCode::DomainError, msg.str());
  }
}

void check_observed(const LayerPair& layers, const Image2D& observed) {
  check_layers(layers);
  if (observed.width() != layers.x.width() ||
      observed.height() != layers.x.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "observed crop does not match layer dimensions");
  }
}

}  // namespace

void check_layers(const LayerPair& layers) {
  const int w = layers.window.width;
  const int h = layers.window.height;
  if (layers.x.width() != w || layers.x.height() != h ||
      layers.y.width() != w || layers.y.height() != h ||
      layers.valid.width() != w || layers.valid.height() != h) {
    throw Error(ErrorCode::DimensionMismatch,
                "layer fields and validity mask must match the crop window");
  }
}

double compose(double x, double y) {
  check_domain(x, y);
  const double t = (1.0 - x) * (1.0 - x);
  return x + y * t + x * y * y * t;
}

double dz_dx(double x, double y) {
  check_domain(x, y);
  const double u = 1.0 - x;
  return 1.0 - 2.0 * u * y - 2.0 * x * u * y * y + u * u * y * y;
}

double dz_dy(double x, double y) {
  check_domain(x, y);
  const double t = (1.0 - x) * (1.0 - x);
  return t + 2.0 * x * t * y;
}

Image2D compose_field(const LayerPair& layers) {
  check_layers(layers);
  const int w = layers.window.width;
  const int h = layers.window.height;
  std::vector<double> out(static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (layers.valid(x, y))
        out[static_cast<std::size_t>(y) * w + x] =
            std::min(1.0, compose(layers.x(x, y), layers.y(x, y)));
  return Image2D(w, h, std::move(out));
}

double objective(const LayerPair& layers, const Image2D& observed) {
  check_observed(layers, observed);
  const std::size_t n = layers.valid.count();
  if (n == 0) throw Error(ErrorCode::EmptyRegion, "validity mask is empty");

  double sum = 0.0;
  double comp = 0.0;
  for (int y = 0; y < observed.height(); ++y) {
    for (int x = 0; x < observed.width(); ++x) {
      if (!layers.valid(x, y)) continue;
      const double r = compose(layers.x(x, y), layers.y(x, y)) - observed(x, y);
      const double term = r * r;
      const double t = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term
                                              : (term - t) + sum;
      sum = t;
    }
  }
  return (sum + comp) / static_cast<double>(n);
}

Gradient gradient(const LayerPair& layers, const Image2D& observed) {
  check_observed(layers, observed);
  const std::size_t n = layers.valid.count();
  if (n == 0) throw Error(ErrorCode::EmptyRegion, "validity mask is empty");

  Gradient g;
  g.width = observed.width();
  g.height = observed.height();
  g.gx.assign(observed.size(), 0.0);
  g.gy.assign(observed.size(), 0.0);
  const double scale = 2.0 / static_cast<double>(n);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (!layers.valid(x, y)) continue;
      const double xv = layers.x(x, y);
      const double yv = layers.y(x, y);
      const double r = scale * (compose(xv, yv) - observed(x, y));
      const std::size_t i = static_cast<std::size_t>(y) * g.width + x;
      g.gx[i] = r * dz_dx(xv, yv);
      g.gy[i] = r * dz_dy(xv, yv);
    }
  }
  return g;
}

}  // namespace layersplit
