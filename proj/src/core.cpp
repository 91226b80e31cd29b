#include "layersplit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace layersplit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OverlappingMasks: return "OverlappingMasks";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::InsufficientNeighborhood: return "InsufficientNeighborhood";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::GeometryError: return "GeometryError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    std::ostringstream msg;
    msg << "raster dimensions must be positive, got " << width << "x"
        << height;
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

double normalize_sample(double v) {
  if (!(v >= -kDomainTolerance && v <= 1.0 + kDomainTolerance)) {
    std::ostringstream msg;
    msg << "sample " << v << " outside [0,1]";
    throw Error(ErrorCode::DomainError, msg.str());
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

Image2D::Image2D(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * height,
               normalize_sample(fill));
}

Image2D::Image2D(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::DimensionMismatch,
                "pixel buffer length does not equal width*height");
  }
  for (double& v : data_) v = normalize_sample(v);
}

Image2D Image2D::generate(int width, int height,
                          const std::function<double(int, int)>& fn) {
  check_dims(width, height);
  std::vector<double> data(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      data[static_cast<std::size_t>(y) * width + x] = fn(x, y);
  return Image2D(width, height, std::move(data));
}

Mask2D::Mask2D(int width, int height, bool fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

Mask2D::Mask2D(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::DimensionMismatch,
                "mask buffer length does not equal width*height");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

Mask2D Mask2D::generate(int width, int height,
                        const std::function<bool(int, int)>& fn) {
  check_dims(width, height);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      bits[static_cast<std::size_t>(y) * width + x] = fn(x, y) ? 1 : 0;
  return Mask2D(width, height, std::move(bits));
}

std::size_t Mask2D::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

namespace {

template <class A, class B>
bool same_dims(const A& a, const B& b) {
  return a.width() == b.width() && a.height() == b.height();
}

void check_disjoint(const Mask2D& a, std::string_view a_name, const Mask2D& b,
                    std::string_view b_name) {
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (a(x, y) && b(x, y)) {
        std::ostringstream msg;
        msg << a_name << " and " << b_name << " share pixel (" << x << ","
            << y << ")";
        throw Error(ErrorCode::OverlappingMasks, msg.str());
      }
    }
  }
}

void check_window(int width, int height, const CropWindow& w) {
  if (w.width < 1 || w.height < 1 || w.x0 < 0 || w.y0 < 0 ||
      w.x0 + w.width > width || w.y0 + w.height > height) {
    std::ostringstream msg;
    msg << "window (" << w.x0 << "," << w.y0 << "," << w.width << ","
        << w.height << ") exceeds " << width << "x" << height;
    throw Error(ErrorCode::OutOfBounds, msg.str());
  }
}

}  // namespace

RegionSpec validate_regions(const Image2D& image, const RegionSpec& regions,
                            int patch_size) {
  const std::pair<const Mask2D*, std::string_view> masks[] = {
      {&regions.overlap, "overlap"}, {&regions.n1, "n1"}, {&regions.n2, "n2"}};
  for (const auto& [mask, name] : masks) {
    if (!same_dims(*mask, image)) {
      std::ostringstream msg;
      msg << name << " mask is " << mask->width() << "x" << mask->height()
          << " but image is " << image.width() << "x" << image.height();
      throw Error(ErrorCode::DimensionMismatch, msg.str());
    }
  }
  for (const auto& [mask, name] : masks) {
    if (!mask->any()) {
      throw Error(ErrorCode::EmptyRegion, std::string(name) + " mask is empty");
    }
  }
  check_disjoint(regions.overlap, "overlap", regions.n1, "n1");
  check_disjoint(regions.overlap, "overlap", regions.n2, "n2");
  check_disjoint(regions.n1, "n1", regions.n2, "n2");

  const auto needed = static_cast<std::size_t>(patch_size) * patch_size;
  for (const auto& [mask, name] : {masks[1], masks[2]}) {
    if (mask->count() < needed) {
      std::ostringstream msg;
      msg << name << " has " << mask->count() << " pixels, needs at least "
          << needed << " for patch size " << patch_size;
      throw Error(ErrorCode::InsufficientNeighborhood, msg.str());
    }
  }
  return regions;
}

Image2D crop(const Image2D& image, const CropWindow& window) {
  check_window(image.width(), image.height(), window);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(window.width) * window.height);
  for (int y = 0; y < window.height; ++y)
    for (int x = 0; x < window.width; ++x)
      out.push_back(image(window.x0 + x, window.y0 + y));
  return Image2D(window.width, window.height, std::move(out));
}

Mask2D crop(const Mask2D& mask, const CropWindow& window) {
  check_window(mask.width(), mask.height(), window);
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(window.width) * window.height);
  for (int y = 0; y < window.height; ++y)
    for (int x = 0; x < window.width; ++x)
      out.push_back(mask(window.x0 + x, window.y0 + y) ? 1 : 0);
  return Mask2D(window.width, window.height, std::move(out));
}

Image2D paste(const Image2D& sub, const Image2D& image,
              const CropWindow& window) {
  check_window(image.width(), image.height(), window);
  if (sub.width() != window.width || sub.height() != window.height) {
    throw Error(ErrorCode::DimensionMismatch,
                "pasted image does not match window size");
  }
  std::vector<double> out(image.pixels().begin(), image.pixels().end());
  for (int y = 0; y < window.height; ++y)
    for (int x = 0; x < window.width; ++x)
      out[static_cast<std::size_t>(window.y0 + y) * image.width() +
          window.x0 + x] = sub(x, y);
  return Image2D(image.width(), image.height(), std::move(out));
}

CropWindow bounding_window(const Mask2D& mask) {
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  int max_x = -1;
  int max_y = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y)) continue;
      min_x = std::min(min_x, x);
      min_y = std::min(min_y, y);
      max_x = std::max(max_x, x);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) throw Error(ErrorCode::EmptyRegion, "mask has no set pixels");
  return {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

Mask2D mask_and(const Mask2D& a, const Mask2D& b) {
  if (!same_dims(a, b)) {
    throw Error(ErrorCode::DimensionMismatch, "mask sizes differ");
  }
  return Mask2D::generate(a.width(), a.height(),
                          [&](int x, int y) { return a(x, y) && b(x, y); });
}

Mask2D mask_or(const Mask2D& a, const Mask2D& b) {
  if (!same_dims(a, b)) {
    throw Error(ErrorCode::DimensionMismatch, "mask sizes differ");
  }
  return Mask2D::generate(a.width(), a.height(),
                          [&](int x, int y) { return a(x, y) || b(x, y); });
}

}  // namespace layersplit
