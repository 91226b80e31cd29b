#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace layersplit {

/// Slack accepted on [0,1] inputs before they count as out of domain.
inline constexpr double kDomainTolerance = 1e-9;

enum class ErrorCode {
  DimensionMismatch,
  OverlappingMasks,
  EmptyRegion,
  InsufficientNeighborhood,
  OutOfBounds,
  DomainError,
  ConfigError,
  GeometryError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this type. what() starts
/// with the error code name so callers (and CLI users) can see which
/// invariant was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Row-major grayscale raster with samples normalized to [0,1].
///
/// Construction validates the range; samples within kDomainTolerance of the
/// interval are clamped onto it, anything further out (or NaN) throws
/// DomainError. A default-constructed image is the empty 0x0 placeholder.
class Image2D {
 public:
  Image2D() = default;
  Image2D(int width, int height, double fill = 0.0);
  Image2D(int width, int height, std::vector<double> data);

  static Image2D generate(int width, int height,
                          const std::function<double(int, int)>& fn);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const double> pixels() const& noexcept { return data_; }
  std::span<const double> pixels() const&& = delete;

  bool operator==(const Image2D&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Row-major boolean mask. Stored as bytes holding 0 or 1.
class Mask2D {
 public:
  Mask2D() = default;
  Mask2D(int width, int height, bool fill = false);
  Mask2D(int width, int height, std::vector<std::uint8_t> bits);

  static Mask2D generate(int width, int height,
                         const std::function<bool(int, int)>& fn);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return bits_.empty(); }

  bool operator()(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  std::span<const std::uint8_t> bits() const& noexcept { return bits_; }
  std::span<const std::uint8_t> bits() const&& = delete;

  std::size_t count() const;
  bool any() const { return count() > 0; }

  bool operator==(const Mask2D&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct CropWindow {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  bool contains(int x, int y) const {
    return x >= x0 && y >= y0 && x < x0 + width && y < y0 + height;
  }
  bool operator==(const CropWindow&) const = default;
};

/// The three user-supplied regions on one image: the overlap and the two
/// single-tissue neighborhoods that serve as exemplars for each layer.
struct RegionSpec {
  Mask2D overlap;
  Mask2D n1;
  Mask2D n2;
};

/// Returns `regions` unchanged when the masks match the image, are
/// non-empty, pairwise disjoint, and each neighborhood holds at least
/// patch_size^2 pixels. Throws the matching ErrorCode otherwise.
RegionSpec validate_regions(const Image2D& image, const RegionSpec& regions,
                            int patch_size = 7);

Image2D crop(const Image2D& image, const CropWindow& window);
Mask2D crop(const Mask2D& mask, const CropWindow& window);

/// Copies `sub` into `image` at `window`; inverse of crop.
Image2D paste(const Image2D& sub, const Image2D& image,
              const CropWindow& window);

CropWindow bounding_window(const Mask2D& mask);

/// Intersection / union helpers used by region construction.
Mask2D mask_and(const Mask2D& a, const Mask2D& b);
Mask2D mask_or(const Mask2D& a, const Mask2D& b);

}  // namespace layersplit
