#pragma once

#include <cstdint>
#include <vector>

#include "layersplit/core.hpp"
#include "layersplit/model.hpp"

namespace layersplit {

struct InpaintConfig {
  int patch_size = 7;           // odd, >= 3
  int em_iterations = 10;       // search/vote rounds per pyramid level
  int nnf_iterations = 5;       // propagation + random search sweeps per round
  int pyramid_levels = 0;       // 0 = automatic
  std::uint64_t rng_seed = 0;
  double random_search_decay = 0.5;
};

/// Throws ConfigError when a field is outside its documented range.
void validate(const InpaintConfig& cfg);

/// Dense nearest-neighbor field over the target raster.
///
/// For every pixel flagged in `centers`, the patch centered there matches
/// the source patch centered at (x + dx, y + dy), with `distance` the mean
/// squared difference over the pixels usable in both patches. Entries
/// outside `centers` hold distance = +inf.
struct NearestNeighborField {
  int width = 0;
  int height = 0;
  int patch_size = 0;
  Mask2D centers;
  std::vector<int> dx;
  std::vector<int> dy;
  std::vector<double> distance;

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
};

/// Mean squared difference between the target patch centered at (tx, ty)
/// and the source patch centered at (sx, sy). Target pixels outside the
/// raster or outside `target_valid` are skipped; the source patch must lie
/// entirely inside `source_mask`. Returns +inf when nothing overlaps.
double patch_distance(const Image2D& target, const Mask2D& target_valid,
                      const Image2D& source, int tx, int ty, int sx, int sy,
                      int patch_size);

/// PatchMatch search: random initialization, then `cfg.nnf_iterations`
/// sweeps of propagation (raster order on even sweeps, reverse on odd) and
/// random search. Targets are the patches centered on `target_mask`; every
/// target pixel is usable for matching. Source candidates are patches lying
/// fully inside `source_mask`.
///
/// When `snapshots` is given it receives the field after random
/// initialization and after each sweep.
NearestNeighborField build_nnf(const Image2D& target, const Mask2D& target_mask,
                               const Image2D& source, const Mask2D& source_mask,
                               const InpaintConfig& cfg,
                               std::vector<NearestNeighborField>* snapshots =
                                   nullptr);

/// Synthesizes the pixels under `hole` from exemplar patches in `source`,
/// coarse to fine. Pixels outside the hole are returned bit-exactly; only
/// source and hole pixels take part in matching.
Image2D fill_hole(const Image2D& image, const Mask2D& hole,
                  const Mask2D& source, const InpaintConfig& cfg);

/// Initial layers over the overlap's bounding window: x from the n1
/// neighborhood, y from the n2 neighborhood.
LayerPair initialize_layers(const Image2D& image, const RegionSpec& regions,
                            const InpaintConfig& cfg);

}  // namespace layersplit
