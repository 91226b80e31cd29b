#include "layersplit/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "layersplit/parallel.hpp"
#include "layersplit/rng.hpp"

namespace layersplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kInitStream = 0;

// Mean as first + mean(v - first), clamped to the sample range: a set of
// identical samples averages to exactly that sample, and the result is
// always a convex combination of the inputs.
class StableMean {
 public:
  void add(double v) {
    if (n_ == 0) {
      ref_ = lo_ = hi_ = v;
    } else {
      lo_ = std::min(lo_, v);
      hi_ = std::max(hi_, v);
    }
    acc_ += v - ref_;
    ++n_;
  }
  bool empty() const { return n_ == 0; }
  double value() const {
    return std::clamp(ref_ + acc_ / static_cast<double>(n_), lo_, hi_);
  }

 private:
  double ref_ = 0.0, lo_ = 0.0, hi_ = 0.0, acc_ = 0.0;
  std::size_t n_ = 0;
};

struct Raster {
  int w = 0;
  int h = 0;
  std::vector<double> v;

  double at(int x, int y) const {
    return v[static_cast<std::size_t>(y) * w + x];
  }
  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
};

struct Bits {
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> b;

  bool at(int x, int y) const {
    return b[static_cast<std::size_t>(y) * w + x] != 0;
  }
};

Raster to_raster(const Image2D& img) {
  return {img.width(), img.height(), {img.pixels().begin(), img.pixels().end()}};
}

Bits to_bits(const Mask2D& m) {
  return {m.width(), m.height(), {m.bits().begin(), m.bits().end()}};
}

// Source patch centers whose whole patch lies inside the source mask.
struct SourceIndex {
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> is_candidate;
  std::vector<int> candidates;
  int min_x = 0, max_x = -1, min_y = 0, max_y = -1;
  double diagonal = 0.0;

  bool ok(int x, int y) const {
    return x >= 0 && y >= 0 && x < w && y < h &&
           is_candidate[static_cast<std::size_t>(y) * w + x];
  }
};

SourceIndex index_source(const Bits& mask, int r) {
  SourceIndex idx;
  idx.w = mask.w;
  idx.h = mask.h;
  idx.is_candidate.assign(mask.b.size(), 0);
  // Summed-area table of the mask for O(1) full-patch checks.
  std::vector<int> sat(static_cast<std::size_t>(mask.w + 1) * (mask.h + 1), 0);
  const auto s = [&](int x, int y) -> int& {
    return sat[static_cast<std::size_t>(y) * (mask.w + 1) + x];
  };
  for (int y = 0; y < mask.h; ++y)
    for (int x = 0; x < mask.w; ++x)
      s(x + 1, y + 1) = s(x, y + 1) + s(x + 1, y) - s(x, y) + mask.at(x, y);

  const int full = (2 * r + 1) * (2 * r + 1);
  idx.min_x = mask.w;
  idx.min_y = mask.h;
  for (int y = r; y < mask.h - r; ++y) {
    for (int x = r; x < mask.w - r; ++x) {
      const int x0 = x - r, y0 = y - r, x1 = x + r + 1, y1 = y + r + 1;
      if (s(x1, y1) - s(x0, y1) - s(x1, y0) + s(x0, y0) != full) continue;
      const std::size_t i = static_cast<std::size_t>(y) * mask.w + x;
      idx.is_candidate[i] = 1;
      idx.candidates.push_back(static_cast<int>(i));
      idx.min_x = std::min(idx.min_x, x);
      idx.max_x = std::max(idx.max_x, x);
      idx.min_y = std::min(idx.min_y, y);
      idx.max_y = std::max(idx.max_y, y);
    }
  }
  if (!idx.candidates.empty()) {
    // Bounding area of the source mask itself, which the search radius spans.
    int bx0 = mask.w, by0 = mask.h, bx1 = -1, by1 = -1;
    for (int y = 0; y < mask.h; ++y)
      for (int x = 0; x < mask.w; ++x)
        if (mask.at(x, y)) {
          bx0 = std::min(bx0, x);
          by0 = std::min(by0, y);
          bx1 = std::max(bx1, x);
          by1 = std::max(by1, y);
        }
    idx.diagonal = std::hypot(bx1 - bx0 + 1, by1 - by0 + 1);
  }
  return idx;
}

// Everything needed to score a (target center, source center) pair.
struct MatchProblem {
  const Raster* target = nullptr;
  const std::vector<std::uint8_t>* target_valid = nullptr;
  // When set, pixels flagged here are left out of the distance unless the
  // patch has no other usable pixel.
  const std::vector<std::uint8_t>* provisional = nullptr;
  const Raster* source = nullptr;
  const SourceIndex* index = nullptr;
  int r = 3;

  double distance(int tx, int ty, int sx, int sy) const {
    double sum_known = 0.0, sum_all = 0.0;
    int n_known = 0, n_all = 0;
    for (int v = -r; v <= r; ++v) {
      const int py = ty + v;
      if (py < 0 || py >= target->h) continue;
      for (int u = -r; u <= r; ++u) {
        const int px = tx + u;
        if (px < 0 || px >= target->w) continue;
        const std::size_t i = static_cast<std::size_t>(py) * target->w + px;
        if (!(*target_valid)[i]) continue;
        const double d = target->v[i] - source->at(sx + u, sy + v);
        sum_all += d * d;
        ++n_all;
        if (provisional == nullptr || !(*provisional)[i]) {
          sum_known += d * d;
          ++n_known;
        }
      }
    }
    if (n_known > 0) return sum_known / n_known;
    if (n_all > 0) return sum_all / n_all;
    return kInf;
  }
};

struct Field {
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> is_center;
  std::vector<int> centers;  // raster order
  std::vector<int> dx, dy;
  std::vector<double> dist;
};

Field make_field(int w, int h, const std::vector<std::uint8_t>& center_bits) {
  Field f;
  f.w = w;
  f.h = h;
  f.is_center = center_bits;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  f.dx.assign(n, 0);
  f.dy.assign(n, 0);
  f.dist.assign(n, kInf);
  for (std::size_t i = 0; i < n; ++i)
    if (center_bits[i]) f.centers.push_back(static_cast<int>(i));
  return f;
}

void random_init_entry(Field& f, const MatchProblem& p, int ci,
                       CounterRng rng) {
  const int x = ci % f.w, y = ci / f.w;
  const auto& cands = p.index->candidates;
  const int s = cands[rng.below(cands.size())];
  const int sx = s % p.index->w, sy = s / p.index->w;
  f.dx[ci] = sx - x;
  f.dy[ci] = sy - y;
  f.dist[ci] = p.distance(x, y, sx, sy);
}

void random_init(Field& f, const MatchProblem& p, const CounterRng& stream) {
  const CounterRng init = stream.split(kInitStream);
  parallel_for(0, f.centers.size(), [&](std::size_t k) {
    const int ci = f.centers[k];
    random_init_entry(f, p, ci, init.split(static_cast<std::uint64_t>(ci)));
  });
}

void refresh_distances(Field& f, const MatchProblem& p) {
  parallel_for(0, f.centers.size(), [&](std::size_t k) {
    const int ci = f.centers[k];
    const int x = ci % f.w, y = ci / f.w;
    f.dist[ci] = p.distance(x, y, x + f.dx[ci], y + f.dy[ci]);
  });
}

// Tries source center (sx, sy) for target entry ci; strict improvement only.
inline void try_candidate(Field& f, const MatchProblem& p, int ci, int x,
                          int y, int sx, int sy) {
  if (!p.index->ok(sx, sy)) return;
  const int ox = sx - x, oy = sy - y;
  if (ox == f.dx[ci] && oy == f.dy[ci]) return;
  const double d = p.distance(x, y, sx, sy);
  if (d < f.dist[ci]) {
    f.dist[ci] = d;
    f.dx[ci] = ox;
    f.dy[ci] = oy;
  }
}

void propagate(Field& f, const MatchProblem& p, bool forward) {
  const int step = forward ? -1 : 1;  // neighbors already visited this pass
  const auto visit = [&](int ci) {
    const int x = ci % f.w, y = ci / f.w;
    const int nx = x + step, ny = y + step;
    if (nx >= 0 && nx < f.w) {
      const int ni = y * f.w + nx;
      if (f.is_center[ni] && std::isfinite(f.dist[ni]))
        try_candidate(f, p, ci, x, y, x + f.dx[ni], y + f.dy[ni]);
    }
    if (ny >= 0 && ny < f.h) {
      const int ni = ny * f.w + x;
      if (f.is_center[ni] && std::isfinite(f.dist[ni]))
        try_candidate(f, p, ci, x, y, x + f.dx[ni], y + f.dy[ni]);
    }
  };
  if (forward) {
    for (int ci : f.centers) visit(ci);
  } else {
    for (auto it = f.centers.rbegin(); it != f.centers.rend(); ++it) visit(*it);
  }
}

void random_search(Field& f, const MatchProblem& p, const CounterRng& stream,
                   double decay) {
  const SourceIndex& idx = *p.index;
  parallel_for(0, f.centers.size(), [&](std::size_t k) {
    const int ci = f.centers[k];
    const int x = ci % f.w, y = ci / f.w;
    CounterRng rng = stream.split(static_cast<std::uint64_t>(ci));
    for (double radius = idx.diagonal; radius >= 1.0; radius *= decay) {
      const int rad = static_cast<int>(radius);
      const int bx = x + f.dx[ci], by = y + f.dy[ci];
      const int sx = std::clamp(static_cast<int>(rng.range(bx - rad, bx + rad)),
                                idx.min_x, idx.max_x);
      const int sy = std::clamp(static_cast<int>(rng.range(by - rad, by + rad)),
                                idx.min_y, idx.max_y);
      try_candidate(f, p, ci, x, y, sx, sy);
    }
  });
}

void sweep(Field& f, const MatchProblem& p, int iteration,
           const CounterRng& stream, double decay) {
  propagate(f, p, iteration % 2 == 0);
  random_search(f, p, stream.split(static_cast<std::uint64_t>(iteration) + 1),
                decay);
}

NearestNeighborField export_field(const Field& f, int patch_size) {
  NearestNeighborField out;
  out.width = f.w;
  out.height = f.h;
  out.patch_size = patch_size;
  out.centers = Mask2D(f.w, f.h, f.is_center);
  out.dx = f.dx;
  out.dy = f.dy;
  out.distance = f.dist;
  return out;
}

// One pyramid level of the completion problem.
struct Level {
  Raster image;
  Bits hole;
  Bits source;
};

Level downsample(const Level& fine) {
  Level c;
  const int w = (fine.image.w + 1) / 2, h = (fine.image.h + 1) / 2;
  c.image = {w, h, std::vector<double>(static_cast<std::size_t>(w) * h, 0.0)};
  c.hole = {w, h, std::vector<std::uint8_t>(c.image.v.size(), 0)};
  c.source = c.hole;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool any_hole = false, all_source = true;
      StableMean mean;
      for (int v = 0; v < 2; ++v) {
        for (int u = 0; u < 2; ++u) {
          const int fx = 2 * x + u, fy = 2 * y + v;
          if (fx >= fine.image.w || fy >= fine.image.h) continue;
          any_hole = any_hole || fine.hole.at(fx, fy);
          if (fine.source.at(fx, fy))
            mean.add(fine.image.at(fx, fy));
          else
            all_source = false;
        }
      }
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (any_hole) {
        c.hole.b[i] = 1;
      } else if (all_source) {
        c.source.b[i] = 1;
        c.image.v[i] = mean.value();
      }
    }
  }
  return c;
}

// Onion-peel fill of the hole from its already-known 4-neighbors.
void diffuse_init(Level& lvl) {
  const int w = lvl.image.w, h = lvl.image.h;
  std::vector<std::uint8_t> known(lvl.source.b);
  std::vector<int> pending;
  for (std::size_t i = 0; i < lvl.hole.b.size(); ++i)
    if (lvl.hole.b[i]) pending.push_back(static_cast<int>(i));

  while (!pending.empty()) {
    std::vector<std::pair<int, double>> updates;
    std::vector<int> still;
    for (int i : pending) {
      const int x = i % w, y = i / w;
      StableMean mean;
      const int nbr[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& n : nbr) {
        if (n[0] < 0 || n[1] < 0 || n[0] >= w || n[1] >= h) continue;
        const int j = n[1] * w + n[0];
        if (known[j]) mean.add(lvl.image.v[j]);
      }
      if (mean.empty())
        still.push_back(i);
      else
        updates.emplace_back(i, mean.value());
    }
    if (updates.empty()) break;
    for (const auto& [i, v] : updates) {
      lvl.image.v[i] = v;
      known[i] = 1;
    }
    pending.swap(still);
  }

  // Hole components unreachable through 4-connectivity take the source mean.
  if (!pending.empty()) {
    StableMean mean;
    for (std::size_t i = 0; i < lvl.source.b.size(); ++i)
      if (lvl.source.b[i]) mean.add(lvl.image.v[i]);
    for (int i : pending) lvl.image.v[i] = mean.value();
  }
}

std::vector<std::uint8_t> dilate(const Bits& m, int r) {
  std::vector<std::uint8_t> out(m.b.size(), 0);
  for (int y = 0; y < m.h; ++y)
    for (int x = 0; x < m.w; ++x) {
      if (!m.at(x, y)) continue;
      for (int v = std::max(0, y - r); v <= std::min(m.h - 1, y + r); ++v)
        for (int u = std::max(0, x - r); u <= std::min(m.w - 1, x + r); ++u)
          out[static_cast<std::size_t>(v) * m.w + u] = 1;
    }
  return out;
}

// Replaces every hole pixel by the mean of the exemplar pixels that the
// overlapping patches map onto it. Returns whether anything changed.
bool vote(const Field& f, const MatchProblem& p, const Bits& hole,
          Raster& image) {
  const int r = p.r;
  std::vector<int> hole_pixels;
  for (std::size_t i = 0; i < hole.b.size(); ++i)
    if (hole.b[i]) hole_pixels.push_back(static_cast<int>(i));

  std::vector<double> next(hole_pixels.size());
  parallel_for(0, hole_pixels.size(), [&](std::size_t k) {
    const int i = hole_pixels[k];
    const int x = i % image.w, y = i / image.w;
    StableMean mean;
    for (int cy = std::max(0, y - r); cy <= std::min(f.h - 1, y + r); ++cy) {
      for (int cx = std::max(0, x - r); cx <= std::min(f.w - 1, x + r); ++cx) {
        const int ci = cy * f.w + cx;
        if (!f.is_center[ci] || !std::isfinite(f.dist[ci])) continue;
        mean.add(p.source->at(x + f.dx[ci], y + f.dy[ci]));
      }
    }
    next[k] = mean.empty() ? image.v[i] : mean.value();
  });

  bool changed = false;
  for (std::size_t k = 0; k < hole_pixels.size(); ++k) {
    double& v = image.v[hole_pixels[k]];
    if (v != next[k]) changed = true;
    v = next[k];
  }
  return changed;
}

int bbox_min_dim(const Bits& m) {
  int x0 = m.w, y0 = m.h, x1 = -1, y1 = -1;
  for (int y = 0; y < m.h; ++y)
    for (int x = 0; x < m.w; ++x)
      if (m.at(x, y)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  return x1 < 0 ? 0 : std::min(x1 - x0 + 1, y1 - y0 + 1);
}

void require_candidates(const SourceIndex& idx, int patch_size) {
  if (idx.candidates.empty()) {
    std::ostringstream msg;
    msg << "source region contains no fully valid " << patch_size << "x"
        << patch_size << " patch";
    throw Error(ErrorCode::InsufficientNeighborhood, msg.str());
  }
}

}  // namespace

void validate(const InpaintConfig& cfg) {
  std::ostringstream msg;
  if (cfg.patch_size < 3 || cfg.patch_size % 2 == 0)
    msg << "patch_size must be odd and >= 3 (got " << cfg.patch_size << ")";
  else if (cfg.em_iterations < 1)
    msg << "em_iterations must be >= 1";
  else if (cfg.nnf_iterations < 1)
    msg << "nnf_iterations must be >= 1";
  else if (cfg.pyramid_levels < 0)
    msg << "pyramid_levels must be >= 0 (0 = automatic)";
  else if (!(cfg.random_search_decay > 0.0 && cfg.random_search_decay < 1.0))
    msg << "random_search_decay must lie in (0,1)";
  else
    return;
  throw Error(ErrorCode::ConfigError, msg.str());
}

double patch_distance(const Image2D& target, const Mask2D& target_valid,
                      const Image2D& source, int tx, int ty, int sx, int sy,
                      int patch_size) {
  const Raster t = to_raster(target);
  const Raster s = to_raster(source);
  const std::vector<std::uint8_t> valid(target_valid.bits().begin(),
                                        target_valid.bits().end());
  MatchProblem p;
  p.target = &t;
  p.target_valid = &valid;
  p.source = &s;
  p.r = patch_size / 2;
  return p.distance(tx, ty, sx, sy);
}

NearestNeighborField build_nnf(const Image2D& target, const Mask2D& target_mask,
                               const Image2D& source, const Mask2D& source_mask,
                               const InpaintConfig& cfg,
                               std::vector<NearestNeighborField>* snapshots) {
  validate(cfg);
  if (target_mask.width() != target.width() ||
      target_mask.height() != target.height() ||
      source_mask.width() != source.width() ||
      source_mask.height() != source.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "masks must match their images' dimensions");
  }
  const int r = cfg.patch_size / 2;
  const Raster t = to_raster(target);
  const Raster s = to_raster(source);
  const SourceIndex idx = index_source(to_bits(source_mask), r);
  require_candidates(idx, cfg.patch_size);

  const std::vector<std::uint8_t> all_valid(t.v.size(), 1);
  MatchProblem p;
  p.target = &t;
  p.target_valid = &all_valid;
  p.source = &s;
  p.index = &idx;
  p.r = r;

  Field f = make_field(t.w, t.h, {target_mask.bits().begin(),
                                  target_mask.bits().end()});
  const CounterRng stream = CounterRng(cfg.rng_seed).split(0).split(0);
  random_init(f, p, stream);
  if (snapshots) snapshots->push_back(export_field(f, cfg.patch_size));
  for (int it = 0; it < cfg.nnf_iterations; ++it) {
    sweep(f, p, it, stream, cfg.random_search_decay);
    if (snapshots) snapshots->push_back(export_field(f, cfg.patch_size));
  }
  return export_field(f, cfg.patch_size);
}

Image2D fill_hole(const Image2D& image, const Mask2D& hole,
                  const Mask2D& source, const InpaintConfig& cfg) {
  validate(cfg);
  if (hole.width() != image.width() || hole.height() != image.height() ||
      source.width() != image.width() || source.height() != image.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                "hole and source masks must match the image");
  }
  if (!hole.any()) return image;
  for (std::size_t i = 0; i < hole.bits().size(); ++i) {
    if (hole.bits()[i] && source.bits()[i]) {
      std::ostringstream msg;
      msg << "hole and source share pixel (" << i % image.width() << ","
          << i / image.width() << ")";
      throw Error(ErrorCode::OverlappingMasks, msg.str());
    }
  }

  const int r = cfg.patch_size / 2;
  std::vector<Level> pyramid;
  std::vector<SourceIndex> indices;
  pyramid.push_back({to_raster(image), to_bits(hole), to_bits(source)});
  indices.push_back(index_source(pyramid.back().source, r));
  require_candidates(indices.back(), cfg.patch_size);

  const bool automatic = cfg.pyramid_levels == 0;
  const std::size_t max_levels =
      automatic ? std::numeric_limits<std::size_t>::max()
                : static_cast<std::size_t>(cfg.pyramid_levels);
  while (pyramid.size() < max_levels) {
    const Level& fine = pyramid.back();
    if (fine.image.w < 2 * cfg.patch_size || fine.image.h < 2 * cfg.patch_size)
      break;
    Level coarse = downsample(fine);
    if (automatic && bbox_min_dim(coarse.hole) < 2 * cfg.patch_size) break;
    SourceIndex idx = index_source(coarse.source, r);
    if (idx.candidates.empty()) break;
    pyramid.push_back(std::move(coarse));
    indices.push_back(std::move(idx));
  }

  const CounterRng root(cfg.rng_seed);
  Field prev;
  for (int li = static_cast<int>(pyramid.size()) - 1; li >= 0; --li) {
    Level& lvl = pyramid[li];
    const SourceIndex& idx = indices[li];
    const bool coarsest = li == static_cast<int>(pyramid.size()) - 1;

    if (coarsest) {
      diffuse_init(lvl);
    } else {
      const Level& up = pyramid[li + 1];
      for (int y = 0; y < lvl.image.h; ++y)
        for (int x = 0; x < lvl.image.w; ++x)
          if (lvl.hole.at(x, y)) lvl.image.at(x, y) = up.image.at(x / 2, y / 2);
    }

    std::vector<std::uint8_t> usable(lvl.hole.b.size());
    for (std::size_t i = 0; i < usable.size(); ++i)
      usable[i] = lvl.hole.b[i] || lvl.source.b[i];

    MatchProblem p;
    p.target = &lvl.image;
    p.target_valid = &usable;
    p.source = &lvl.image;  // source pixels are never rewritten
    p.index = &idx;
    p.r = r;

    Field f = make_field(lvl.image.w, lvl.image.h, dilate(lvl.hole, r));
    const CounterRng level_stream = root.split(static_cast<std::uint64_t>(li));

    for (int em = 0; em < cfg.em_iterations; ++em) {
      const CounterRng stream =
          level_stream.split(static_cast<std::uint64_t>(em));
      // The diffusion guess is only a placeholder; keep it out of the very
      // first matching round wherever real pixels are available.
      p.provisional = (coarsest && em == 0) ? &lvl.hole.b : nullptr;

      if (em == 0) {
        if (coarsest) {
          random_init(f, p, stream);
        } else {
          const CounterRng init = stream.split(kInitStream);
          for (int ci : f.centers) {
            const int x = ci % f.w, y = ci / f.w;
            const int ux = std::min(x / 2, prev.w - 1);
            const int uy = std::min(y / 2, prev.h - 1);
            const int ui = uy * prev.w + ux;
            if (prev.is_center[ui] && std::isfinite(prev.dist[ui]) &&
                idx.ok(x + 2 * prev.dx[ui], y + 2 * prev.dy[ui])) {
              f.dx[ci] = 2 * prev.dx[ui];
              f.dy[ci] = 2 * prev.dy[ui];
              f.dist[ci] = p.distance(x, y, x + f.dx[ci], y + f.dy[ci]);
            } else {
              random_init_entry(f, p, ci,
                                init.split(static_cast<std::uint64_t>(ci)));
            }
          }
        }
      } else {
        refresh_distances(f, p);
      }

      for (int it = 0; it < cfg.nnf_iterations; ++it)
        sweep(f, p, it, stream, cfg.random_search_decay);

      if (!vote(f, p, lvl.hole, lvl.image) && em > 0) break;
    }
    prev = std::move(f);
  }

  std::vector<double> out(image.pixels().begin(), image.pixels().end());
  const Level& finest = pyramid.front();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (finest.hole.b[i]) out[i] = finest.image.v[i];
  return Image2D(image.width(), image.height(), std::move(out));
}

LayerPair initialize_layers(const Image2D& image, const RegionSpec& regions,
                            const InpaintConfig& cfg) {
  validate(cfg);
  validate_regions(image, regions, cfg.patch_size);
  const CropWindow window = bounding_window(regions.overlap);

  // Each layer gets its own seed stream so the two fills are independent.
  InpaintConfig cfg_x = cfg;
  InpaintConfig cfg_y = cfg;
  cfg_x.rng_seed = CounterRng(cfg.rng_seed).split(1).next();
  cfg_y.rng_seed = CounterRng(cfg.rng_seed).split(2).next();

  LayerPair layers;
  layers.window = window;
  layers.x = crop(fill_hole(image, regions.overlap, regions.n1, cfg_x), window);
  layers.y = crop(fill_hole(image, regions.overlap, regions.n2, cfg_y), window);
  layers.valid = crop(regions.overlap, window);
  return layers;
}

}  // namespace layersplit
