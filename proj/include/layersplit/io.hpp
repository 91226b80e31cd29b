#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "layersplit/calibrate.hpp"
#include "layersplit/core.hpp"
#include "layersplit/simulate.hpp"

namespace layersplit::io {

/// Reads a PNG as normalized grayscale. 8-bit samples map by v/255 and
/// 16-bit by v/65535; color images are reduced to BT.601 luminance and any
/// alpha channel is dropped. Throws IoError.
Image2D read_image(const std::filesystem::path& path);

/// Reads a PNG mask; a pixel is set when any color channel is nonzero.
Mask2D read_mask(const std::filesystem::path& path);

/// Writes a 16-bit grayscale PNG, sample = round(v * 65535).
void write_image(const std::filesystem::path& path, const Image2D& image);

/// Writes an 8-bit grayscale PNG with set pixels at 255.
void write_mask(const std::filesystem::path& path, const Mask2D& mask);

/// Parses a scene description. Relative image-texture paths resolve
/// against `base_dir`.
SceneSpec scene_from_json(const nlohmann::json& j,
                          const std::filesystem::path& base_dir);

/// "w1,w2,error" header, then one %.17g row per grid point, i-major.
std::string surface_csv(const ErrorSurface& surface);

nlohmann::json load_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace layersplit::io
