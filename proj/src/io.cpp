#include "layersplit/io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace layersplit::io {

namespace {

struct RawPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;  // 1 (gray) or 3 (RGB) after normalization
  int bit_depth = 0;
  std::vector<png_byte> bytes;
  std::vector<png_bytep> rows;
  std::string error;
};

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Error io_error(const std::filesystem::path& path, const std::string& what) {
  return Error(ErrorCode::IoError, path.string() + ": " + what);
}

void on_png_error(png_structp png, png_const_charp msg) {
  auto* raw = static_cast<RawPng*>(png_get_error_ptr(png));
  if (raw) raw->error = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

// libpng reports errors by longjmp; this frame owns nothing with a
// destructor, so the jump is safe. Buffers live in `raw`.
bool decode_png(std::FILE* file, RawPng* raw) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, raw,
                                           on_png_error, on_png_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, file);
  png_read_info(png, info);

  png_set_expand(png);  // palette -> RGB, low-bit gray -> 8 bit, tRNS -> alpha
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  raw->width = png_get_image_width(png, info);
  raw->height = png_get_image_height(png, info);
  raw->bit_depth = png_get_bit_depth(png, info);
  raw->channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  raw->bytes.resize(stride * raw->height);
  raw->rows.resize(raw->height);
  for (png_uint_32 y = 0; y < raw->height; ++y)
    raw->rows[y] = raw->bytes.data() + y * stride;
  png_read_image(png, raw->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

RawPng read_raw(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw io_error(path, "cannot open file");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw io_error(path, "not a PNG file");
  std::rewind(file.get());
  RawPng raw;
  if (!decode_png(file.get(), &raw))
    throw io_error(path, raw.error.empty() ? "PNG decode failed" : raw.error);
  if (raw.channels != 1 && raw.channels != 3)
    throw io_error(path, "unsupported channel layout");
  if (raw.width > 1u << 20 || raw.height > 1u << 20)
    throw io_error(path, "image too large");
  return raw;
}

// Sample c of pixel (x, y), normalized to [0,1].
double raw_sample(const RawPng& raw, png_uint_32 x, png_uint_32 y, int c) {
  const png_bytep row = raw.rows[y];
  if (raw.bit_depth == 16) {
    const std::size_t i = (static_cast<std::size_t>(x) * raw.channels + c) * 2;
    return ((row[i] << 8) | row[i + 1]) / 65535.0;
  }
  return row[static_cast<std::size_t>(x) * raw.channels + c] / 255.0;
}

struct EncodeJob {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 8;
  std::vector<png_bytep> rows;
  std::string error;
};

bool encode_png(std::FILE* file, EncodeJob* job) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, job,
                                            on_png_error, on_png_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_IHDR(png, info, job->width, job->height, job->bit_depth,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, job->rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void write_gray(const std::filesystem::path& path, int width, int height,
                int bit_depth, std::vector<png_byte>& bytes) {
  EncodeJob job;
  job.width = static_cast<png_uint_32>(width);
  job.height = static_cast<png_uint_32>(height);
  job.bit_depth = bit_depth;
  const std::size_t stride = static_cast<std::size_t>(width) * bit_depth / 8;
  for (int y = 0; y < height; ++y) job.rows.push_back(bytes.data() + y * stride);

  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw io_error(path, "cannot open for writing");
  if (!encode_png(file.get(), &job))
    throw io_error(path, job.error.empty() ? "PNG encode failed" : job.error);
  if (std::fflush(file.get()) != 0) throw io_error(path, "write failed");
}

}  // namespace

Image2D read_image(const std::filesystem::path& path) {
  const RawPng raw = read_raw(path);
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(raw.width) * raw.height);
  for (png_uint_32 y = 0; y < raw.height; ++y) {
    for (png_uint_32 x = 0; x < raw.width; ++x) {
      if (raw.channels == 1) {
        data.push_back(raw_sample(raw, x, y, 0));
      } else {
        data.push_back(0.299 * raw_sample(raw, x, y, 0) +
                       0.587 * raw_sample(raw, x, y, 1) +
                       0.114 * raw_sample(raw, x, y, 2));
      }
    }
  }
  return Image2D(static_cast<int>(raw.width), static_cast<int>(raw.height),
                 std::move(data));
}

Mask2D read_mask(const std::filesystem::path& path) {
  const RawPng raw = read_raw(path);
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(raw.width) * raw.height);
  for (png_uint_32 y = 0; y < raw.height; ++y) {
    for (png_uint_32 x = 0; x < raw.width; ++x) {
      bool set = false;
      for (int c = 0; c < raw.channels; ++c)
        set = set || raw_sample(raw, x, y, c) > 0.0;
      bits.push_back(set ? 1 : 0);
    }
  }
  return Mask2D(static_cast<int>(raw.width), static_cast<int>(raw.height),
                std::move(bits));
}

void write_image(const std::filesystem::path& path, const Image2D& image) {
  std::vector<png_byte> bytes;
  bytes.reserve(image.size() * 2);
  for (double v : image.pixels()) {
    const auto q = static_cast<unsigned>(std::lround(v * 65535.0));
    bytes.push_back(static_cast<png_byte>(q >> 8));
    bytes.push_back(static_cast<png_byte>(q & 0xff));
  }
  write_gray(path, image.width(), image.height(), 16, bytes);
}

void write_mask(const std::filesystem::path& path, const Mask2D& mask) {
  std::vector<png_byte> bytes;
  bytes.reserve(mask.bits().size());
  for (auto b : mask.bits()) bytes.push_back(b ? 255 : 0);
  write_gray(path, mask.width(), mask.height(), 8, bytes);
}

namespace {

CropWindow rect_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4)
    throw Error(ErrorCode::ConfigError, "rect must be [x0, y0, width, height]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

Texture texture_from_json(const nlohmann::json& j,
                          const std::filesystem::path& base_dir) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return texture::Constant{j.at("value").get<double>()};
  if (kind == "stripes") {
    texture::Stripes s;
    s.period = j.value("period", s.period);
    s.lo = j.value("lo", s.lo);
    s.hi = j.value("hi", s.hi);
    const std::string orient = j.value("orientation", std::string("vertical"));
    if (orient == "vertical")
      s.orientation = texture::Orientation::Vertical;
    else if (orient == "horizontal")
      s.orientation = texture::Orientation::Horizontal;
    else
      throw Error(ErrorCode::ConfigError, "unknown stripe orientation " + orient);
    return s;
  }
  if (kind == "checker") {
    texture::Checker c;
    c.cell = j.value("cell", c.cell);
    c.lo = j.value("lo", c.lo);
    c.hi = j.value("hi", c.hi);
    return c;
  }
  if (kind == "image") {
    std::filesystem::path p = j.at("path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return texture::FromImage{read_image(p)};
  }
  throw Error(ErrorCode::ConfigError, "unknown texture kind " + kind);
}

}  // namespace

SceneSpec scene_from_json(const nlohmann::json& j,
                          const std::filesystem::path& base_dir) {
  try {
    SceneSpec s;
    const auto& canvas = j.at("canvas");
    s.width = canvas.at("width").get<int>();
    s.height = canvas.at("height").get<int>();
    s.tissue1_rect = rect_from_json(j.at("tissue1").at("rect"));
    s.tissue2_rect = rect_from_json(j.at("tissue2").at("rect"));
    s.tissue1_texture = texture_from_json(j.at("tissue1").at("texture"), base_dir);
    s.tissue2_texture = texture_from_json(j.at("tissue2").at("texture"), base_dir);
    s.noise_sigma = j.value("noise_sigma", 0.0);
    s.rng_seed = j.value("seed", std::uint64_t{0});
    s.neighborhood_margin = j.value("neighborhood_margin", s.neighborhood_margin);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("scene config: ") + e.what());
  }
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path, "cannot open for writing");
  out << text;
  if (!out) throw io_error(path, "write failed");
}

std::string surface_csv(const ErrorSurface& surface) {
  std::string csv = "w1,w2,error\n";
  char row[96];
  for (int i = 0; i < surface.n; ++i)
    for (int j = 0; j < surface.n; ++j) {
      std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", surface.weight(i),
                    surface.weight(j), surface.at(i, j));
      csv += row;
    }
  return csv;
}

}  // namespace layersplit::io
