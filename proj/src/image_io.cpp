#include "evolba/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace evolba {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void put_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32_le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("EVB1: truncated file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

ImageTensor load_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open PNG: " + path);

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  std::vector<png_bytep> rows;
  std::vector<unsigned char> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("PNG decode failed: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);

  // Normalize whatever we load to 8-bit RGB.
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
    png_set_strip_alpha(png);
  png_read_update_info(png, info);

  pixels.resize(static_cast<std::size_t>(w) * h * 3);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageTensor img(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < img.size(); ++i)
    img.data[i] = pixels[i] / 255.0;
  return img;
}

void save_png(const std::string& path, const ImageTensor& img) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot write PNG: " + path);

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  std::vector<unsigned char> pixels(img.size());
  std::vector<png_bytep> rows(img.height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("PNG encode failed: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::min(1.0, std::max(0.0, img.data[i]));
    pixels[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  for (int y = 0; y < img.height; ++y)
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * img.width * 3;
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
}

ImageTensor load_evb1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open EVB1: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "EVB1", 4) != 0)
    throw std::runtime_error("EVB1: bad magic in " + path);
  const std::uint32_t w = get_u32_le(is);
  const std::uint32_t h = get_u32_le(is);
  if (w == 0 || h == 0 || w > 1u << 20 || h > 1u << 20)
    throw std::runtime_error("EVB1: implausible dimensions in " + path);
  const std::size_t n = static_cast<std::size_t>(3) * w * h;
  std::vector<unsigned char> raw(n * 4);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!is) throw std::runtime_error("EVB1: truncated payload in " + path);

  ImageTensor img(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * i]) |
                         (static_cast<std::uint32_t>(raw[4 * i + 1]) << 8) |
                         (static_cast<std::uint32_t>(raw[4 * i + 2]) << 16) |
                         (static_cast<std::uint32_t>(raw[4 * i + 3]) << 24);
    float f;
    std::memcpy(&f, &bits, 4);
    img.data[i] = std::min(1.0, std::max(0.0, static_cast<double>(f)));
  }
  return img;
}

void save_evb1(const std::string& path, const ImageTensor& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write EVB1: " + path);
  os.write("EVB1", 4);
  put_u32_le(os, static_cast<std::uint32_t>(img.width));
  put_u32_le(os, static_cast<std::uint32_t>(img.height));
  for (const double v : img.data) {
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    unsigned char b[4] = {static_cast<unsigned char>(bits & 0xff),
                          static_cast<unsigned char>((bits >> 8) & 0xff),
                          static_cast<unsigned char>((bits >> 16) & 0xff),
                          static_cast<unsigned char>((bits >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
  }
  if (!os) throw std::runtime_error("EVB1: write failed for " + path);
}

ImageTensor load_image(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".png" || ext == ".PNG") return load_png(path);
  if (ext == ".evb1" || ext == ".EVB1") return load_evb1(path);
  throw std::runtime_error("unsupported image extension: " + path);
}

}  // namespace evolba
