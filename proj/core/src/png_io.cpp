/*
 * Copyright 2026 The ldseg authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ldseg/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>

#include "ldseg/errors.hpp"

namespace ldseg {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
};

FilePtr open_for_read(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open file: " + path);
  return f;
}

void check_signature(std::FILE* f, const std::string& path) {
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, f) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw FormatError("not a PNG file: " + path);
  std::rewind(f);
}

struct Decoded {
  int height = 0;
  int width = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<std::uint8_t> bytes; // raw rows, tightly packed
  std::size_t rowbytes = 0;
};

Decoded decode(const std::string& path, bool expand_palette) {
  FilePtr f = open_for_read(path);
  check_signature(f.get(), path);

  PngReader r;
  if (!r.png || !r.info) throw Error("libpng allocation failure");
  if (setjmp(png_jmpbuf(r.png))) throw FormatError("corrupt PNG file: " + path);

  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);

  Decoded d;
  d.width = static_cast<int>(png_get_image_width(r.png, r.info));
  d.height = static_cast<int>(png_get_image_height(r.png, r.info));
  d.bit_depth = png_get_bit_depth(r.png, r.info);
  d.color_type = png_get_color_type(r.png, r.info);

  if (d.color_type == PNG_COLOR_TYPE_PALETTE && expand_palette) png_set_palette_to_rgb(r.png);
  if (d.color_type == PNG_COLOR_TYPE_GRAY && d.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (d.bit_depth == 16) png_set_swap(r.png); // little-endian in memory
  png_set_strip_alpha(r.png);

  png_read_update_info(r.png, r.info);
  d.color_type = png_get_color_type(r.png, r.info);
  d.bit_depth = png_get_bit_depth(r.png, r.info);
  d.rowbytes = png_get_rowbytes(r.png, r.info);

  d.bytes.resize(d.rowbytes * d.height);
  std::vector<png_bytep> rows(d.height);
  for (int y = 0; y < d.height; ++y) rows[y] = d.bytes.data() + d.rowbytes * y;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return d;
}

void encode(png_structp png, png_infop info, int height, int width, int bit_depth, int color_type,
            const std::vector<Rgb>* palette, const std::vector<png_bytep>& rows) {
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  std::vector<png_color> pal;
  if (palette) {
    pal.reserve(palette->size());
    for (const auto& c : *palette) pal.push_back(png_color{c[0], c[1], c[2]});
    png_set_PLTE(png, info, pal.data(), static_cast<int>(pal.size()));
  }
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  png_write_image(png, const_cast<png_bytep*>(rows.data()));
  png_write_end(png, nullptr);
}

} // namespace

GrayImage read_gray_png(const std::string& path) {
  Decoded d = decode(path, /*expand_palette=*/false);
  if (d.color_type != PNG_COLOR_TYPE_GRAY)
    throw FormatError("expected single-channel grayscale PNG: " + path);
  GrayImage out;
  out.height = d.height;
  out.width = d.width;
  out.bit_depth = d.bit_depth;
  out.pixels.resize(static_cast<std::size_t>(d.height) * d.width);
  if (d.bit_depth == 8) {
    for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] = d.bytes[i];
  } else if (d.bit_depth == 16) {
    std::memcpy(out.pixels.data(), d.bytes.data(), out.pixels.size() * 2);
  } else {
    throw FormatError("unsupported grayscale bit depth in " + path);
  }
  return out;
}

LabelMap read_label_png(const std::string& path) {
  Decoded d = decode(path, /*expand_palette=*/false);
  if (!(d.color_type == PNG_COLOR_TYPE_GRAY || d.color_type == PNG_COLOR_TYPE_PALETTE))
    throw FormatError("mask PNG must be 8-bit grayscale or indexed: " + path);
  if (d.bit_depth != 8) throw FormatError("mask PNG must be 8-bit: " + path);
  LabelMap out(d.height, d.width);
  for (int r = 0; r < d.height; ++r)
    for (int c = 0; c < d.width; ++c) out(r, c) = d.bytes[d.rowbytes * r + c];
  return out;
}

RgbImage read_rgb_png(const std::string& path) {
  Decoded d = decode(path, /*expand_palette=*/true);
  if (d.color_type != PNG_COLOR_TYPE_RGB || d.bit_depth != 8)
    throw FormatError("expected 8-bit RGB PNG: " + path);
  RgbImage out;
  out.height = d.height;
  out.width = d.width;
  out.data.resize(static_cast<std::size_t>(d.height) * d.width * 3);
  for (int r = 0; r < d.height; ++r)
    std::memcpy(out.data.data() + static_cast<std::size_t>(r) * d.width * 3, d.bytes.data() + d.rowbytes * r,
                static_cast<std::size_t>(d.width) * 3);
  return out;
}

void write_gray_png(const std::string& path, const GrayImage& img) {
  if (img.bit_depth != 8 && img.bit_depth != 16) throw ValueError("gray PNG bit depth must be 8 or 16");
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open file for writing: " + path);
  PngWriter w;
  if (!w.png || !w.info) throw Error("libpng allocation failure");
  if (setjmp(png_jmpbuf(w.png))) throw IoError("PNG write failure: " + path);
  png_init_io(w.png, f.get());

  std::vector<std::uint8_t> bytes;
  std::vector<png_bytep> rows(img.height);
  const std::size_t rowbytes = static_cast<std::size_t>(img.width) * (img.bit_depth / 8);
  bytes.resize(rowbytes * img.height);
  if (img.bit_depth == 8) {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) bytes[i] = static_cast<std::uint8_t>(img.pixels[i] & 0xFF);
  } else {
    std::memcpy(bytes.data(), img.pixels.data(), img.pixels.size() * 2);
  }
  for (int y = 0; y < img.height; ++y) rows[y] = bytes.data() + rowbytes * y;
  encode(w.png, w.info, img.height, img.width, img.bit_depth, PNG_COLOR_TYPE_GRAY, nullptr, rows);
}

void write_label_png(const std::string& path, const LabelMap& labels, const std::vector<Rgb>& palette) {
  if (labels.maxCoeff() > 255 || labels.minCoeff() < 0)
    throw ValueError("label values must fit 8-bit indexed PNG");
  if (palette.empty() || palette.size() > 256) throw ValueError("palette must hold 1..256 entries");
  if (labels.maxCoeff() >= static_cast<std::int32_t>(palette.size()))
    throw ValueError("palette smaller than max label value");
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open file for writing: " + path);
  PngWriter w;
  if (!w.png || !w.info) throw Error("libpng allocation failure");
  if (setjmp(png_jmpbuf(w.png))) throw IoError("PNG write failure: " + path);
  png_init_io(w.png, f.get());

  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(labels.rows()) * labels.cols());
  for (Eigen::Index r = 0; r < labels.rows(); ++r)
    for (Eigen::Index c = 0; c < labels.cols(); ++c)
      bytes[static_cast<std::size_t>(r) * labels.cols() + c] = static_cast<std::uint8_t>(labels(r, c));
  std::vector<png_bytep> rows(labels.rows());
  for (Eigen::Index y = 0; y < labels.rows(); ++y) rows[y] = bytes.data() + static_cast<std::size_t>(y) * labels.cols();
  encode(w.png, w.info, static_cast<int>(labels.rows()), static_cast<int>(labels.cols()), 8,
         PNG_COLOR_TYPE_PALETTE, &palette, rows);
}

namespace {

void write_rgb_rows(png_structp png, png_infop info, const RgbImage& img) {
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = const_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * img.width * 3);
  encode(png, info, img.height, img.width, 8, PNG_COLOR_TYPE_RGB, nullptr, rows);
}

} // namespace

void write_rgb_png(const std::string& path, const RgbImage& img) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open file for writing: " + path);
  PngWriter w;
  if (!w.png || !w.info) throw Error("libpng allocation failure");
  if (setjmp(png_jmpbuf(w.png))) throw IoError("PNG write failure: " + path);
  png_init_io(w.png, f.get());
  write_rgb_rows(w.png, w.info, img);
}

std::vector<std::uint8_t> encode_rgb_png(const RgbImage& img) {
  std::vector<std::uint8_t> out;
  PngWriter w;
  if (!w.png || !w.info) throw Error("libpng allocation failure");
  if (setjmp(png_jmpbuf(w.png))) throw Error("in-memory PNG encode failure");
  png_set_write_fn(
      w.png, &out,
      [](png_structp png, png_bytep data, png_size_t len) {
        auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
        buf->insert(buf->end(), data, data + len);
      },
      [](png_structp) {});
  write_rgb_rows(w.png, w.info, img);
  return out;
}

} // namespace ldseg
