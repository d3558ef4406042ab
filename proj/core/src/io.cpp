/*
Copyright 2026 The Fringebrush Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "fringebrush/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace fringebrush {
namespace {

constexpr std::int64_t kMaxPixels = 1 << 28;  // 256M entries per raster

void append_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

void append_f32(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  append_u32(out, bits);
}

void append_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  append_u64(out, bits);
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::string data((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("read failed: " + path);
  return data;
}

// Bounds-checked little-endian reader over a loaded buffer.
class Cursor {
 public:
  Cursor(const std::string& data, const std::string& path)
      : data_(reinterpret_cast<const unsigned char*>(data.data())),
        size_(data.size()),
        path_(path) {}

  void expect_magic(const char* magic) {
    if (size_ - pos_ < 4 || std::memcmp(data_ + pos_, magic, 4) != 0) {
      throw IoError(std::string("bad magic, expected ") + magic + ": " +
                    path_);
    }
    pos_ += 4;
  }
  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  const unsigned char* raw(std::size_t n) {
    need(n);
    const unsigned char* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  void expect_end() const {
    if (pos_ != size_) throw IoError("trailing bytes: " + path_);
  }

 private:
  void need(std::size_t n) const {
    if (size_ - pos_ < n) throw IoError("truncated file: " + path_);
  }
  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
  std::string path_;
};

int checked_dim(std::uint32_t v, const std::string& path) {
  if (v == 0 || v > static_cast<std::uint32_t>(kMaxPixels)) {
    throw IoError("dimension out of range: " + path);
  }
  return static_cast<int>(v);
}

void check_area(std::int64_t h, std::int64_t w, const std::string& path) {
  if (h * w > kMaxPixels) throw IoError("raster too large: " + path);
}

// Netpbm header parsing: fields separated by whitespace, '#' comments run to
// end of line, and exactly one whitespace byte separates maxval from payload.
class PnmHeader {
 public:
  PnmHeader(const std::string& data, const std::string& path)
      : data_(data), path_(path) {}

  void expect_magic(const char* magic) {
    if (data_.size() < 2 || data_[0] != magic[0] || data_[1] != magic[1]) {
      throw IoError(std::string("bad magic, expected ") + magic + ": " +
                    path_);
    }
    pos_ = 2;
  }
  int field() {
    skip_space();
    if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(
                                    data_[pos_]))) {
      throw IoError("malformed header: " + path_);
    }
    long v = 0;
    while (pos_ < data_.size() &&
           std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      v = v * 10 + (data_[pos_] - '0');
      if (v > kMaxPixels) throw IoError("dimension out of range: " + path_);
      ++pos_;
    }
    return static_cast<int>(v);
  }
  std::size_t payload_offset() {
    // A single whitespace byte terminates the header.
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(
                                    data_[pos_]))) {
      throw IoError("malformed header: " + path_);
    }
    return pos_ + 1;
  }

 private:
  void skip_space() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }
  const std::string& data_;
  std::string path_;
  std::size_t pos_ = 0;
};

ByteImage read_pnm_gray_or_color(const std::string& path, const char* magic,
                                 int channels, std::array<ByteImage, 3>* rgb) {
  const std::string data = read_file(path);
  PnmHeader header(data, path);
  header.expect_magic(magic);
  const int w = header.field();
  const int h = header.field();
  const int maxval = header.field();
  if (w < 1 || h < 1) throw IoError("dimension out of range: " + path);
  check_area(h, w, path);
  if (maxval != 255) throw IoError("maxval must be 255: " + path);
  const std::size_t offset = header.payload_offset();
  const std::size_t expected = static_cast<std::size_t>(h) *
                               static_cast<std::size_t>(w) *
                               static_cast<std::size_t>(channels);
  if (data.size() - offset < expected) {
    throw IoError("truncated file: " + path);
  }
  if (data.size() - offset > expected) {
    throw IoError("trailing bytes: " + path);
  }
  const unsigned char* p =
      reinterpret_cast<const unsigned char*>(data.data()) + offset;
  if (channels == 1) {
    ByteImage img(h, w);
    std::memcpy(img.pixels.data(), p, expected);
    return img;
  }
  for (int ch = 0; ch < 3; ++ch) (*rgb)[ch] = ByteImage(h, w);
  for (std::size_t i = 0; i < expected / 3; ++i) {
    (*rgb)[0].pixels[i] = p[3 * i];
    (*rgb)[1].pixels[i] = p[3 * i + 1];
    (*rgb)[2].pixels[i] = p[3 * i + 2];
  }
  return ByteImage();
}

}  // namespace

ByteImage quantize_u8(const FloatMap& map) {
  ByteImage img(map.height(), map.width());
  const auto& vals = map.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = vals[i];
    if (!std::isfinite(v)) {
      throw std::invalid_argument("quantize_u8: non-finite value");
    }
    const double r = std::round(v);  // halves move away from zero
    img.pixels[i] = static_cast<std::uint8_t>(
        r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
  }
  return img;
}

FloatMap to_float_map(const ByteImage& image) {
  FloatMap map(image.height, image.width);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    map.values()[i] = static_cast<double>(image.pixels[i]);
  }
  return map;
}

void write_fmap(const std::string& path, const FloatMap& map) {
  std::string out;
  out.reserve(12 + map.values().size() * 4);
  out.append("FMAP");
  append_u32(out, static_cast<std::uint32_t>(map.width()));
  append_u32(out, static_cast<std::uint32_t>(map.height()));
  for (double v : map.values()) append_f32(out, static_cast<float>(v));
  write_file(path, out);
}

FloatMap read_fmap(const std::string& path) {
  const std::string data = read_file(path);
  Cursor cur(data, path);
  cur.expect_magic("FMAP");
  const int w = checked_dim(cur.u32(), path);
  const int h = checked_dim(cur.u32(), path);
  check_area(h, w, path);
  FloatMap map(h, w);
  for (double& v : map.values()) v = static_cast<double>(cur.f32());
  cur.expect_end();
  return map;
}

void write_hmat(const std::string& path, const SensingBasis& basis) {
  std::string out;
  out.reserve(12 + basis.entries.size());
  out.append("HMAT");
  append_u32(out, static_cast<std::uint32_t>(basis.rows));
  append_u32(out, static_cast<std::uint32_t>(basis.cols));
  for (std::int8_t e : basis.entries) {
    if (e != 1 && e != -1) {
      throw std::invalid_argument("write_hmat: entries must be +1 or -1");
    }
    out.push_back(static_cast<char>(e));
  }
  write_file(path, out);
}

SensingBasis read_hmat(const std::string& path) {
  const std::string data = read_file(path);
  Cursor cur(data, path);
  cur.expect_magic("HMAT");
  const int m = checked_dim(cur.u32(), path);
  const int n = checked_dim(cur.u32(), path);
  check_area(m, n, path);
  SensingBasis basis;
  basis.rows = m;
  basis.cols = n;
  basis.entries.resize(static_cast<std::size_t>(m) * n);
  const unsigned char* raw = cur.raw(basis.entries.size());
  for (std::size_t i = 0; i < basis.entries.size(); ++i) {
    const std::int8_t e = static_cast<std::int8_t>(raw[i]);
    if (e != 1 && e != -1) {
      throw IoError("matrix entries must be +1 or -1: " + path);
    }
    basis.entries[i] = e;
  }
  cur.expect_end();

  basis.ordering = Ordering::kCustom;
  if (recover_natural_index(basis)) {
    bool natural_prefix = true;
    for (int r = 0; r < m; ++r) {
      if (basis.natural_index[r] != static_cast<std::uint32_t>(r)) {
        natural_prefix = false;
        break;
      }
    }
    if (natural_prefix) {
      basis.ordering = Ordering::kNatural;
    } else {
      const auto perm = cake_cutting_permutation(n);
      bool cake_prefix = true;
      for (int r = 0; r < m; ++r) {
        if (basis.natural_index[r] != perm[r]) {
          cake_prefix = false;
          break;
        }
      }
      if (cake_prefix) basis.ordering = Ordering::kCakeCutting;
    }
  }
  return basis;
}

void write_mset(const std::string& path, const MeasurementSet& ms) {
  for (const auto& c : ms.columns) {
    if (static_cast<int>(c.size()) != ms.basis_rows) {
      throw std::invalid_argument("write_mset: column length mismatch");
    }
  }
  std::string out;
  out.reserve(33 + ms.columns.size() * static_cast<std::size_t>(ms.basis_rows) *
                       8);
  out.append("MSET");
  append_u32(out, static_cast<std::uint32_t>(ms.columns.size()));
  append_u32(out, static_cast<std::uint32_t>(ms.basis_rows));
  append_u32(out, static_cast<std::uint32_t>(ms.basis_cols));
  out.push_back(ms.mode == Mode::kCol ? '\x00' : '\x01');
  append_f64(out, ms.noise_variance);
  append_u64(out, ms.seed);
  for (const auto& c : ms.columns) {
    for (double v : c) append_f64(out, v);
  }
  write_file(path, out);
}

MeasurementSet read_mset(const std::string& path) {
  const std::string data = read_file(path);
  Cursor cur(data, path);
  cur.expect_magic("MSET");
  const std::uint32_t count = cur.u32();
  if (count == 0 || count > static_cast<std::uint32_t>(kMaxPixels)) {
    throw IoError("column count out of range: " + path);
  }
  MeasurementSet ms;
  ms.basis_rows = checked_dim(cur.u32(), path);
  ms.basis_cols = checked_dim(cur.u32(), path);
  check_area(static_cast<std::int64_t>(count), ms.basis_rows, path);
  const std::uint8_t mode = cur.u8();
  if (mode > 1) throw IoError("bad mode byte: " + path);
  ms.mode = mode == 0 ? Mode::kCol : Mode::kRow;
  ms.noise_variance = cur.f64();
  if (!(ms.noise_variance >= 0.0)) {
    throw IoError("noise variance must be non-negative: " + path);
  }
  ms.seed = cur.u64();
  ms.columns.assign(count, std::vector<double>(ms.basis_rows));
  for (auto& c : ms.columns) {
    for (double& v : c) v = cur.f64();
  }
  cur.expect_end();
  return ms;
}

void write_pgm(const std::string& path, const ByteImage& image) {
  if (image.height < 1 || image.width < 1) {
    throw std::invalid_argument("write_pgm: empty image");
  }
  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", image.width,
                image.height);
  std::string out(header);
  out.append(reinterpret_cast<const char*>(image.pixels.data()),
             image.pixels.size());
  write_file(path, out);
}

ByteImage read_pgm(const std::string& path) {
  return read_pnm_gray_or_color(path, "P5", 1, nullptr);
}

void write_ppm(const std::string& path, const ByteImage& r, const ByteImage& g,
               const ByteImage& b) {
  if (r.height < 1 || r.width < 1) {
    throw std::invalid_argument("write_ppm: empty image");
  }
  if (g.height != r.height || g.width != r.width || b.height != r.height ||
      b.width != r.width) {
    throw std::invalid_argument("write_ppm: channel dimensions differ");
  }
  char header[64];
  std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", r.width, r.height);
  std::string out(header);
  out.reserve(out.size() + r.pixels.size() * 3);
  for (std::size_t i = 0; i < r.pixels.size(); ++i) {
    out.push_back(static_cast<char>(r.pixels[i]));
    out.push_back(static_cast<char>(g.pixels[i]));
    out.push_back(static_cast<char>(b.pixels[i]));
  }
  write_file(path, out);
}

std::array<ByteImage, 3> read_ppm(const std::string& path) {
  std::array<ByteImage, 3> rgb;
  read_pnm_gray_or_color(path, "P6", 3, &rgb);
  return rgb;
}

void write_height_mesh(const std::string& path, const FloatMap& height) {
  const int h = height.height();
  const int w = height.width();
  std::string out;
  out.reserve(static_cast<std::size_t>(h) * w * 24);
  char line[96];
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      std::snprintf(line, sizeof(line), "v %d %d %.9g\n", v, u, height(u, v));
      out.append(line);
    }
  }
  auto vid = [w](int u, int v) { return u * w + v + 1; };  // 1-indexed
  for (int u = 0; u + 1 < h; ++u) {
    for (int v = 0; v + 1 < w; ++v) {
      std::snprintf(line, sizeof(line), "f %d %d %d %d\n", vid(u, v),
                    vid(u, v + 1), vid(u + 1, v + 1), vid(u + 1, v));
      out.append(line);
    }
  }
  write_file(path, out);
}

}  // namespace fringebrush
