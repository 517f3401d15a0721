#include "depict/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace depict {
namespace {

struct HeaderReader {
  const std::string& bytes;
  const std::string& label;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw std::runtime_error(label + ": " + why);
  }

  void skip_space_and_comments() {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos;
      } else {
        break;
      }
    }
  }

  int read_int(const std::string& what) {
    skip_space_and_comments();
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      fail("expected " + what + " in header");
    }
    long long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000'000) fail(what + " too large");
      ++pos;
    }
    return static_cast<int>(v);
  }

  void expect_magic(const char* magic) {
    if (bytes.size() < 2 || bytes[0] != magic[0] || bytes[1] != magic[1]) {
      fail(std::string("not a ") + magic + " file");
    }
    pos = 2;
  }

  // Exactly one whitespace byte separates the header from the raster.
  void finish_header() {
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      fail("missing whitespace before raster data");
    }
    ++pos;
  }
};

}  // namespace

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

Image decode_ppm(const std::string& bytes, const std::string& label) {
  HeaderReader h{bytes, label};
  h.expect_magic("P6");
  Image img;
  img.width = h.read_int("width");
  img.height = h.read_int("height");
  const int maxval = h.read_int("maxval");
  if (img.width < 1 || img.height < 1) h.fail("dimensions must be positive");
  if (maxval != 255) h.fail("maxval must be 255");
  h.finish_header();
  const std::size_t need = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 3;
  if (bytes.size() - h.pos < need) h.fail("truncated raster data");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(h.pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(h.pos + need));
  return img;
}

std::string encode_pbm(const BinaryMask& mask) {
  std::string out = "P4\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n";
  const int row_bytes = (mask.width + 7) / 8;
  std::string row(static_cast<std::size_t>(row_bytes), '\0');
  for (int y = 0; y < mask.height; ++y) {
    std::fill(row.begin(), row.end(), '\0');
    for (int x = 0; x < mask.width; ++x) {
      if (mask.at(x, y)) row[static_cast<std::size_t>(x / 8)] |= static_cast<char>(0x80 >> (x % 8));
    }
    out += row;
  }
  return out;
}

BinaryMask decode_pbm(const std::string& bytes, const std::string& label) {
  HeaderReader h{bytes, label};
  h.expect_magic("P4");
  const int width = h.read_int("width");
  const int height = h.read_int("height");
  if (width < 1 || height < 1) h.fail("dimensions must be positive");
  h.finish_header();
  const std::size_t row_bytes = static_cast<std::size_t>((width + 7) / 8);
  if (bytes.size() - h.pos < row_bytes * static_cast<std::size_t>(height)) h.fail("truncated raster data");
  BinaryMask mask(width, height);
  for (int y = 0; y < height; ++y) {
    const char* row = bytes.data() + h.pos + static_cast<std::size_t>(y) * row_bytes;
    for (int x = 0; x < width; ++x) {
      const bool bit = (static_cast<unsigned char>(row[x / 8]) >> (7 - x % 8)) & 1;
      mask.set(x, y, bit);
    }
  }
  return mask;
}

std::string encode_pgm(const std::vector<double>& values, int width, int height) {
  if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != values.size()) {
    throw std::invalid_argument("pgm plane size mismatch");
  }
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + values.size());
  for (const double v : values) {
    const double clamped = std::clamp(v, 0.0, 255.0);
    out += static_cast<char>(static_cast<int>(std::lround(clamped)));
  }
  return out;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read failed for " + path);
  return bytes;
}

void write_file_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_ppm(const std::string& path, const Image& img) { write_file_bytes(path, encode_ppm(img)); }

Image read_ppm(const std::string& path) { return decode_ppm(read_file_bytes(path), path); }

void write_pbm(const std::string& path, const BinaryMask& mask) { write_file_bytes(path, encode_pbm(mask)); }

BinaryMask read_pbm(const std::string& path) { return decode_pbm(read_file_bytes(path), path); }

}  // namespace depict
