#pragma once

#include <string>

#include "depict/raster.hpp"

namespace depict {

// Binary PPM (P6, maxval 255), PBM (P4), and PGM (P5, maxval 255) codecs.
// Encoders are bit-exact; decoders accept `#` comments in the header and
// report malformed input with the file name or a caller-supplied label.

std::string encode_ppm(const Image& img);
Image decode_ppm(const std::string& bytes, const std::string& label = "ppm");

std::string encode_pbm(const BinaryMask& mask);
BinaryMask decode_pbm(const std::string& bytes, const std::string& label = "pbm");

// Grayscale plane, values clamped to [0,255].
std::string encode_pgm(const std::vector<double>& values, int width, int height);

void write_ppm(const std::string& path, const Image& img);
Image read_ppm(const std::string& path);
void write_pbm(const std::string& path, const BinaryMask& mask);
BinaryMask read_pbm(const std::string& path);

std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::string& bytes);

}  // namespace depict
