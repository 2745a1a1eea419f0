#pragma once

#include "polydither/halftone.hpp"

#include <string>
#include <vector>

namespace polydither {

class ImageIOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// PGM (P5 binary or P2 ascii, maxval <= 255).
GrayImage readPGM(const std::string& path);
void writePGM(const GrayImage& image, const std::string& path);

// PBM P4, MSB-first packed rows, 1 = black.
void writePBM(const BinaryImage& image, const std::string& path);
BinaryImage readPBM(const std::string& path);

// 8-bit grayscale PNG. Color inputs are rejected. An optional tEXt chunk
// (key "provenance") records the generating table's hash on outputs.
GrayImage readGrayPNG(const std::string& path);
void writeGrayPNG(const GrayImage& image, const std::string& path,
                  const std::string& provenance = "");
void writeBinaryPNG(const BinaryImage& image, const std::string& path,
                    const std::string& provenance = "");

// 16-bit grayscale PNG (spectrum exports).
void writeGray16PNG(const std::vector<std::uint16_t>& pixels, int width, int height,
                    const std::string& path);

// Dispatch by file extension: .pgm or .png.
GrayImage readGrayImage(const std::string& path);
// .pbm, .pgm or .png; 1-bits become black pixels in gray formats.
void writeBinaryImage(const BinaryImage& image, const std::string& path,
                      const std::string& provenance = "");

}  // namespace polydither
