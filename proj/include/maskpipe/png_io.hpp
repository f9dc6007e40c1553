#pragma once

#include <string>
#include <utility>

#include "maskpipe/raster.hpp"

namespace maskpipe {

// Reads an 8- or 16-bit PNG as grayscale intensities in [0,1] (8-bit values
// divided by 255, 16-bit by 65535). Color inputs are rejected.
GrayImage read_gray_png(const std::string& path);

// (width, height) from the header without decoding the payload.
std::pair<int, int> png_dimensions(const std::string& path);

// value = round(v * 255)
void write_gray8_png(const GrayImage& img, const std::string& path);

// Probability-map interchange: value = round(p * 65535).
void write_gray16_png(const GrayImage& img, const std::string& path);

void write_rgb8_png(const RgbImage& img, const std::string& path);

// 0 -> 0, 1 -> 255.
void write_mask_png(const BinaryMask& mask, const std::string& path);

}  // namespace maskpipe
