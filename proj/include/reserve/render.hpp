#pragma once

// Plain-text portable graymap (P2) and pixmap (P3) rendering of rasters.
// Each parcel becomes a scale x scale block of pixels.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reserve/landscape.hpp"

namespace reserve {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Hue (id * 137.508 deg) mod 360 at full saturation and value; channels are
// round(255 * c) of the standard HSV sector formula.
Rgb patch_color(int id);

// Pixel value floor(s * 255) with s clamped to [0,1]. `comment`, when
// non-empty, is written as a '#' line right after the magic number.
void write_suitability_pgm(const Habitat& habitat, int scale, std::ostream& out, const std::string& comment = {});

// Background black, patch i filled with patch_color(i).
void write_patches_ppm(const PatchSet& patches, int scale, std::ostream& out, const std::string& comment = {});

}  // namespace reserve
