#include "reserve/render.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "reserve/errors.hpp"

namespace reserve {
namespace {

void require_scale(int scale) {
  if (scale < 1) throw InvalidArgumentError("render scale must be >= 1");
}

void write_header(std::ostream& out, const char* magic, int side, const std::string& comment) {
  out << magic << '\n';
  if (!comment.empty()) out << "# " << comment << '\n';
  out << side << ' ' << side << '\n' << 255 << '\n';
}

}  // namespace

Rgb patch_color(int id) {
  const double hue = std::fmod(static_cast<double>(id) * 137.508, 360.0);
  const double sector = hue / 60.0;
  const int i = static_cast<int>(std::floor(sector)) % 6;
  const double f = sector - std::floor(sector);
  const double rise = f;
  const double fall = 1.0 - f;
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  switch (i) {
    case 0: r = 1.0; g = rise; b = 0.0; break;
    case 1: r = fall; g = 1.0; b = 0.0; break;
    case 2: r = 0.0; g = 1.0; b = rise; break;
    case 3: r = 0.0; g = fall; b = 1.0; break;
    case 4: r = rise; g = 0.0; b = 1.0; break;
    default: r = 1.0; g = 0.0; b = fall; break;
  }
  auto to_byte = [](double c) { return static_cast<std::uint8_t>(std::lround(255.0 * c)); };
  return Rgb{to_byte(r), to_byte(g), to_byte(b)};
}

void write_suitability_pgm(const Habitat& habitat, int scale, std::ostream& out, const std::string& comment) {
  require_scale(scale);
  const int n = habitat.n;
  if (habitat.suitability.size() != static_cast<std::size_t>(n) * n) throw DimensionError("habitat is not n*n");
  write_header(out, "P2", n * scale, comment);
  for (int r = 0; r < n * scale; ++r) {
    for (int c = 0; c < n * scale; ++c) {
      const double s = std::clamp(habitat.suitability[static_cast<std::size_t>((r / scale) * n + c / scale)], 0.0, 1.0);
      if (c > 0) out << ' ';
      out << static_cast<int>(std::floor(s * 255.0));
    }
    out << '\n';
  }
}

void write_patches_ppm(const PatchSet& patches, int scale, std::ostream& out, const std::string& comment) {
  require_scale(scale);
  const int n = patches.n;
  const std::vector<int> labels = patches.label_raster();
  std::vector<Rgb> palette(patches.size() + 1);
  for (std::size_t id = 1; id < palette.size(); ++id) palette[id] = patch_color(static_cast<int>(id));

  write_header(out, "P3", n * scale, comment);
  for (int r = 0; r < n * scale; ++r) {
    for (int c = 0; c < n * scale; ++c) {
      const Rgb px = palette[static_cast<std::size_t>(labels[static_cast<std::size_t>((r / scale) * n + c / scale)])];
      if (c > 0) out << ' ';
      out << int{px.r} << ' ' << int{px.g} << ' ' << int{px.b};
    }
    out << '\n';
  }
}

}  // namespace reserve
