#pragma once

// Gridded landscapes, parcel selections, masking and patch decomposition.
//
// Parcels are addressed in row-major order: parcel p = row * n + col.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace reserve {

inline constexpr double kDefaultHabitatThreshold = 0.5;

enum class Adjacency { kFour = 4, kEight = 8 };

Adjacency adjacency_from_int(int neighbours);

struct Landscape {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<double> suitability;  // n*n, each in [0,1]
  std::vector<double> cost;         // n*n, each > 0

  std::size_t parcels() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
  double total_cost() const;
  // Throws ReserveError if any stored value breaks the type invariants.
  void validate() const;

  friend bool operator==(const Landscape&, const Landscape&) = default;
};

// Binary preservation decision per parcel.
struct Selection {
  std::vector<std::uint8_t> bits;

  static Selection all_ones(std::size_t parcels) { return {std::vector<std::uint8_t>(parcels, 1)}; }
  static Selection all_zeros(std::size_t parcels) { return {std::vector<std::uint8_t>(parcels, 0)}; }

  std::size_t size() const { return bits.size(); }
  std::size_t count() const;
  std::string to_string() const;

  friend bool operator==(const Selection&, const Selection&) = default;
  friend auto operator<=>(const Selection&, const Selection&) = default;
};

// Masked suitability raster Z, Z_p = B_p * X_p.
struct Habitat {
  int n = 0;
  std::vector<double> suitability;

  friend bool operator==(const Habitat&, const Habitat&) = default;
};

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Patch {
  int id = 0;               // 1-based
  std::vector<Cell> cells;  // row-major order
  double ths = 0.0;         // total habitat suitability
  double centroid_row = 0.0;
  double centroid_col = 0.0;
};

struct PatchSet {
  std::vector<Patch> patches;
  int n = 0;
  double threshold = kDefaultHabitatThreshold;

  std::size_t size() const { return patches.size(); }
  bool empty() const { return patches.empty(); }
  // n*n raster of patch ids, 0 for non-habitable cells.
  std::vector<int> label_raster() const;
};

// Suitability ~ U[0,1) and cost ~ U[1,10), drawn from independent substreams of
// `seed`. Throws InvalidDimensionError for n < 2.
Landscape generate_landscape(int n, std::uint64_t seed);

Habitat mask(const Landscape& landscape, const Selection& selection);
Habitat full_habitat(const Landscape& landscape);

// Connected components of cells with suitability strictly above `threshold`.
// Ids follow row-major order of each component's first cell.
PatchSet extract_patches(const Habitat& habitat, double threshold = kDefaultHabitatThreshold,
                         Adjacency adjacency = Adjacency::kFour);

double selection_cost(const Landscape& landscape, const Selection& selection);

// Landscape text format:
//   n <int>
//   seed <uint64>
//   n rows of suitability (17 significant digits)
//   <blank>
//   n rows of cost
// Lines starting with '#' before the first record are ignored on load.
void save_landscape(const Landscape& landscape, std::ostream& out);
Landscape load_landscape(std::istream& in);
void save_landscape(const Landscape& landscape, const std::filesystem::path& path,
                    const std::string& header = {});
Landscape load_landscape(const std::filesystem::path& path);

// Selection text format: n rows of n space-separated 0/1 digits.
void save_selection(const Selection& selection, int n, std::ostream& out);
Selection load_selection(std::istream& in, int n);
Selection load_selection(const std::filesystem::path& path, int n);

}  // namespace reserve
