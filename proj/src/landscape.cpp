#include "reserve/landscape.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "reserve/errors.hpp"
#include "reserve/random.hpp"

namespace reserve {
namespace {

void require_size(const Landscape& landscape, const Selection& selection) {
  if (selection.size() != landscape.parcels()) {
    throw DimensionError("selection has " + std::to_string(selection.size()) + " entries, landscape has " +
                         std::to_string(landscape.parcels()) + " parcels");
  }
}

std::string format_17(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_raster(std::ostream& out, const std::vector<double>& values, int n) {
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c > 0) out << ' ';
      out << format_17(values[static_cast<std::size_t>(r * n + c)]);
    }
    out << '\n';
  }
}

// Next line that is not a comment; blank lines are returned as-is.
bool next_record(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    return true;
  }
  return false;
}

bool next_nonblank(std::istream& in, std::string& line, int& line_no) {
  while (next_record(in, line, line_no)) {
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

double parse_double(const std::string& token, int line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ConfigError("landscape", line_no, "bad number '" + token + "'");
  }
  return value;
}

std::vector<double> read_raster(std::istream& in, int n, int& line_no) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  std::string line;
  for (int r = 0; r < n; ++r) {
    if (!next_nonblank(in, line, line_no)) throw ConfigError("landscape", line_no, "unexpected end of file");
    std::istringstream row(line);
    std::string token;
    int cols = 0;
    while (row >> token) {
      values.push_back(parse_double(token, line_no));
      ++cols;
    }
    if (cols != n) {
      throw ConfigError("landscape", line_no, "expected " + std::to_string(n) + " values, got " + std::to_string(cols));
    }
  }
  return values;
}

}  // namespace

Adjacency adjacency_from_int(int neighbours) {
  if (neighbours == 4) return Adjacency::kFour;
  if (neighbours == 8) return Adjacency::kEight;
  throw InvalidArgumentError("adjacency must be 4 or 8, got " + std::to_string(neighbours));
}

double Landscape::total_cost() const { return std::accumulate(cost.begin(), cost.end(), 0.0); }

void Landscape::validate() const {
  if (n < 2) throw InvalidDimensionError("landscape side length must be >= 2, got " + std::to_string(n));
  if (suitability.size() != parcels() || cost.size() != parcels()) {
    throw DimensionError("landscape arrays do not match n*n");
  }
  for (double s : suitability) {
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgumentError("suitability outside [0,1]: " + format_17(s));
  }
  for (double c : cost) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgumentError("cost must be positive: " + format_17(c));
  }
}

std::size_t Selection::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::string Selection::to_string() const {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

std::vector<int> PatchSet::label_raster() const {
  std::vector<int> labels(static_cast<std::size_t>(n) * n, 0);
  for (const auto& patch : patches) {
    for (const auto& cell : patch.cells) labels[static_cast<std::size_t>(cell.row * n + cell.col)] = patch.id;
  }
  return labels;
}

Landscape generate_landscape(int n, std::uint64_t seed) {
  if (n < 2) throw InvalidDimensionError("landscape side length must be >= 2, got " + std::to_string(n));
  Landscape out;
  out.n = n;
  out.seed = seed;
  const auto parcels = out.parcels();
  out.suitability.resize(parcels);
  out.cost.resize(parcels);

  Engine suit_rng = make_engine(seed, stream::kSuitability);
  for (auto& s : out.suitability) s = uniform01(suit_rng);
  Engine cost_rng = make_engine(seed, stream::kCost);
  for (auto& c : out.cost) c = 1.0 + 9.0 * uniform01(cost_rng);
  return out;
}

Habitat mask(const Landscape& landscape, const Selection& selection) {
  require_size(landscape, selection);
  Habitat out{landscape.n, std::vector<double>(landscape.parcels(), 0.0)};
  for (std::size_t p = 0; p < landscape.parcels(); ++p) {
    if (selection.bits[p] > 1) throw InvalidArgumentError("selection entries must be 0 or 1");
    out.suitability[p] = selection.bits[p] ? landscape.suitability[p] : 0.0;
  }
  return out;
}

Habitat full_habitat(const Landscape& landscape) { return Habitat{landscape.n, landscape.suitability}; }

PatchSet extract_patches(const Habitat& habitat, double threshold, Adjacency adjacency) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidArgumentError("habitat threshold must lie in (0,1), got " + format_17(threshold));
  }
  const int n = habitat.n;
  if (habitat.suitability.size() != static_cast<std::size_t>(n) * n) {
    throw DimensionError("habitat raster does not match n*n");
  }

  PatchSet out;
  out.n = n;
  out.threshold = threshold;

  static constexpr int kDr[] = {-1, 1, 0, 0, -1, -1, 1, 1};
  static constexpr int kDc[] = {0, 0, -1, 1, -1, 1, -1, 1};
  const int neighbours = adjacency == Adjacency::kFour ? 4 : 8;

  auto habitable = [&](int r, int c) { return habitat.suitability[static_cast<std::size_t>(r * n + c)] > threshold; };
  std::vector<int> label(static_cast<std::size_t>(n) * n, 0);
  std::vector<Cell> stack;

  for (int r0 = 0; r0 < n; ++r0) {
    for (int c0 = 0; c0 < n; ++c0) {
      if (!habitable(r0, c0) || label[static_cast<std::size_t>(r0 * n + c0)] != 0) continue;
      Patch patch;
      patch.id = static_cast<int>(out.patches.size()) + 1;
      label[static_cast<std::size_t>(r0 * n + c0)] = patch.id;
      stack.assign(1, Cell{r0, c0});
      while (!stack.empty()) {
        const Cell cell = stack.back();
        stack.pop_back();
        patch.cells.push_back(cell);
        for (int k = 0; k < neighbours; ++k) {
          const int r = cell.row + kDr[k];
          const int c = cell.col + kDc[k];
          if (r < 0 || r >= n || c < 0 || c >= n) continue;
          auto& l = label[static_cast<std::size_t>(r * n + c)];
          if (l == 0 && habitable(r, c)) {
            l = patch.id;
            stack.push_back(Cell{r, c});
          }
        }
      }
      std::sort(patch.cells.begin(), patch.cells.end());
      double sum_r = 0.0;
      double sum_c = 0.0;
      for (const auto& cell : patch.cells) {
        patch.ths += habitat.suitability[static_cast<std::size_t>(cell.row * n + cell.col)];
        sum_r += cell.row;
        sum_c += cell.col;
      }
      const auto size = static_cast<double>(patch.cells.size());
      patch.centroid_row = sum_r / size;
      patch.centroid_col = sum_c / size;
      out.patches.push_back(std::move(patch));
    }
  }
  return out;
}

double selection_cost(const Landscape& landscape, const Selection& selection) {
  require_size(landscape, selection);
  double total = 0.0;
  for (std::size_t p = 0; p < landscape.parcels(); ++p) {
    if (selection.bits[p]) total += landscape.cost[p];
  }
  return total;
}

void save_landscape(const Landscape& landscape, std::ostream& out) {
  out << "n " << landscape.n << '\n';
  out << "seed " << landscape.seed << '\n';
  write_raster(out, landscape.suitability, landscape.n);
  out << '\n';
  write_raster(out, landscape.cost, landscape.n);
}

Landscape load_landscape(std::istream& in) {
  int line_no = 0;
  std::string line;
  Landscape out;

  auto read_key = [&](const char* key) -> std::string {
    if (!next_nonblank(in, line, line_no)) throw ConfigError("landscape", line_no, std::string("missing '") + key + "'");
    std::istringstream fields(line);
    std::string name;
    std::string value;
    if (!(fields >> name >> value) || name != key) {
      throw ConfigError("landscape", line_no, std::string("expected '") + key + " <value>'");
    }
    return value;
  };

  const std::string n_text = read_key("n");
  auto [p1, e1] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), out.n);
  if (e1 != std::errc() || p1 != n_text.data() + n_text.size()) throw ConfigError("landscape", line_no, "bad n");
  if (out.n < 2) throw InvalidDimensionError("landscape side length must be >= 2, got " + std::to_string(out.n));
  const std::string seed_text = read_key("seed");
  auto [p2, e2] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), out.seed);
  if (e2 != std::errc() || p2 != seed_text.data() + seed_text.size()) throw ConfigError("landscape", line_no, "bad seed");

  out.suitability = read_raster(in, out.n, line_no);
  out.cost = read_raster(in, out.n, line_no);
  out.validate();
  return out;
}

void save_landscape(const Landscape& landscape, const std::filesystem::path& path, const std::string& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  if (!header.empty()) out << header << '\n';
  save_landscape(landscape, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Landscape load_landscape(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open landscape '" + path.string() + "'");
  try {
    return load_landscape(in);
  } catch (const ConfigError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void save_selection(const Selection& selection, int n, std::ostream& out) {
  if (selection.size() != static_cast<std::size_t>(n) * n) throw DimensionError("selection does not match n*n");
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c > 0) out << ' ';
      out << (selection.bits[static_cast<std::size_t>(r * n + c)] ? '1' : '0');
    }
    out << '\n';
  }
}

Selection load_selection(std::istream& in, int n) {
  Selection out;
  out.bits.reserve(static_cast<std::size_t>(n) * n);
  int line_no = 0;
  std::string line;
  for (int r = 0; r < n; ++r) {
    if (!next_nonblank(in, line, line_no)) throw ConfigError("selection", line_no, "unexpected end of file");
    std::istringstream row(line);
    std::string token;
    int cols = 0;
    while (row >> token) {
      if (token != "0" && token != "1") throw ConfigError("selection", line_no, "entries must be 0 or 1");
      out.bits.push_back(token == "1" ? 1 : 0);
      ++cols;
    }
    if (cols != n) throw ConfigError("selection", line_no, "expected " + std::to_string(n) + " entries");
  }
  if (next_nonblank(in, line, line_no)) throw ConfigError("selection", line_no, "trailing rows");
  return out;
}

Selection load_selection(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open selection '" + path.string() + "'");
  try {
    return load_selection(in, n);
  } catch (const ConfigError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace reserve
