#include "slelab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace slelab {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "grid function files are written in native little-endian order");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw GridError("read_grid_function: truncated input");
  return v;
}

}  // namespace

Grid::Grid(int n, std::vector<double> center, double half_width, int points_per_axis)
    : n_(n), center_(std::move(center)), half_width_(half_width), points_(points_per_axis) {
  if (n_ < 1 || n_ > 4) throw GridError("Grid: dimension must be in [1, 4]");
  if (static_cast<int>(center_.size()) != n_) throw GridError("Grid: center has wrong length");
  if (!(half_width_ > 0.0) || !std::isfinite(half_width_)) {
    throw GridError("Grid: half width must be positive");
  }
  if (points_ < 9 || points_ % 2 == 0) {
    throw GridError("Grid: points per axis must be odd and >= 9");
  }
  for (double c : center_) {
    if (!std::isfinite(c)) throw GridError("Grid: non-finite center");
  }
  spacing_ = 2.0 * half_width_ / (points_ - 1);
  size_ = 1;
  for (int k = n_ - 1; k >= 0; --k) {
    strides_[static_cast<std::size_t>(k)] = size_;
    size_ *= static_cast<std::size_t>(points_);
  }
}

Grid Grid::cube(int n, double half_width, int points_per_axis) {
  return Grid(n, std::vector<double>(static_cast<std::size_t>(std::max(n, 0)), 0.0), half_width,
              points_per_axis);
}

MultiIndex Grid::multi_index(NodeIndex node) const {
  MultiIndex mi{0, 0, 0, 0};
  for (int k = 0; k < n_; ++k) {
    mi[static_cast<std::size_t>(k)] =
        static_cast<int>((node / strides_[static_cast<std::size_t>(k)]) % points_);
  }
  return mi;
}

NodeIndex Grid::index(const MultiIndex& mi) const {
  NodeIndex idx = 0;
  for (int k = 0; k < n_; ++k) {
    const int i = mi[static_cast<std::size_t>(k)];
    if (i < 0 || i >= points_) throw GridError("Grid::index: multi-index out of range");
    idx += static_cast<std::size_t>(i) * strides_[static_cast<std::size_t>(k)];
  }
  return idx;
}

double Grid::coordinate(NodeIndex node, int axis) const {
  const int i = static_cast<int>((node / strides_[static_cast<std::size_t>(axis)]) % points_);
  return center_[static_cast<std::size_t>(axis)] + (i - (points_ - 1) / 2) * spacing_;
}

SmallVector Grid::position(NodeIndex node) const {
  SmallVector x(n_);
  for (int k = 0; k < n_; ++k) x(k) = coordinate(node, k);
  return x;
}

SmallVector Grid::offset(NodeIndex node) const {
  // Exact multiples of the spacing, independent of the center's rounding.
  const MultiIndex mi = multi_index(node);
  const int mid = (points_ - 1) / 2;
  SmallVector d(n_);
  for (int k = 0; k < n_; ++k) d(k) = (mi[static_cast<std::size_t>(k)] - mid) * spacing_;
  return d;
}

int Grid::depth(NodeIndex node) const {
  int d = points_;
  for (int k = 0; k < n_; ++k) {
    const int i = static_cast<int>((node / strides_[static_cast<std::size_t>(k)]) % points_);
    d = std::min({d, i, points_ - 1 - i});
  }
  return d + 1;
}

NodeIndex Grid::nearest_node(std::span<const double> x, bool* exact) const {
  if (static_cast<int>(x.size()) != n_) throw GridError("Grid::nearest_node: wrong dimension");
  MultiIndex mi{0, 0, 0, 0};
  bool on_node = true;
  for (int k = 0; k < n_; ++k) {
    const double t = (x[static_cast<std::size_t>(k)] - center_[static_cast<std::size_t>(k)] +
                      half_width_) / spacing_;
    const double r = std::round(t);
    if (r < 0 || r > points_ - 1) throw GridError("Grid::nearest_node: point outside the grid");
    if (std::abs(t - r) > 1e-9) on_node = false;
    mi[static_cast<std::size_t>(k)] = static_cast<int>(r);
  }
  if (exact) *exact = on_node;
  return index(mi);
}

NodeIndex Grid::center_node() const {
  MultiIndex mi{0, 0, 0, 0};
  for (int k = 0; k < n_; ++k) mi[static_cast<std::size_t>(k)] = (points_ - 1) / 2;
  return index(mi);
}

std::vector<NodeIndex> Grid::nodes_with_depth(int min_depth) const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < size_; ++i) {
    if (depth(i) >= min_depth) out.push_back(i);
  }
  return out;
}

std::vector<NodeIndex> Grid::boundary_nodes() const {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < size_; ++i) {
    if (depth(i) == 1) out.push_back(i);
  }
  return out;
}

bool Grid::operator==(const Grid& other) const {
  return n_ == other.n_ && center_ == other.center_ && half_width_ == other.half_width_ &&
         points_ == other.points_;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridError("GridFunction: value count does not match the grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw GridError("GridFunction: non-finite value");
  }
}

GridFunction GridFunction::zeros(const Grid& grid) {
  return GridFunction(grid, std::vector<double>(grid.size(), 0.0));
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<double(const SmallVector&)>& f) {
  std::vector<double> v(grid.size());
  for (NodeIndex i = 0; i < grid.size(); ++i) v[i] = f(grid.position(i));
  return GridFunction(grid, std::move(v));
}

std::size_t NodeField::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

double NodeField::max_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (valid[i]) m = std::max(m, std::abs(values[i]));
  }
  return m;
}

void write_grid_function(std::ostream& out, const GridFunction& u) {
  const Grid& g = u.grid();
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points()));
  put<double>(out, g.half_width());
  for (double c : g.center()) put<double>(out, c);
  out.write(reinterpret_cast<const char*>(u.values().data()),
            static_cast<std::streamsize>(u.values().size() * sizeof(double)));
  if (!out) throw GridError("write_grid_function: stream failure");
}

GridFunction read_grid_function(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw GridError("read_grid_function: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw GridError("read_grid_function: unsupported version");
  const auto n = static_cast<int>(get<std::uint32_t>(in));
  const auto points = static_cast<int>(get<std::uint32_t>(in));
  if (n < 1 || n > 4) throw GridError("read_grid_function: bad dimension");
  const double half_width = get<double>(in);
  std::vector<double> center(static_cast<std::size_t>(n));
  for (double& c : center) c = get<double>(in);
  Grid grid(n, center, half_width, points);
  std::vector<double> values(grid.size());
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw GridError("read_grid_function: truncated values");
  return GridFunction(std::move(grid), std::move(values));
}

void save_grid_function(const std::string& path, const GridFunction& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GridError("save_grid_function: cannot open " + path);
  write_grid_function(out, u);
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GridError("load_grid_function: cannot open " + path);
  return read_grid_function(in);
}

void write_grid_function_csv(std::ostream& out, const GridFunction& u) {
  const Grid& g = u.grid();
  out << std::setprecision(17);
  out << "n,half_width,points";
  for (int k = 0; k < g.dim(); ++k) out << ",center" << k;
  out << "\n" << g.dim() << "," << g.half_width() << "," << g.points();
  for (double c : g.center()) out << "," << c;
  out << "\nvalue\n";
  for (double v : u.values()) out << v << "\n";
}

GridFunction read_grid_function_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw GridError("read_grid_function_csv: missing header");
  if (!std::getline(in, line)) throw GridError("read_grid_function_csv: missing grid line");
  std::vector<double> fields;
  {
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) fields.push_back(std::stod(cell));
  }
  if (fields.size() < 4) throw GridError("read_grid_function_csv: short grid line");
  const int n = static_cast<int>(fields[0]);
  if (static_cast<int>(fields.size()) != 3 + n) {
    throw GridError("read_grid_function_csv: center length mismatch");
  }
  Grid grid(n, std::vector<double>(fields.begin() + 3, fields.end()), fields[1],
            static_cast<int>(fields[2]));
  if (!std::getline(in, line) || line != "value") {
    throw GridError("read_grid_function_csv: missing value header");
  }
  std::vector<double> values;
  values.reserve(grid.size());
  while (std::getline(in, line)) {
    if (!line.empty()) values.push_back(std::stod(line));
  }
  return GridFunction(std::move(grid), std::move(values));
}

}  // namespace slelab
