#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slelab/spectral.hpp"

namespace slelab {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using NodeIndex = std::size_t;
using MultiIndex = std::array<int, 4>;

/// Uniform axis-aligned box grid [c - L, c + L]^n with an odd number of
/// points per axis, so the center is a node.
///
/// Node depth counts layers from the edge: boundary nodes have depth 1, their
/// inward neighbors depth 2, and so on. A second-order central stencil needs
/// depth >= 2, a differenced Hessian depth >= 3.
class Grid {
 public:
  Grid(int n, std::vector<double> center, double half_width, int points_per_axis);
  /// Centered at the origin.
  static Grid cube(int n, double half_width, int points_per_axis);

  int dim() const { return n_; }
  int points() const { return points_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  const std::vector<double>& center() const { return center_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  MultiIndex multi_index(NodeIndex node) const;
  NodeIndex index(const MultiIndex& mi) const;
  double coordinate(NodeIndex node, int axis) const;
  SmallVector position(NodeIndex node) const;
  /// Offset of a node from the grid center.
  SmallVector offset(NodeIndex node) const;
  int depth(NodeIndex node) const;

  /// Nearest node to `x`, and whether `x` sits on it (within 1e-9 spacing).
  NodeIndex nearest_node(std::span<const double> x, bool* exact = nullptr) const;
  NodeIndex center_node() const;

  /// Nodes with depth >= `min_depth`, ascending.
  std::vector<NodeIndex> nodes_with_depth(int min_depth) const;
  std::vector<NodeIndex> boundary_nodes() const;

  bool operator==(const Grid& other) const;

 private:
  int n_;
  std::vector<double> center_;
  double half_width_;
  int points_;
  double spacing_;
  std::size_t size_;
  std::array<std::size_t, 4> strides_{};
};

/// A finite real value per grid node. Values are fixed at construction.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);
  static GridFunction zeros(const Grid& grid);
  static GridFunction sample(const Grid& grid, const std::function<double(const SmallVector&)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](NodeIndex i) const { return values_[i]; }
  double at(NodeIndex i) const { return values_.at(i); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Derived field defined only on a subset of nodes (e.g. depth-limited
/// stencil outputs). Invalid nodes hold 0 and must not feed later stencils.
struct NodeField {
  Grid grid;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  explicit NodeField(const Grid& g) : grid(g), values(g.size(), 0.0), valid(g.size(), 0) {}
  bool is_valid(NodeIndex i) const { return valid[i] != 0; }
  void set(NodeIndex i, double v) {
    values[i] = v;
    valid[i] = 1;
  }
  std::size_t valid_count() const;
  /// Max |value| over valid nodes (0 if none).
  double max_abs() const;
};

/// Binary layout (little-endian): "SLGF", u32 version, u32 n, u32 points,
/// f64 half_width, n x f64 center, then size() x f64 values in row-major axis
/// order (axis 0 slowest). Round-trips bit-exactly.
void write_grid_function(std::ostream& out, const GridFunction& u);
GridFunction read_grid_function(std::istream& in);
void save_grid_function(const std::string& path, const GridFunction& u);
GridFunction load_grid_function(const std::string& path);

/// CSV layout: header lines "n,L,points,center..." then one value per line,
/// printed with 17 significant digits (exact round-trip).
void write_grid_function_csv(std::ostream& out, const GridFunction& u);
GridFunction read_grid_function_csv(std::istream& in);

}  // namespace slelab
