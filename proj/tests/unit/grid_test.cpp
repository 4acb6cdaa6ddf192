#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "slelab/grid.hpp"

using namespace slelab;

TEST(Grid, GeometryAndIndexing) {
  const Grid g = Grid::cube(3, 2.0, 17);
  EXPECT_EQ(g.size(), 17u * 17u * 17u);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.25);
  const NodeIndex c = g.center_node();
  EXPECT_EQ(g.position(c).norm(), 0.0);
  EXPECT_EQ(g.depth(c), 9);
  for (NodeIndex i : {NodeIndex{0}, NodeIndex{123}, g.size() - 1}) {
    EXPECT_EQ(g.index(g.multi_index(i)), i);
  }
  EXPECT_DOUBLE_EQ(g.coordinate(0, 0), -2.0);
  EXPECT_DOUBLE_EQ(g.coordinate(g.size() - 1, 2), 2.0);
  EXPECT_EQ(g.stride(2), 1u);
  EXPECT_EQ(g.stride(0), 289u);
}

TEST(Grid, DepthLayers) {
  const Grid g = Grid::cube(2, 1.0, 9);
  EXPECT_EQ(g.boundary_nodes().size(), 32u);
  EXPECT_EQ(g.nodes_with_depth(2).size(), 49u);
  EXPECT_EQ(g.nodes_with_depth(3).size(), 25u);
  EXPECT_EQ(g.nodes_with_depth(5).size(), 1u);
  for (NodeIndex i : g.boundary_nodes()) EXPECT_EQ(g.depth(i), 1);
}

TEST(Grid, OffsetCenteredGrid) {
  const Grid g(2, {0.1, -0.3}, 1.0, 11);
  const NodeIndex c = g.center_node();
  EXPECT_DOUBLE_EQ(g.position(c)(0), 0.1);
  EXPECT_DOUBLE_EQ(g.position(c)(1), -0.3);
  EXPECT_EQ(g.offset(c).norm(), 0.0);
  const std::vector<double> x{0.1 + 0.2, -0.3 - 0.4};
  bool exact = false;
  const NodeIndex k = g.nearest_node(x, &exact);
  EXPECT_TRUE(exact);
  EXPECT_NEAR(g.offset(k)(0), 0.2, 1e-15);
  EXPECT_NEAR(g.offset(k)(1), -0.4, 1e-15);
  const std::vector<double> off{0.15, -0.3};
  g.nearest_node(off, &exact);
  EXPECT_FALSE(exact);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(Grid::cube(3, 2.0, 16), GridError);
  EXPECT_THROW(Grid::cube(3, 2.0, 7), GridError);
  EXPECT_THROW(Grid::cube(3, 0.0, 9), GridError);
  EXPECT_THROW(Grid::cube(5, 1.0, 9), GridError);
  EXPECT_THROW(Grid(3, {0.0, 0.0}, 1.0, 9), GridError);
  const Grid g = Grid::cube(2, 1.0, 9);
  const std::vector<double> far{5.0, 0.0};
  EXPECT_THROW(g.nearest_node(far), GridError);
  EXPECT_THROW(g.index({9, 0, 0, 0}), GridError);
}

TEST(GridFunction, RejectsNonFiniteAndWrongSize) {
  const Grid g = Grid::cube(2, 1.0, 9);
  EXPECT_THROW(GridFunction(g, std::vector<double>(3, 0.0)), GridError);
  std::vector<double> v(g.size(), 0.0);
  v[5] = std::nan("");
  EXPECT_THROW(GridFunction(g, v), GridError);
}

TEST(GridFunction, BinaryRoundTripIsBitExact) {
  const Grid g(3, {0.5, -1.0, 0.25}, 1.5, 9);
  const GridFunction u = GridFunction::sample(g, [](const SmallVector& x) {
    return std::sin(x(0)) * std::exp(x(1)) + x(2) / 3.0;
  });
  std::stringstream buf;
  write_grid_function(buf, u);
  const GridFunction back = read_grid_function(buf);
  EXPECT_TRUE(back.grid() == g);
  for (NodeIndex i = 0; i < g.size(); ++i) EXPECT_EQ(back[i], u[i]);
}

TEST(GridFunction, CsvRoundTripIsExact) {
  const Grid g = Grid::cube(2, 1.0, 9);
  const GridFunction u = GridFunction::sample(g, [](const SmallVector& x) { return 0.1 * x(0) + std::cos(x(1)); });
  std::stringstream buf;
  write_grid_function_csv(buf, u);
  const GridFunction back = read_grid_function_csv(buf);
  EXPECT_TRUE(back.grid() == g);
  for (NodeIndex i = 0; i < g.size(); ++i) EXPECT_EQ(back[i], u[i]);
}

TEST(GridFunction, CorruptInputIsRejected) {
  std::stringstream bad("XXXX");
  EXPECT_THROW(read_grid_function(bad), GridError);
  const GridFunction u = GridFunction::zeros(Grid::cube(2, 1.0, 9));
  std::stringstream buf;
  write_grid_function(buf, u);
  std::string bytes = buf.str();
  bytes.resize(bytes.size() - 8);
  std::stringstream truncated(bytes);
  EXPECT_THROW(read_grid_function(truncated), GridError);
}

TEST(NodeField, ValidityTracking) {
  NodeField f(Grid::cube(2, 1.0, 9));
  EXPECT_EQ(f.valid_count(), 0u);
  EXPECT_EQ(f.max_abs(), 0.0);
  f.set(3, -2.5);
  f.set(7, 1.0);
  EXPECT_EQ(f.valid_count(), 2u);
  EXPECT_EQ(f.max_abs(), 2.5);
  EXPECT_TRUE(f.is_valid(3));
  EXPECT_FALSE(f.is_valid(4));
}
