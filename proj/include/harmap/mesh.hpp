#pragma once

#include "harmap/types.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace harmap {

/// Node classification. Graph marks G_phi (the free, curved boundary part);
/// Fixed marks H_phi (lateral rim and bottom) and every face node of a box.
enum class NodeTag : std::uint8_t { Interior = 0, Graph = 1, Fixed = 2 };

std::string to_string(NodeTag tag);

inline constexpr NodeIndex kNoNode = std::numeric_limits<NodeIndex>::max();

/// Axis slots of a lattice node: -x, +x, -y, +y, -z, +z.
enum Axis : int { kMinusX = 0, kPlusX, kMinusY, kPlusY, kMinusZ, kPlusZ };

struct NeighborSlot {
  NodeIndex node = kNoNode;
  double distance = 0.0;
  /// Dirichlet weight: the edge contributes weight * |u_a - u_b|^2 to
  /// int |grad u|^2. Zero when the pair is not an energy edge.
  double weight = 0.0;
};

/// A linear finite-difference stencil: sum of coeff * u(node).
using Stencil = std::vector<std::pair<NodeIndex, double>>;

/// Quadrature point on the boundary with the data needed by both surface
/// terms.
struct SurfacePoint {
  NodeIndex node = kNoNode;
  Vec3 normal = Vec3::UnitZ();
  double area = 0.0;
  Mat3 shape = Mat3::Zero();           // d nu^beta / d x^alpha
  std::array<Stencil, 3> derivative;   // d/dx^k at the node
};

/// Column-structured node set shared by the box and graph domains.
///
/// Every node belongs to one lateral column at (x0 + i hx, y0 + j hy); nodes of
/// a column are stored contiguously and sorted by x3.
struct Mesh {
  std::vector<Vec3> points;
  std::vector<NodeTag> tags;
  std::vector<double> volume;
  std::vector<std::array<NeighborSlot, 6>> neighbors;
  std::vector<SurfacePoint> surface;
  /// For Graph nodes, the index into `surface`; kNoNode otherwise.
  std::vector<NodeIndex> graph_surface_index;

  double x0 = 0.0, y0 = 0.0;
  double hx = 0.0, hy = 0.0, hz = 0.0;
  int nx = 0, ny = 0;
  /// Lateral grid cell (i + nx j) -> column id, or -1 outside the domain.
  std::vector<std::int64_t> column_of_cell;
  std::vector<std::pair<int, int>> column_cell;
  /// CSR offsets: nodes of column c are [column_start[c], column_start[c+1]).
  std::vector<std::size_t> column_start;
  std::vector<std::size_t> column_of_node;

  std::size_t size() const { return points.size(); }
  std::size_t column_count() const { return column_cell.size(); }
  double max_spacing() const;

  std::size_t count(NodeTag tag) const;
  std::vector<NodeIndex> nodes_with(NodeTag tag) const;
  double total_volume() const;
  double graph_area() const;
};

}  // namespace harmap
