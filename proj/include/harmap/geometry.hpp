#pragma once

#include "harmap/mesh.hpp"
#include "harmap/types.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace harmap {

/// Analytic family of a boundary graph.
enum class GraphKind { Flat, Paraboloid, Sinusoid, Tabulated };

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& name);

/// Family coefficients. Paraboloid uses "a"; sinusoid uses "a" and "omega";
/// tabulated uses "n" (samples per axis over [-1,1]^2) and the table itself.
struct GraphParams {
  std::map<std::string, double> scalars;
  std::vector<double> table;  // row-major n*n samples, tabulated only

  double get(const std::string& key) const;
  double get_or(const std::string& key, double fallback) const;
};

/// A C^2 boundary graph x3 = phi(x1, x2) with phi(0) = 0 and grad phi(0) = 0.
///
/// Paraboloid: a (x1^2 + x2^2) / 2.  Sinusoid: a sin(omega x1) sin(omega x2).
/// Tabulated: bicubic Hermite patch over a uniform table on [-1, 1]^2.
///
/// lip() is sup |grad phi| and lip2() is max over |alpha| = 2 of
/// sup |d^alpha phi|. For the paraboloid both are taken over the unit disk;
/// for the sinusoid they are the global suprema a*omega and a*omega^2; for a
/// table they are found by dense sampling of the unit disk.
class GraphFn {
 public:
  GraphFn() = default;

  GraphKind kind() const { return kind_; }
  const GraphParams& params() const { return params_; }

  double eval(const Vec2& p) const;
  Vec2 grad(const Vec2& p) const;
  Mat2 hess(const Vec2& p) const;

  double lip() const { return lip_; }
  double lip2() const { return lip2_; }

  friend GraphFn make_graph_fn(GraphKind kind, const GraphParams& params);

 private:
  struct Table;

  GraphKind kind_ = GraphKind::Flat;
  GraphParams params_;
  double a_ = 0.0;
  double omega_ = 0.0;
  std::shared_ptr<const Table> table_;
  double lip_ = 0.0;
  double lip2_ = 0.0;
};

/// Builds a graph and evaluates its Lipschitz seminorms.
/// Throws ValidationError when Lip(phi) > 1 or the normalization fails.
GraphFn make_graph_fn(GraphKind kind, const GraphParams& params = {});

/// Normal, tangent pair and shape operator of the graph at a planar point.
/// shape(alpha, beta) = d nu^beta / d x^alpha; the third row is zero because
/// nu is extended constantly in x3.
struct SurfaceFrame {
  Vec3 base;
  Vec3 normal;
  Vec3 t1;
  Vec3 t2;
  Mat3 shape;
};

SurfaceFrame surface_frame(const GraphFn& graph, const Vec2& p);

/// Closed cylinder {|y' - a'| <= r, |y3 - a3| <= r} (see cylinder_clip).
struct Cylinder {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;

  bool contains(const Vec3& y) const;
};

/// Discretized Omega_phi = {x in C(0,1) : x3 < phi(x1, x2)}.
///
/// Columns sit at (i h, j h) inside the open unit disk. Each column holds the
/// lattice levels -1 + k h strictly below phi - h/2 plus one node snapped onto
/// the graph. Columns with a lateral neighbour outside the disk and the bottom
/// level x3 = -1 are tagged Fixed (H_phi); snapped nodes of the remaining
/// columns are tagged Graph (G_phi).
class GraphDomain {
 public:
  const GraphFn& graph() const { return graph_; }
  double h() const { return h_; }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }

  /// Frame of the snapped node of the column containing `node`.
  const SurfaceFrame& frame_of_column(std::size_t column) const {
    return frames_[column];
  }

  friend GraphDomain build_graph_domain(const GraphFn& graph, double h);

 private:
  GraphFn graph_;
  double h_ = 0.0;
  std::shared_ptr<const Mesh> mesh_;
  std::vector<SurfaceFrame> frames_;
};

/// Requires 0 < h <= 1/8.
GraphDomain build_graph_domain(const GraphFn& graph, double h);

/// The box (0,l)^2 x (-d,d) including its faces. Vertical spacing is h; the
/// lateral directions use `lateral_cells` cells per side (0 means l/h).
class BoxDomain {
 public:
  double l() const { return l_; }
  double d() const { return d_; }
  double h() const { return h_; }
  int lateral_cells() const { return lateral_cells_; }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }

  friend BoxDomain build_box_domain(double l, double d, double h, int lateral_cells);

 private:
  double l_ = 0.0;
  double d_ = 0.0;
  double h_ = 0.0;
  int lateral_cells_ = 0;
  std::shared_ptr<const Mesh> mesh_;
};

BoxDomain build_box_domain(double l, double d, double h, int lateral_cells = 0);

/// Nodes of a mesh inside a cylinder, partitioned by tag.
struct ClipResult {
  std::vector<NodeIndex> interior;
  std::vector<NodeIndex> graph;
  std::vector<NodeIndex> fixed;

  std::size_t size() const { return interior.size() + graph.size() + fixed.size(); }
  std::vector<NodeIndex> all() const;
};

/// Requires c.radius >= 2 h (h is the mesh's largest spacing).
ClipResult cylinder_clip(const Mesh& mesh, const Cylinder& c);

}  // namespace harmap
