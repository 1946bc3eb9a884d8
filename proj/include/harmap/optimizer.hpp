#pragma once

#include "harmap/energy.hpp"
#include "harmap/fields.hpp"
#include "harmap/mesh.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace harmap {

/// Tangential: G_phi values move inside the boundary tangent plane.
/// FixedTrace: every boundary node keeps its initial value.
/// H_phi (Fixed-tagged) nodes never move in either mode.
enum class BoundaryMode { Tangential, FixedTrace };

std::string to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(const std::string& name);

struct MinimizeOptions {
  int max_iters = 5000;
  double step0 = 1e-3;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double grad_tol = 1e-6;
  /// Stops once E_k - E_{k+1} <= energy_tol * max(1, |E_k|).
  double energy_tol = 1e-12;
  int max_backtracks = 50;
  BoundaryMode boundary_mode = BoundaryMode::Tangential;

  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;        // accepted step (0 on the initial row)
  int backtracks = 0;
  double tangency = 0.0;    // max |u.nu| over G_phi
  double unit = 0.0;        // max ||u| - 1|
};

struct MinimizeTrace {
  std::vector<TraceRow> rows;
  bool converged = false;
  std::string stop_reason;
};

struct MinimizeResult {
  SphereField field;
  MinimizeTrace trace;
};

/// Thrown when the line search fails max_backtracks times in a row.
class StallError : public NumericalError {
 public:
  StallError(const std::string& what, MinimizeTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const MinimizeTrace& trace() const { return trace_; }

 private:
  MinimizeTrace trace_;
};

/// Extends a boundary trace into the domain: every node of a column takes the
/// trace value at the column's top node, Fixed nodes take the trace at their
/// own position, and in tangential mode G_phi values are projected onto the
/// boundary tangent plane. The result is unit length.
SphereField extend_trace(const Mesh& mesh, const PointMap& trace, BoundaryMode mode);

/// Projected gradient descent on energy_G with Barzilai-Borwein initial steps,
/// Armijo backtracking, renormalization and boundary projection after every
/// step. The boundary trace is carried by `init`.
MinimizeResult minimize_G(const Mesh& mesh, const SphereField& init, const EnergyParams& params,
                          const MinimizeOptions& opts);

struct ElResidual {
  double interior_l2 = 0.0;   // sqrt(sum vol |r|^2)
  double interior_max = 0.0;
  std::size_t interior_nodes = 0;
  /// Over G_phi: distance of u.nu to {0, -1, 1}.
  double boundary_max_distance = 0.0;
  std::size_t boundary_nodes = 0;
  /// 20 equal bins of u.nu over [-1, 1].
  std::vector<std::size_t> histogram;
};

/// Interior residual of Delta u + |grad u|^2 u with three-point second
/// differences and central first differences, over interior nodes whose six
/// neighbours are all present.
ElResidual el_residual(const SphereField& u, const Mesh& mesh);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t comparisons = 0;
};

/// Compares grad_G against central differences of energy_G_value along random
/// admissible directions at random nodes of random admissible fields.
GradientCheck gradient_check(const Mesh& mesh, const EnergyParams& params, int fields,
                             int nodes_per_field, double step = 1e-4, std::uint64_t seed = 7);

}  // namespace harmap
