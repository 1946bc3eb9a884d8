#pragma once

#include "harmap/constructions.hpp"
#include "harmap/energy.hpp"
#include "harmap/fields.hpp"
#include "harmap/geometry.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace harmap {

/// Outcome of checking one inequality over many samples. For a non-strict
/// bound a sample violates it when measured > cap; for a strict bound when
/// measured >= cap (with cap 0 read as "must be exactly 0").
struct BoundReport {
  std::string name;
  double cap = 0.0;       // cap at the worst sample
  double measured = 0.0;  // value at the worst sample
  double margin = 0.0;    // smallest cap - measured over all samples
  std::size_t samples = 0;
  std::size_t violations = 0;
  bool strict = false;
  std::string worst;      // human-readable description of the worst sample
  std::map<std::string, double> extra;

  bool passed() const { return violations == 0; }
  /// Folds one sample in.
  void add(double value, double bound, const std::string& where = {});
};

/// Random admissible graphs: alternating paraboloids a|x|^2/2 and sinusoids
/// a sin(w x1) sin(w x2), with Lip <= lip_max.
std::vector<GraphFn> random_graphs(std::size_t count, double lip_max, std::uint64_t seed);

/// |Q n - n| <= 9 Lip, |dQ/dx| < 6 Lip2 (entrywise, strict), Q_ij <= 1 and
/// |d nu / dx| <= 3 Lip2 (entrywise). `extra["value_at_origin"]` of the Q_ij
/// report holds max_ij Q_ij(0).
std::vector<BoundReport> verify_rotation_bounds(const std::vector<GraphFn>& graphs,
                                                std::size_t samples_per_graph,
                                                std::uint64_t seed = 11);

struct ProjectionSuiteOptions {
  std::size_t derivative_samples = 1000;
  std::size_t pair_samples = 10000;
  double min_cross = 0.1;  // admissible neighbourhood: |y x nu| >= min_cross
  double fd_step = 1e-6;
  std::uint64_t seed = 13;
};

/// Derivative check against finite differences, |dPi/dz| <= 1, the cross-y
/// difference bound (sampled where |y x nu| >= 1) and its sharpened form,
/// the cross-x constant and the dPi/dy constant.
std::vector<BoundReport> verify_projection_bounds(const ProjectionSuiteOptions& opts = {});

struct PoincareReport {
  double h = 0.0;
  double max_ratio_coarse = 0.0;
  double max_ratio_fine = 0.0;
  double relative_change = 0.0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  BoundReport bound;  // stability: relative change <= 0.2
};

/// Ratio int |u - u_bar|^2 / int |grad u|^2 with u_bar the G_phi mean, for
/// random smooth unit fields on random graphs with Lip <= 1/2, at h and h/2.
PoincareReport poincare_experiment(std::size_t graphs, std::size_t fields_per_graph, double h,
                                   std::uint64_t seed = 17);

/// Dyadic radii R, R/2, ..., R/2^(levels-1); each must be >= 2h.
std::vector<double> dyadic_radii(double R, int levels, double h);

/// One DecayProfile per centre.
std::vector<DecayProfile> decay_scan(const SphereField& u, const Mesh& mesh,
                                     const std::vector<Vec3>& centers, double R, int levels);

struct SingularNode {
  NodeIndex node = kNoNode;
  Vec3 position;
  double min_radius = 0.0;  // smallest tested radius (all had E_r >= threshold)
  double min_energy = 0.0;  // smallest E_r over the tested radii
};

struct SingularReport {
  double threshold = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t tested = 0;
  std::vector<SingularNode> flagged;
};

/// Flags candidate nodes whose E_r >= threshold at every dyadic radius from
/// r_max down to r_min. Candidates default to every G_phi node.
SingularReport detect_singular(const SphereField& u, const Mesh& mesh, double threshold,
                               double r_min, double r_max,
                               const std::vector<NodeIndex>& candidates = {});

/// Rescaled energy of the explicit boundary vortex (constant in x3) centred at
/// `center` on the mesh, at radius r.
double vortex_reference_energy(const Mesh& mesh, const Vec3& center, double r);

}  // namespace harmap
