#include "harmap/constructions.hpp"

#include <cmath>
#include <numbers>

namespace harmap {

Vec2 vortex_field(const Vec2& x, int orientation) {
  require(orientation == 1 || orientation == -1, "vortex orientation must be +1 or -1");
  const double r = x.norm();
  require(r > 0.0, "vortex field is singular at the origin");
  return orientation == 1 ? Vec2(-x.y(), x.x()) / r : Vec2(x.y(), -x.x()) / r;
}

namespace {

// Fraction of the cell centred at c (side h) lying in the closed unit disk.
double disk_fraction(const Vec2& c, double h) {
  const double half_diag = h * std::numbers::sqrt2 / 2.0;
  const double r = c.norm();
  if (r + half_diag <= 1.0) return 1.0;
  if (r - half_diag >= 1.0) return 0.0;
  constexpr int kSub = 16;
  int inside = 0;
  for (int a = 0; a < kSub; ++a)
    for (int b = 0; b < kSub; ++b) {
      const Vec2 q = c + h * Vec2((a + 0.5) / kSub - 0.5, (b + 0.5) / kSub - 0.5);
      if (q.squaredNorm() <= 1.0) ++inside;
    }
  return static_cast<double>(inside) / (kSub * kSub);
}

}  // namespace

double w1p_vortex_norm(double p, double h) {
  require(p >= 1.0 && p <= 2.0, "w1p_vortex_norm: exponent must lie in [1, 2]");
  require(h > 0.0 && h <= 0.25, "w1p_vortex_norm: spacing must lie in (0, 1/4]");
  // Cells centred on the lattice (i h, j h); the origin cell is dropped.
  // Only the first quadrant i > 0, j >= 0 is summed: the four rotated copies
  // cover every cell except the origin.
  const int n = static_cast<int>(std::ceil(1.0 / h)) + 1;
  double total = 0.0;
  for (int i = 1; i <= n; ++i) {
    double row = 0.0;
    for (int j = 0; j <= n; ++j) {
      const Vec2 c(i * h, j * h);
      const double f = disk_fraction(c, h);
      if (f == 0.0) continue;
      row += f * std::pow(c.norm(), -p);
    }
    total += row;
  }
  return 4.0 * h * h * total;
}

VortexNormEstimate w1p_vortex_richardson(double p, double h) {
  VortexNormEstimate e;
  e.coarse = w1p_vortex_norm(p, h);
  e.fine = w1p_vortex_norm(p, h / 2.0);
  if (p < 2.0) {
    const double f = std::pow(2.0, 2.0 - p);
    e.extrapolated = (f * e.fine - e.coarse) / (f - 1.0);
  } else {
    e.extrapolated = e.fine;
  }
  return e;
}

int vortex_index(const std::vector<Vec2>& samples) {
  require(samples.size() >= 3, "vortex_index needs at least 3 samples");
  std::vector<double> angle(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(samples[i].norm() > 0.0, "vortex_index: field vanishes on the curve");
    angle[i] = std::atan2(samples[i].y(), samples[i].x());
  }
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double d = angle[(i + 1) % samples.size()] - angle[i];
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    if (std::abs(d) >= std::numbers::pi * (1.0 - 1e-12))
      throw NumericalError("vortex_index: curve under-resolved (angle jump >= pi)");
    total += d;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace harmap
