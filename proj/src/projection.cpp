#include "harmap/constructions.hpp"

namespace harmap {

namespace {

Vec3 axis_of(const ProjectionQuery& q) {
  const Vec3 w = q.y.cross(q.nu);
  require(w.norm() > 1e-8, "projection line is degenerate (|y x nu| <= 1e-8)");
  return w;
}

// Derivative of w w^T / |w|^2 in the direction dw.
Mat3 projector_variation(const Vec3& w, const Vec3& dw) {
  const double n2 = w.squaredNorm();
  return (dw * w.transpose() + w * dw.transpose()) / n2 -
         (2.0 * w.dot(dw) / (n2 * n2)) * (w * w.transpose());
}

}  // namespace

Mat3 line_projector(const Vec3& y, const Vec3& nu) {
  const Vec3 w = y.cross(nu);
  require(w.norm() > 1e-8, "projection line is degenerate (|y x nu| <= 1e-8)");
  return w * w.transpose() / w.squaredNorm();
}

Vec3 tangent_line_projection(const ProjectionQuery& q) {
  const Vec3 w = axis_of(q);
  return w * (w.dot(q.z) / w.squaredNorm()) + q.y;
}

Mat3 projection_dz(const ProjectionQuery& q) { return line_projector(q.y, q.nu); }

Mat3 projection_dy(const ProjectionQuery& q) {
  const Vec3 w = axis_of(q);
  Mat3 out;
  for (int j = 0; j < 3; ++j) {
    const Vec3 dw = Vec3::Unit(j).cross(q.nu);
    out.col(j) = projector_variation(w, dw) * q.z + Vec3::Unit(j);
  }
  return out;
}

Mat3 projection_dx(const ProjectionQuery& q, const Mat3& dnu) {
  const Vec3 w = axis_of(q);
  Mat3 out;
  for (int j = 0; j < 3; ++j) {
    const Vec3 dw = q.y.cross(dnu.col(j));
    out.col(j) = projector_variation(w, dw) * q.z;
  }
  return out;
}

}  // namespace harmap
