#include "harmap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace harmap {

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Flat: return "flat";
    case GraphKind::Paraboloid: return "paraboloid";
    case GraphKind::Sinusoid: return "sinusoid";
    case GraphKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

GraphKind graph_kind_from_string(const std::string& name) {
  if (name == "flat") return GraphKind::Flat;
  if (name == "paraboloid") return GraphKind::Paraboloid;
  if (name == "sinusoid") return GraphKind::Sinusoid;
  if (name == "tabulated") return GraphKind::Tabulated;
  throw ValidationError("unknown graph family '" + name + "'");
}

double GraphParams::get(const std::string& key) const {
  auto it = scalars.find(key);
  if (it == scalars.end()) throw ValidationError("missing graph parameter '" + key + "'");
  return it->second;
}

double GraphParams::get_or(const std::string& key, double fallback) const {
  auto it = scalars.find(key);
  return it == scalars.end() ? fallback : it->second;
}

// ---------------------------------------------------------------------------
// Bicubic Hermite table

struct GraphFn::Table {
  int n = 0;
  double step = 0.0;
  std::vector<double> f, fx, fy, fxy;

  double at(const std::vector<double>& v, int i, int j) const { return v[j * n + i]; }

  /// Value, gradient and Hessian at p (clamped to the table extent).
  void evaluate(const Vec2& p, double* value, Vec2* grad, Mat2* hess) const {
    const double gx = std::clamp((p.x() + 1.0) / step, 0.0, n - 1.0);
    const double gy = std::clamp((p.y() + 1.0) / step, 0.0, n - 1.0);
    const int i = std::min(static_cast<int>(gx), n - 2);
    const int j = std::min(static_cast<int>(gy), n - 2);
    const double t = gx - i;
    const double u = gy - j;

    // Hermite basis and derivatives: [h00, h01, h10, h11] for value/d1/d2.
    auto basis = [](double s, double out[3][4]) {
      const double s2 = s * s, s3 = s2 * s;
      out[0][0] = 2 * s3 - 3 * s2 + 1;  out[0][1] = -2 * s3 + 3 * s2;
      out[0][2] = s3 - 2 * s2 + s;      out[0][3] = s3 - s2;
      out[1][0] = 6 * s2 - 6 * s;       out[1][1] = -6 * s2 + 6 * s;
      out[1][2] = 3 * s2 - 4 * s + 1;   out[1][3] = 3 * s2 - 2 * s;
      out[2][0] = 12 * s - 6;           out[2][1] = -12 * s + 6;
      out[2][2] = 6 * s - 4;            out[2][3] = 6 * s - 2;
    };
    double bt[3][4], bu[3][4];
    basis(t, bt);
    basis(u, bu);

    double acc[3][3] = {};  // acc[dt][du]
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double fv = at(f, i + a, j + b);
        const double fxv = at(fx, i + a, j + b) * step;
        const double fyv = at(fy, i + a, j + b) * step;
        const double fxyv = at(fxy, i + a, j + b) * step * step;
        for (int dt = 0; dt < 3; ++dt) {
          for (int du = 0; du + dt < 3; ++du) {
            acc[dt][du] += fv * bt[dt][a] * bu[du][b] + fxv * bt[dt][2 + a] * bu[du][b] +
                           fyv * bt[dt][a] * bu[du][2 + b] +
                           fxyv * bt[dt][2 + a] * bu[du][2 + b];
          }
        }
      }
    }
    if (value) *value = acc[0][0];
    if (grad) *grad = Vec2(acc[1][0] / step, acc[0][1] / step);
    if (hess) {
      const double s2 = step * step;
      *hess << acc[2][0] / s2, acc[1][1] / s2, acc[1][1] / s2, acc[0][2] / s2;
    }
  }
};

double GraphFn::eval(const Vec2& p) const {
  switch (kind_) {
    case GraphKind::Flat: return 0.0;
    case GraphKind::Paraboloid: return 0.5 * a_ * p.squaredNorm();
    case GraphKind::Sinusoid: return a_ * std::sin(omega_ * p.x()) * std::sin(omega_ * p.y());
    case GraphKind::Tabulated: {
      double v = 0.0;
      table_->evaluate(p, &v, nullptr, nullptr);
      return v;
    }
  }
  return 0.0;
}

Vec2 GraphFn::grad(const Vec2& p) const {
  switch (kind_) {
    case GraphKind::Flat: return Vec2::Zero();
    case GraphKind::Paraboloid: return a_ * p;
    case GraphKind::Sinusoid: {
      const double s1 = std::sin(omega_ * p.x()), c1 = std::cos(omega_ * p.x());
      const double s2 = std::sin(omega_ * p.y()), c2 = std::cos(omega_ * p.y());
      return a_ * omega_ * Vec2(c1 * s2, s1 * c2);
    }
    case GraphKind::Tabulated: {
      Vec2 g;
      table_->evaluate(p, nullptr, &g, nullptr);
      return g;
    }
  }
  return Vec2::Zero();
}

Mat2 GraphFn::hess(const Vec2& p) const {
  switch (kind_) {
    case GraphKind::Flat: return Mat2::Zero();
    case GraphKind::Paraboloid: return a_ * Mat2::Identity();
    case GraphKind::Sinusoid: {
      const double s1 = std::sin(omega_ * p.x()), c1 = std::cos(omega_ * p.x());
      const double s2 = std::sin(omega_ * p.y()), c2 = std::cos(omega_ * p.y());
      const double k = a_ * omega_ * omega_;
      Mat2 m;
      m << -k * s1 * s2, k * c1 * c2, k * c1 * c2, -k * s1 * s2;
      return m;
    }
    case GraphKind::Tabulated: {
      Mat2 hm;
      table_->evaluate(p, nullptr, nullptr, &hm);
      return hm;
    }
  }
  return Mat2::Zero();
}

namespace {

/// Sup of |grad phi| and of the Hessian entries over a dense polar sampling
/// of the closed unit disk.
std::pair<double, double> sampled_seminorms(const GraphFn& g) {
  double lip = 0.0, lip2 = 0.0;
  constexpr int kRadial = 160, kAngular = 320;
  for (int r = 0; r <= kRadial; ++r) {
    const double rho = static_cast<double>(r) / kRadial;
    const int na = r == 0 ? 1 : kAngular;
    for (int a = 0; a < na; ++a) {
      const double th = 2.0 * std::numbers::pi * a / na;
      const Vec2 p(rho * std::cos(th), rho * std::sin(th));
      lip = std::max(lip, g.grad(p).norm());
      lip2 = std::max(lip2, g.hess(p).cwiseAbs().maxCoeff());
    }
  }
  return {lip, lip2};
}

}  // namespace

GraphFn make_graph_fn(GraphKind kind, const GraphParams& params) {
  GraphFn g;
  g.kind_ = kind;
  g.params_ = params;
  switch (kind) {
    case GraphKind::Flat:
      break;
    case GraphKind::Paraboloid:
      g.a_ = params.get("a");
      g.lip_ = std::abs(g.a_);
      g.lip2_ = std::abs(g.a_);
      break;
    case GraphKind::Sinusoid:
      g.a_ = params.get("a");
      g.omega_ = params.get("omega");
      g.lip_ = std::abs(g.a_ * g.omega_);
      g.lip2_ = std::abs(g.a_ * g.omega_ * g.omega_);
      break;
    case GraphKind::Tabulated: {
      const int n = static_cast<int>(params.get("n"));
      require(n >= 4, "tabulated graph needs at least 4 samples per axis");
      require(params.table.size() == static_cast<std::size_t>(n) * n,
              "tabulated graph: table size does not match n*n");
      auto t = std::make_shared<GraphFn::Table>();
      t->n = n;
      t->step = 2.0 / (n - 1);
      t->f = params.table;
      t->fx.assign(t->f.size(), 0.0);
      t->fy.assign(t->f.size(), 0.0);
      t->fxy.assign(t->f.size(), 0.0);
      auto idx = [n](int i, int j) { return j * n + i; };
      auto dx = [&](const std::vector<double>& v, int i, int j) {
        if (i == 0) return (v[idx(1, j)] - v[idx(0, j)]) / t->step;
        if (i == n - 1) return (v[idx(n - 1, j)] - v[idx(n - 2, j)]) / t->step;
        return (v[idx(i + 1, j)] - v[idx(i - 1, j)]) / (2 * t->step);
      };
      auto dy = [&](const std::vector<double>& v, int i, int j) {
        if (j == 0) return (v[idx(i, 1)] - v[idx(i, 0)]) / t->step;
        if (j == n - 1) return (v[idx(i, n - 1)] - v[idx(i, n - 2)]) / t->step;
        return (v[idx(i, j + 1)] - v[idx(i, j - 1)]) / (2 * t->step);
      };
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          t->fx[idx(i, j)] = dx(t->f, i, j);
          t->fy[idx(i, j)] = dy(t->f, i, j);
        }
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) t->fxy[idx(i, j)] = dy(t->fx, i, j);
      g.table_ = std::move(t);
      const double tol = 1e-8;
      require(std::abs(g.eval(Vec2::Zero())) <= tol && g.grad(Vec2::Zero()).norm() <= tol,
              "tabulated graph must satisfy phi(0) = 0 and grad phi(0) = 0");
      std::tie(g.lip_, g.lip2_) = sampled_seminorms(g);
      break;
    }
  }
  if (g.lip_ > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "graph " << to_string(kind) << " has Lip(phi) = " << g.lip_ << " > 1";
    throw ValidationError(msg.str());
  }
  return g;
}

SurfaceFrame surface_frame(const GraphFn& graph, const Vec2& p) {
  const Vec2 g = graph.grad(p);
  const Mat2 hm = graph.hess(p);
  const double s2 = g.squaredNorm() + 1.0;
  const double s = std::sqrt(s2);
  const Vec3 raw(-g.x(), -g.y(), 1.0);

  SurfaceFrame f;
  f.base = Vec3(p.x(), p.y(), graph.eval(p));
  f.normal = raw / s;
  f.t1 = (Vec3::UnitX() - f.normal.x() * f.normal).normalized();
  f.t2 = f.normal.cross(f.t1);
  f.shape.setZero();
  for (int beta = 0; beta < 2; ++beta) {
    // d nu / d x^beta
    const double dot = hm(0, beta) * g.x() + hm(1, beta) * g.y();
    const Vec3 d = Vec3(-hm(0, beta), -hm(1, beta), 0.0) / s - dot * raw / (s2 * s);
    f.shape.row(beta) = d.transpose();
  }
  return f;
}

bool Cylinder::contains(const Vec3& y) const {
  // Closed membership with a relative guard so that lattice points lying on
  // the cylinder's faces are counted.
  const double tol = radius * (1.0 + 1e-12);
  const double lateral = std::hypot(y.x() - center.x(), y.y() - center.y());
  return lateral <= tol && std::abs(y.z() - center.z()) <= tol;
}

std::vector<NodeIndex> ClipResult::all() const {
  std::vector<NodeIndex> out;
  out.reserve(size());
  out.insert(out.end(), interior.begin(), interior.end());
  out.insert(out.end(), graph.begin(), graph.end());
  out.insert(out.end(), fixed.begin(), fixed.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Graph domain

namespace {

/// Derivative at z = 0 of the quadratic through (0, 0), (-d1, 1), (-d1-d2, 2).
std::array<double, 3> backward_three_point(double d1, double d2) {
  const double z1 = -d1, z2 = -(d1 + d2);
  return {-1.0 / z1 - 1.0 / z2, -z2 / (z1 * (z1 - z2)), -z1 / (z2 * (z2 - z1))};
}

}  // namespace

GraphDomain build_graph_domain(const GraphFn& graph, double h) {
  require(h > 0.0 && h <= 0.125 + 1e-15, "grid spacing must satisfy 0 < h <= 1/8");

  GraphDomain dom;
  dom.graph_ = graph;
  dom.h_ = h;
  auto mesh = std::make_shared<Mesh>();
  Mesh& m = *mesh;

  const int half = static_cast<int>(std::floor((1.0 - 1e-12) / h));
  m.nx = m.ny = 2 * half + 1;
  m.x0 = m.y0 = -half * h;
  m.hx = m.hy = m.hz = h;
  m.column_of_cell.assign(static_cast<std::size_t>(m.nx) * m.ny, -1);

  auto inside_disk = [&](int i, int j) {
    const double x = (i - half) * h, y = (j - half) * h;
    return x * x + y * y < 1.0 - 1e-12;
  };
  for (int j = 0; j < m.ny; ++j)
    for (int i = 0; i < m.nx; ++i)
      if (inside_disk(i, j)) {
        m.column_of_cell[i + m.nx * j] = static_cast<std::int64_t>(m.column_cell.size());
        m.column_cell.emplace_back(i, j);
      }

  const std::size_t ncol = m.column_cell.size();
  std::vector<double> top(ncol);
  std::vector<int> levels(ncol);
  std::vector<bool> rim(ncol);
  dom.frames_.resize(ncol);
  for (std::size_t c = 0; c < ncol; ++c) {
    const auto [i, j] = m.column_cell[c];
    const Vec2 p((i - half) * h, (j - half) * h);
    top[c] = graph.eval(p);
    require(top[c] > -1.0 + 1.5 * h, "graph comes too close to the cylinder bottom");
    levels[c] = static_cast<int>(std::ceil((top[c] + 1.0 - 0.5 * h) / h - 1e-12));
    rim[c] = !(inside_disk(i - 1, j) && inside_disk(i + 1, j) && inside_disk(i, j - 1) &&
               inside_disk(i, j + 1));
    dom.frames_[c] = surface_frame(graph, p);
  }

  m.column_start.assign(ncol + 1, 0);
  for (std::size_t c = 0; c < ncol; ++c) m.column_start[c + 1] = m.column_start[c] + levels[c] + 1;
  const std::size_t n = m.column_start[ncol];
  m.points.resize(n);
  m.tags.resize(n);
  m.volume.resize(n);
  m.neighbors.assign(n, {});
  m.column_of_node.resize(n);
  m.graph_surface_index.assign(n, kNoNode);

  // Vertical dual lengths per node, used for volumes and lateral weights.
  std::vector<double> vdual(n);
  for (std::size_t c = 0; c < ncol; ++c) {
    const auto [i, j] = m.column_cell[c];
    const double x = (i - half) * h, y = (j - half) * h;
    const std::size_t base = m.column_start[c];
    const int K = levels[c];
    const double delta = top[c] - (-1.0 + (K - 1) * h);
    for (int k = 0; k <= K; ++k) {
      const NodeIndex v = base + k;
      m.column_of_node[v] = c;
      const bool surface = k == K;
      m.points[v] = Vec3(x, y, surface ? top[c] : -1.0 + k * h);
      if (rim[c] || k == 0) m.tags[v] = NodeTag::Fixed;
      else m.tags[v] = surface ? NodeTag::Graph : NodeTag::Interior;

      double below = k == 0 ? 0.0 : (k == K ? delta : h);
      double above = k == K ? 0.0 : (k == K - 1 ? delta : h);
      vdual[v] = 0.5 * (below + above);
      m.volume[v] = h * h * vdual[v];

      if (k > 0) {
        const double len = below;
        m.neighbors[v][kMinusZ] = {v - 1, len, h * h / len};
        m.neighbors[v - 1][kPlusZ] = {v, len, h * h / len};
      }
    }
  }

  // Lateral edges between equal lattice levels and between snapped nodes.
  const int di[4] = {-1, 1, 0, 0};
  const int dj[4] = {0, 0, -1, 1};
  // Gap between a row-end column and the circle in direction s (0 if the
  // next column is inside). Row-end edges are stretched to cover it.
  auto gap = [&](int i, int j, int s) {
    if (inside_disk(i + di[s], j + dj[s])) return 0.0;
    const double x = (i - half) * h, y = (j - half) * h;
    const double along = s < 2 ? x : y, across = s < 2 ? y : x;
    const double chord = std::sqrt(std::max(0.0, 1.0 - across * across));
    const double e = (s % 2 == 1) ? chord - along : chord + along;
    return std::clamp(e, 0.0, h);
  };
  for (std::size_t c = 0; c < ncol; ++c) {
    const auto [i, j] = m.column_cell[c];
    for (int s = 0; s < 4; ++s) {
      const int ni = i + di[s], nj = j + dj[s];
      if (ni < 0 || nj < 0 || ni >= m.nx || nj >= m.ny) continue;
      const std::int64_t nc = m.column_of_cell[ni + m.nx * nj];
      if (nc < 0) continue;
      const std::size_t cb = static_cast<std::size_t>(nc);
      const int back = s ^ 1;
      const double stretch = 1.0 + (gap(i, j, back) + gap(ni, nj, s)) / h;
      const int common = std::min(levels[c], levels[cb]);
      for (int k = 0; k < common; ++k) {
        const NodeIndex a = m.column_start[c] + k, b = m.column_start[cb] + k;
        m.neighbors[a][s] = {b, h, stretch * std::min(vdual[a], vdual[b])};
      }
      const NodeIndex sa = m.column_start[c] + levels[c];
      const NodeIndex sb = m.column_start[cb] + levels[cb];
      m.neighbors[sa][s] = {sb, h, stretch * std::min(vdual[sa], vdual[sb])};
    }
  }

  // Quadrature points on G_phi with second-order derivative stencils.
  for (std::size_t c = 0; c < ncol; ++c) {
    if (rim[c]) continue;
    const auto [i, j] = m.column_cell[c];
    const int K = levels[c];
    const NodeIndex s = m.column_start[c] + K;
    const double delta = top[c] - (-1.0 + (K - 1) * h);
    const auto w = backward_three_point(delta, h);
    const Stencil dz = {{s, w[0]}, {s - 1, w[1]}, {s - 2, w[2]}};

    SurfacePoint sp;
    sp.node = s;
    sp.normal = dom.frames_[c].normal;
    sp.shape = dom.frames_[c].shape;
    const Vec2 p(m.points[s].x(), m.points[s].y());
    sp.area = h * h * std::sqrt(1.0 + graph.grad(p).squaredNorm());
    sp.derivative[2] = dz;
    for (int axis = 0; axis < 2; ++axis) {
      const int ci = axis == 0 ? 1 : 0, cj = axis == 0 ? 0 : 1;
      const std::size_t cm = static_cast<std::size_t>(m.column_of_cell[(i - ci) + m.nx * (j - cj)]);
      const std::size_t cp = static_cast<std::size_t>(m.column_of_cell[(i + ci) + m.nx * (j + cj)]);
      const NodeIndex sm = m.column_start[cm] + levels[cm];
      const NodeIndex spl = m.column_start[cp] + levels[cp];
      const double slope = (top[cp] - top[cm]) / (2 * h);
      Stencil st = {{spl, 0.5 / h}, {sm, -0.5 / h}};
      for (const auto& [node, coeff] : dz) st.emplace_back(node, -slope * coeff);
      sp.derivative[axis] = std::move(st);
    }
    m.graph_surface_index[s] = m.surface.size();
    m.surface.push_back(std::move(sp));
  }

  dom.mesh_ = std::move(mesh);
  return dom;
}

// ---------------------------------------------------------------------------
// Box domain

BoxDomain build_box_domain(double l, double d, double h, int lateral_cells) {
  require(l > 0 && d > 0 && h > 0, "box dimensions and spacing must be positive");
  const double nz_real = 2.0 * d / h;
  const int nz = static_cast<int>(std::lround(nz_real));
  require(nz >= 3 && std::abs(nz_real - nz) <= 1e-6 * nz_real,
          "box height 2d must be an integer multiple (>= 3) of h");
  const int nl = lateral_cells > 0 ? lateral_cells : static_cast<int>(std::lround(l / h));
  require(nl >= 3, "box needs at least 3 lateral cells");

  BoxDomain box;
  box.l_ = l;
  box.d_ = d;
  box.h_ = h;
  box.lateral_cells_ = nl;
  auto mesh = std::make_shared<Mesh>();
  Mesh& m = *mesh;
  m.nx = m.ny = nl + 1;
  m.x0 = m.y0 = 0.0;
  m.hx = m.hy = l / nl;
  m.hz = 2.0 * d / nz;
  const int nzn = nz + 1;

  const std::size_t ncol = static_cast<std::size_t>(m.nx) * m.ny;
  m.column_of_cell.resize(ncol);
  m.column_start.resize(ncol + 1);
  for (int j = 0; j < m.ny; ++j)
    for (int i = 0; i < m.nx; ++i) {
      const std::size_t c = static_cast<std::size_t>(i + m.nx * j);
      m.column_of_cell[c] = static_cast<std::int64_t>(c);
      m.column_cell.emplace_back(i, j);
      m.column_start[c] = c * nzn;
    }
  m.column_start[ncol] = ncol * nzn;

  const std::size_t n = ncol * nzn;
  m.points.resize(n);
  m.tags.resize(n);
  m.volume.resize(n);
  m.neighbors.assign(n, {});
  m.column_of_node.resize(n);
  m.graph_surface_index.assign(n, kNoNode);

  const int dims[3] = {m.nx, m.ny, nzn};
  const double steps[3] = {m.hx, m.hy, m.hz};
  auto index = [&](int i, int j, int k) {
    return static_cast<NodeIndex>((i + m.nx * j) * nzn + k);
  };
  auto dual = [&](int axis, int idx) {
    return (idx == 0 || idx == dims[axis] - 1) ? 0.5 * steps[axis] : steps[axis];
  };

  for (int j = 0; j < m.ny; ++j)
    for (int i = 0; i < m.nx; ++i)
      for (int k = 0; k < nzn; ++k) {
        const NodeIndex v = index(i, j, k);
        const int ijk[3] = {i, j, k};
        m.points[v] = Vec3(i * m.hx, j * m.hy, -d + k * m.hz);
        m.column_of_node[v] = static_cast<std::size_t>(i + m.nx * j);
        const bool face = i == 0 || j == 0 || k == 0 || i == m.nx - 1 || j == m.ny - 1 ||
                          k == nzn - 1;
        m.tags[v] = face ? NodeTag::Fixed : NodeTag::Interior;
        m.volume[v] = dual(0, i) * dual(1, j) * dual(2, k);
        for (int axis = 0; axis < 3; ++axis) {
          if (ijk[axis] + 1 >= dims[axis]) continue;
          int nb[3] = {i, j, k};
          nb[axis] += 1;
          const NodeIndex u = index(nb[0], nb[1], nb[2]);
          const int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
          const double w = dual(o1, ijk[o1]) * dual(o2, ijk[o2]) / steps[axis];
          m.neighbors[v][2 * axis + 1] = {u, steps[axis], w};
          m.neighbors[u][2 * axis] = {v, steps[axis], w};
        }
      }

  // Surface points: every face node, once per face it belongs to.
  auto axis_stencil = [&](int axis, int i, int j, int k) {
    int ijk[3] = {i, j, k};
    const double st = steps[axis];
    auto at = [&](int offset) {
      int q[3] = {ijk[0], ijk[1], ijk[2]};
      q[axis] += offset;
      return index(q[0], q[1], q[2]);
    };
    Stencil s;
    if (ijk[axis] == 0) {
      const double c[4] = {-11.0, 18.0, -9.0, 2.0};
      for (int o = 0; o < 4; ++o) s.emplace_back(at(o), c[o] / (6.0 * st));
    } else if (ijk[axis] == dims[axis] - 1) {
      const double c[4] = {11.0, -18.0, 9.0, -2.0};
      for (int o = 0; o < 4; ++o) s.emplace_back(at(-o), c[o] / (6.0 * st));
    } else {
      s.emplace_back(at(1), 0.5 / st);
      s.emplace_back(at(-1), -0.5 / st);
    }
    return s;
  };
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const int fixed_idx = side == 0 ? 0 : dims[axis] - 1;
      const int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
      for (int a = 0; a < dims[o1]; ++a)
        for (int b = 0; b < dims[o2]; ++b) {
          int ijk[3];
          ijk[axis] = fixed_idx;
          ijk[o1] = a;
          ijk[o2] = b;
          SurfacePoint sp;
          sp.node = index(ijk[0], ijk[1], ijk[2]);
          sp.normal = Vec3::Zero();
          sp.normal[axis] = side == 0 ? -1.0 : 1.0;
          sp.area = dual(o1, a) * dual(o2, b);
          for (int q = 0; q < 3; ++q) sp.derivative[q] = axis_stencil(q, ijk[0], ijk[1], ijk[2]);
          m.surface.push_back(std::move(sp));
        }
    }
  }

  box.mesh_ = std::move(mesh);
  return box;
}

// ---------------------------------------------------------------------------

ClipResult cylinder_clip(const Mesh& mesh, const Cylinder& c) {
  require(c.radius >= 2.0 * mesh.max_spacing() * (1.0 - 1e-12),
          "cylinder radius is under-resolved (must be >= 2h)");
  ClipResult out;
  const double r = c.radius;
  const int i_lo = std::max(0, static_cast<int>(std::floor((c.center.x() - r - mesh.x0) / mesh.hx)));
  const int i_hi = std::min(mesh.nx - 1, static_cast<int>(std::ceil((c.center.x() + r - mesh.x0) / mesh.hx)));
  const int j_lo = std::max(0, static_cast<int>(std::floor((c.center.y() - r - mesh.y0) / mesh.hy)));
  const int j_hi = std::min(mesh.ny - 1, static_cast<int>(std::ceil((c.center.y() + r - mesh.y0) / mesh.hy)));
  for (int j = j_lo; j <= j_hi; ++j)
    for (int i = i_lo; i <= i_hi; ++i) {
      const std::int64_t col = mesh.column_of_cell[i + mesh.nx * j];
      if (col < 0) continue;
      const std::size_t cc = static_cast<std::size_t>(col);
      for (std::size_t v = mesh.column_start[cc]; v < mesh.column_start[cc + 1]; ++v) {
        if (!c.contains(mesh.points[v])) continue;
        switch (mesh.tags[v]) {
          case NodeTag::Interior: out.interior.push_back(v); break;
          case NodeTag::Graph: out.graph.push_back(v); break;
          case NodeTag::Fixed: out.fixed.push_back(v); break;
        }
      }
    }
  return out;
}

}  // namespace harmap
