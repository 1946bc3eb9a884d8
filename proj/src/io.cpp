#include "harmap/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace harmap {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  return os;
}

void row(std::ostream& os, std::initializer_list<double> xs) {
  bool first = true;
  for (double x : xs) {
    if (!first) os << ',';
    os << format_number(x);
    first = false;
  }
}

}  // namespace

void to_json(json& j, const EnergyReport& r) {
  j = {{"dirichlet", r.dirichlet}, {"surface", r.surface}, {"total", r.total}};
}

void to_json(json& j, const DecayProfile& p) {
  j = {{"center", vec_json(p.center)}, {"radii", p.radii},       {"integrals", p.integrals},
       {"values", p.values},           {"exponent", p.exponent}, {"residual", p.residual},
       {"used", p.used},               {"smallness", p.smallness}};
}

void to_json(json& j, const BoundReport& r) {
  j = {{"name", r.name},         {"cap", r.cap},         {"measured", r.measured},
       {"margin", r.margin},     {"samples", r.samples}, {"violations", r.violations},
       {"strict", r.strict},     {"worst", r.worst},     {"passed", r.passed()},
       {"extra", r.extra}};
}

void to_json(json& j, const SingularReport& r) {
  json flagged = json::array();
  for (const auto& f : r.flagged)
    flagged.push_back({{"node", f.node},
                       {"position", vec_json(f.position)},
                       {"min_radius", f.min_radius},
                       {"min_energy", f.min_energy}});
  j = {{"threshold", r.threshold}, {"r_min", r.r_min},   {"r_max", r.r_max},
       {"tested", r.tested},       {"flagged", flagged}};
}

void to_json(json& j, const BlowupResult& r) {
  j = {{"closed_form", r.closed_form}, {"numeric", r.numeric}, {"relative_error", r.relative_error},
       {"h", r.h},                     {"nodes", r.nodes}};
}

void to_json(json& j, const VortexNormEstimate& e) {
  j = {{"coarse", e.coarse}, {"fine", e.fine}, {"extrapolated", e.extrapolated}};
}

void to_json(json& j, const TangentBoundaryData& d) {
  json vort = json::array();
  for (const auto& v : d.vortices)
    vort.push_back({{"center", vec_json(v.center)},
                    {"normal", vec_json(v.normal)},
                    {"index", v.index},
                    {"winding", v.winding},
                    {"chart", v.chart}});
  j = {{"genus", d.genus},
       {"surface", d.surface},
       {"euler_characteristic", d.euler_characteristic},
       {"nodes", d.nodes.size()},
       {"vortices", vort},
       {"ledger_sum", d.ledger_sum},
       {"max_tangency", d.max_tangency}};
}

void to_json(json& j, const ElResidual& r) {
  j = {{"interior_l2", r.interior_l2},
       {"interior_max", r.interior_max},
       {"interior_nodes", r.interior_nodes},
       {"boundary_max_distance", r.boundary_max_distance},
       {"boundary_nodes", r.boundary_nodes},
       {"histogram", r.histogram}};
}

void to_json(json& j, const GradientCheck& g) {
  j = {{"max_relative_error", g.max_relative_error}, {"comparisons", g.comparisons}};
}

void to_json(json& j, const PoincareReport& r) {
  j = {{"h", r.h},
       {"max_ratio_coarse", r.max_ratio_coarse},
       {"max_ratio_fine", r.max_ratio_fine},
       {"relative_change", r.relative_change},
       {"samples", r.samples},
       {"skipped", r.skipped},
       {"bound", r.bound}};
}

void to_json(json& j, const MinimizeOptions& o) {
  j = {{"max_iters", o.max_iters},
       {"step0", o.step0},
       {"armijo_c", o.armijo_c},
       {"backtrack", o.backtrack},
       {"grad_tol", o.grad_tol},
       {"energy_tol", o.energy_tol},
       {"max_backtracks", o.max_backtracks},
       {"boundary_mode", to_string(o.boundary_mode)}};
}

void to_json(json& j, const TraceRow& r) {
  j = {{"iter", r.iter}, {"energy", r.energy}, {"grad_norm", r.grad_norm}, {"step", r.step},
       {"backtracks", r.backtracks}, {"tangency", r.tangency}, {"unit", r.unit}};
}

// ---------------------------------------------------------------------------

DomainSpec domain_spec_from_json(const json& j) {
  require(j.is_object(), "domain descriptor must be a JSON object");
  DomainSpec s;
  require(j.contains("kind") && j["kind"].is_string(), "domain descriptor needs a string 'kind'");
  s.kind = j["kind"].get<std::string>();
  if (j.contains("params")) {
    require(j["params"].is_object(), "domain 'params' must be an object");
    s.params = j["params"];
  }
  require(j.contains("h") && j["h"].is_number(), "domain descriptor needs a numeric 'h'");
  s.h = j["h"].get<double>();
  return s;
}

json to_json(const DomainSpec& spec) {
  return {{"kind", spec.kind}, {"params", spec.params}, {"h", spec.h}};
}

const Mesh& Domain::mesh() const {
  if (graph) return graph->mesh();
  if (box) return box->mesh();
  throw ValidationError("domain was not built");
}

GraphFn graph_from_spec(const std::string& kind, const json& params) {
  GraphParams gp;
  for (const auto& [key, val] : params.items()) {
    if (key == "table") {
      require(val.is_array(), "'table' must be an array of numbers");
      for (const auto& x : val) gp.table.push_back(x.get<double>());
    } else {
      require(val.is_number(), "graph parameter '" + key + "' must be numeric");
      gp.scalars[key] = val.get<double>();
    }
  }
  return make_graph_fn(graph_kind_from_string(kind), gp);
}

Domain build_domain(const DomainSpec& spec) {
  Domain d;
  d.spec = spec;
  if (spec.kind == "box") {
    const double l = spec.params.value("l", 1.0);
    const double dd = spec.params.value("d", 1.0);
    const int cells = spec.params.value("lateral_cells", 0);
    d.box = build_box_domain(l, dd, spec.h, cells);
  } else {
    d.graph = build_graph_domain(graph_from_spec(spec.kind, spec.params), spec.h);
  }
  return d;
}

// ---------------------------------------------------------------------------

void write_field_csv(const std::string& path, const SphereField& u, const Mesh& mesh) {
  require(u.size() == mesh.size(), "field and mesh sizes differ");
  auto os = open_out(path);
  os << "node,x,y,z,u1,u2,u3\n";
  for (NodeIndex v = 0; v < mesh.size(); ++v) {
    const Vec3& p = mesh.points[v];
    const Vec3& x = u.values[v];
    os << v << ',';
    row(os, {p.x(), p.y(), p.z(), x.x(), x.y(), x.z()});
    os << '\n';
  }
}

FieldTable read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open field file '" + path + "'");
  std::string line;
  std::getline(is, line);
  require(line.rfind("node,x,y,z,u1,u2,u3", 0) == 0, "field file '" + path + "' has an unexpected header");
  FieldTable t;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double vals[7];
    for (int k = 0; k < 7; ++k) {
      require(static_cast<bool>(std::getline(ss, cell, ',')),
              "field file line " + std::to_string(lineno) + " has too few columns");
      try {
        vals[k] = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError("field file line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    require(static_cast<std::size_t>(vals[0]) == t.points.size(),
            "field file nodes must be listed in order");
    t.points.emplace_back(vals[1], vals[2], vals[3]);
    t.values.emplace_back(vals[4], vals[5], vals[6]);
  }
  return t;
}

void write_trace_csv(const std::string& path, const MinimizeTrace& trace) {
  auto os = open_out(path);
  os << "iter,energy,grad_norm,step,backtracks,tangency,unit\n";
  for (const auto& r : trace.rows) {
    os << r.iter << ',';
    row(os, {r.energy, r.grad_norm, r.step});
    os << ',' << r.backtracks << ',';
    row(os, {r.tangency, r.unit});
    os << '\n';
  }
}

void write_boundary_csv(const std::string& path, const TangentBoundaryData& data) {
  auto os = open_out(path);
  os << "node,x,y,z,nu1,nu2,nu3,g1,g2,g3\n";
  for (std::size_t i = 0; i < data.nodes.size(); ++i) {
    const auto& n = data.nodes[i];
    os << i << ',';
    row(os, {n.position.x(), n.position.y(), n.position.z(), n.normal.x(), n.normal.y(),
             n.normal.z(), n.value.x(), n.value.y(), n.value.z()});
    os << '\n';
  }
}

void write_decay_csv(const std::string& path, const std::vector<DecayProfile>& profiles) {
  auto os = open_out(path);
  os << "center_x,center_y,center_z,r,integral,E_r,exponent,residual\n";
  for (const auto& p : profiles)
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
      row(os, {p.center.x(), p.center.y(), p.center.z(), p.radii[k], p.integrals[k], p.values[k],
               p.exponent, p.residual});
      os << '\n';
    }
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::map<std::string, const std::vector<Vec3>*>& vectors,
               const std::map<std::string, const std::vector<double>*>& scalars) {
  auto os = open_out(path);
  const std::size_t n = mesh.size();
  os << "# vtk DataFile Version 3.0\nharmap nodes\nASCII\nDATASET POLYDATA\n";
  os << "POINTS " << n << " double\n";
  for (const auto& p : mesh.points) {
    row(os, {p.x(), p.y(), p.z()});
    os << '\n';
  }
  os << "VERTICES " << n << ' ' << 2 * n << '\n';
  for (std::size_t v = 0; v < n; ++v) os << "1 " << v << '\n';
  os << "POINT_DATA " << n << '\n';
  os << "SCALARS tag int 1\nLOOKUP_TABLE default\n";
  for (auto t : mesh.tags) os << static_cast<int>(t) << '\n';
  for (const auto& [name, data] : scalars) {
    require(data->size() == n, "VTK scalar '" + name + "' has the wrong length");
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : *data) os << format_number(x) << '\n';
  }
  for (const auto& [name, data] : vectors) {
    require(data->size() == n, "VTK vector '" + name + "' has the wrong length");
    os << "VECTORS " << name << " double\n";
    for (const auto& x : *data) {
      os << format_number(x.x()) << ' ' << format_number(x.y()) << ' ' << format_number(x.z()) << '\n';
    }
  }
}

void write_json(const std::string& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace harmap
