#include "harmap/cli.hpp"

#include "harmap/analysis.hpp"
#include "harmap/constructions.hpp"
#include "harmap/io.hpp"
#include "harmap/optimizer.hpp"
#include "harmap/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

namespace harmap::cli {

namespace {

namespace fs = std::filesystem;

// JSON config files for CLI11: nested objects name subcommands.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::parse_error& e) {
      throw CLI::ConversionError(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("JSON config must be an object");
    std::vector<CLI::ConfigItem> items;
    flatten(j, "", {}, items);
    return items;
  }

  static json dump(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (opt->get_type_size() != 0) {
        if (opt->count() == 1) j[name] = opt->results().at(0);
        else if (opt->count() > 1) j[name] = opt->results();
        else if (default_also && !opt->get_default_str().empty()) j[name] = opt->get_default_str();
      } else if (opt->count() > 0) {
        j[name] = true;
      } else if (default_also) {
        j[name] = false;
      }
    }
    for (const CLI::App* sub : app->get_subcommands({}))
      if (sub->parsed()) j[sub->get_name()] = dump(sub, default_also);
    return j;
  }

 private:
  static std::string scalar(const json& v, const std::string& name) {
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    throw CLI::ConversionError("cannot convert config value '" + name + "'");
  }

  static void flatten(const json& j, const std::string& name, std::vector<std::string> prefix,
                      std::vector<CLI::ConfigItem>& out) {
    if (j.is_object()) {
      if (!name.empty()) prefix.push_back(name);
      for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, it.key(), prefix, out);
      return;
    }
    CLI::ConfigItem item;
    item.name = name;
    item.parents = prefix;
    if (j.is_array())
      for (const auto& v : j) item.inputs.push_back(scalar(v, name));
    else
      item.inputs = {scalar(j, name)};
    out.push_back(std::move(item));
  }
};

std::string fnv1a_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot read input '" + path + "'");
  std::uint64_t hash = 1469598103934665603ULL;
  char buf[4096];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
  }
  char out[24];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

struct Context {
  fs::path dir;
  std::vector<std::string> outputs;
  json inputs = json::object();
  std::ostream& log;

  std::string file(const std::string& name) {
    outputs.push_back(name);
    return (dir / name).string();
  }
  void input(const std::string& path) { inputs[path] = "fnv1a64:" + fnv1a_file(path); }
};

struct DomainOpts {
  std::string domain_file;
  std::string graph = "flat";
  double a = 0.4;
  double omega = 1.0;
  double h = 0.0625;
};

struct EnergyOpts {
  double K = 1.0;
  double K13 = 0.0;

  EnergyParams params() const {
    EnergyParams p{K, K13};
    p.validate();
    return p;
  }
};

void add_domain_options(CLI::App* sub, DomainOpts& d) {
  sub->add_option("--domain", d.domain_file, "Domain descriptor JSON {kind, params, h}");
  sub->add_option("--graph", d.graph, "Graph family: flat, paraboloid, sinusoid")->capture_default_str();
  sub->add_option("--a", d.a, "Graph amplitude")->capture_default_str();
  sub->add_option("--omega", d.omega, "Sinusoid frequency")->capture_default_str();
  sub->add_option("--h", d.h, "Grid spacing")->capture_default_str();
}

void add_energy_options(CLI::App* sub, EnergyOpts& e) {
  sub->add_option("--K", e.K, "Elastic constant K > 0")->capture_default_str();
  sub->add_option("--K13", e.K13, "Surface coefficient K13")->capture_default_str();
}

Domain make_domain(const DomainOpts& d, Context& ctx) {
  DomainSpec spec;
  if (!d.domain_file.empty()) {
    ctx.input(d.domain_file);
    spec = domain_spec_from_json(read_json(d.domain_file));
  } else {
    spec.kind = d.graph;
    spec.h = d.h;
    if (d.graph == "paraboloid") spec.params = {{"a", d.a}};
    else if (d.graph == "sinusoid") spec.params = {{"a", d.a}, {"omega", d.omega}};
    else require(d.graph == "flat", "--graph must be flat, paraboloid or sinusoid (use --domain otherwise)");
  }
  return build_domain(spec);
}

const GraphDomain& need_graph(const Domain& d) {
  require(d.graph.has_value(), "this command needs a graph domain, not a box");
  return *d.graph;
}

// Planar equator-valued data, rotated onto the boundary tangent plane by Q^T.
PointMap builtin_trace(const std::string& name, const GraphFn& graph, double alpha) {
  std::function<Vec3(const Vec3&)> w;
  if (name == "equator") {
    w = [alpha](const Vec3& x) { return Vec3(std::cos(alpha * x.x()), std::sin(alpha * x.x()), 0.0); };
  } else if (name == "smooth") {
    w = [](const Vec3& x) {
      const double t = x.x() + 0.5 * x.y();
      return Vec3(std::cos(t), std::sin(t), 0.0);
    };
  } else if (name == "vortex2") {
    w = [](const Vec3& x) {
      const double t = std::atan2(x.y() - 0.015625, x.x() - 0.36) +
                       std::atan2(x.y() - 0.015625, x.x() + 0.36);
      return Vec3(std::cos(t), std::sin(t), 0.0);
    };
  } else if (name == "north") {
    return [](const Vec3&) { return Vec3(Vec3::UnitZ()); };
  } else {
    throw ValidationError("unknown trace source '" + name +
                          "' (expected equator, smooth, vortex2, north or a field CSV)");
  }
  return [w, graph](const Vec3& x) {
    const Mat3 Q = rotation_from_gradient(graph.grad(Vec2(x.x(), x.y()))).Q;
    return Vec3(Q.transpose() * w(x));
  };
}

struct TraceSpec {
  BoundaryMode mode = BoundaryMode::Tangential;
  std::string source;
};

TraceSpec parse_trace(const std::string& s) {
  const auto colon = s.find(':');
  require(colon != std::string::npos, "--trace must look like <tangential|fixed>:<source>");
  return {boundary_mode_from_string(s.substr(0, colon)), s.substr(colon + 1)};
}

SphereField load_field(const std::string& path, const Mesh& mesh, Context& ctx) {
  ctx.input(path);
  const FieldTable t = read_field_csv(path);
  require(t.points.size() == mesh.size(), "field file '" + path + "' has " +
                                              std::to_string(t.points.size()) + " nodes, domain has " +
                                              std::to_string(mesh.size()));
  for (NodeIndex v = 0; v < mesh.size(); ++v)
    require((t.points[v] - mesh.points[v]).norm() <= 1e-9,
            "field file node " + std::to_string(v) + " does not match the domain");
  SphereField u;
  u.values = t.values;
  return renormalize(u);
}

SphereField initial_field(const TraceSpec& tr, const GraphDomain& dom, double alpha, Context& ctx) {
  if (tr.source.size() > 4 && tr.source.substr(tr.source.size() - 4) == ".csv")
    return load_field(tr.source, dom.mesh(), ctx);
  return extend_trace(dom.mesh(), builtin_trace(tr.source, dom.graph(), alpha), tr.mode);
}

struct MinimizeCli {
  DomainOpts domain;
  EnergyOpts energy;
  std::string trace = "tangential:smooth";
  double alpha = 1.0;
  MinimizeOptions opts;
  bool vtk = false;

  void add(CLI::App* sub) {
    add_domain_options(sub, domain);
    add_energy_options(sub, energy);
    sub->add_option("--trace", trace, "Boundary data <tangential|fixed>:<equator|smooth|vortex2|north|file.csv>")
        ->capture_default_str();
    sub->add_option("--alpha", alpha, "Wave number of the equator trace")->capture_default_str();
    sub->add_option("--max-iters", opts.max_iters)->capture_default_str();
    sub->add_option("--step0", opts.step0)->capture_default_str();
    sub->add_option("--armijo-c", opts.armijo_c)->capture_default_str();
    sub->add_option("--backtrack", opts.backtrack)->capture_default_str();
    sub->add_option("--grad-tol", opts.grad_tol)->capture_default_str();
    sub->add_option("--energy-tol", opts.energy_tol)->capture_default_str();
    sub->add_flag("--vtk", vtk, "Also write field.vtk");
  }

  MinimizeResult solve(const GraphDomain& dom, Context& ctx, json& report) {
    const TraceSpec tr = parse_trace(trace);
    MinimizeOptions o = opts;
    o.boundary_mode = tr.mode;
    const SphereField init = initial_field(tr, dom, alpha, ctx);
    const EnergyParams ep = energy.params();
    try {
      MinimizeResult res = minimize_G(dom.mesh(), init, ep, o);
      summarize(res, dom, ep, o, report);
      return res;
    } catch (const StallError& e) {
      write_trace_csv(ctx.file("trace.csv"), e.trace());
      throw;
    }
  }

  static void summarize(const MinimizeResult& res, const GraphDomain& dom, const EnergyParams& ep,
                        const MinimizeOptions& o, json& report) {
    const auto& rows = res.trace.rows;
    bool monotone = true;
    double max_unit = 0.0, max_tan = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0 && rows[i].energy > rows[i - 1].energy) monotone = false;
      max_unit = std::max(max_unit, rows[i].unit);
      max_tan = std::max(max_tan, rows[i].tangency);
    }
    report["functional"] = "G: K int |grad u|^2 - K13 int_G u.(d nu) u";
    report["energy_params"] = {{"K", ep.K}, {"K13", ep.K13}};
    report["options"] = o;
    report["iterations"] = rows.size() - 1;
    report["converged"] = res.trace.converged;
    report["stop_reason"] = res.trace.stop_reason;
    report["initial_energy"] = rows.front().energy;
    report["final"] = rows.back();
    report["energy"] = energy_G(res.field, dom.mesh(), ep);
    report["monotone"] = monotone;
    report["max_unit_violation"] = max_unit;
    report["max_tangency_violation"] = max_tan;
    report["residual"] = el_residual(res.field, dom.mesh());
  }
};

std::vector<Vec3> parse_points(const std::vector<std::string>& items) {
  std::vector<Vec3> out;
  for (const auto& s : items) {
    std::stringstream ss(s);
    std::string c;
    double v[3];
    for (int k = 0; k < 3; ++k) {
      require(static_cast<bool>(std::getline(ss, c, ',')), "point '" + s + "' must be x,y,z");
      try {
        v[k] = std::stod(c);
      } catch (const std::exception&) {
        throw ValidationError("point '" + s + "' must be x,y,z");
      }
    }
    out.emplace_back(v[0], v[1], v[2]);
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"harmap: discretize, minimize and verify the sphere-valued energy with K13 surface term"};
  app.name("harmap");
  app.set_help_flag("--help", "Print this help message and exit");
  app.config_formatter(std::make_shared<JsonConfig>());
  CLI::Option* config_opt = app.set_config("--config", "", "JSON config file (flags override it)");
  std::string out_dir = "harmap_out";
  std::size_t threads = 0;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker cap (0 = library default)")->capture_default_str();
  app.require_subcommand(1);
  app.fallthrough();

  std::function<void(Context&)> action;
  std::string command;

  // blowup ------------------------------------------------------------------
  BlowupParams bp;
  bp.rho0 = std::numbers::pi / 4.0;
  bp.energy.K13 = 1.0;
  int lateral = 4;
  auto* blowup = app.add_subcommand("blowup", "Layered blow-up field: numeric vs closed-form energy");
  blowup->add_option("--rho0", bp.rho0)->capture_default_str();
  blowup->add_option("--eps", bp.eps)->capture_default_str();
  blowup->add_option("--K", bp.energy.K)->capture_default_str();
  blowup->add_option("--K13", bp.energy.K13)->capture_default_str();
  blowup->add_option("--l", bp.l)->capture_default_str();
  blowup->add_option("--d", bp.d)->capture_default_str();
  blowup->add_option("--lateral-cells", lateral)->capture_default_str();
  blowup->callback([&] {
    command = "blowup";
    action = [&](Context& ctx) {
      const BlowupResult r = blowup_energy(bp, lateral);
      json j = r;
      j["functional"] = "E: (K/2) int |grad n|^2 + K13 int ((n.grad)n).nu";
      j["params"] = {{"rho0", bp.rho0}, {"eps", bp.eps}, {"K", bp.energy.K}, {"K13", bp.energy.K13},
                     {"l", bp.l},       {"d", bp.d},     {"lateral_cells", lateral}};
      write_json(ctx.file("blowup.json"), j);
      ctx.log << "closed form " << format_number(r.closed_form) << ", numeric "
              << format_number(r.numeric.total) << ", relative error "
              << format_number(r.relative_error) << '\n';
    };
  });

  // minimize ----------------------------------------------------------------
  MinimizeCli mc;
  auto* minimize = app.add_subcommand("minimize", "Minimize G on a graph domain");
  mc.add(minimize);
  minimize->callback([&] {
    command = "minimize";
    action = [&](Context& ctx) {
      const Domain dom = make_domain(mc.domain, ctx);
      const GraphDomain& g = need_graph(dom);
      json report;
      report["domain"] = to_json(dom.spec);
      report["trace"] = mc.trace;
      const MinimizeResult res = mc.solve(g, ctx, report);
      write_field_csv(ctx.file("field.csv"), res.field, g.mesh());
      write_trace_csv(ctx.file("trace.csv"), res.trace);
      if (mc.vtk) {
        const auto dens = energy_G(res.field, g.mesh(), mc.energy.params()).density;
        write_vtk(ctx.file("field.vtk"), g.mesh(), {{"u", &res.field.values}}, {{"density", &dens}});
      }
      write_json(ctx.file("minimize.json"), report);
      ctx.log << "iterations " << report["iterations"] << ", energy "
              << format_number(res.trace.rows.back().energy) << ", " << res.trace.stop_reason << '\n';
    };
  });

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Bound and consistency suites");
  verify->require_subcommand(1);

  std::size_t q_graphs = 100, q_samples = 1000;
  std::uint64_t q_seed = 11;
  auto* qb = verify->add_subcommand("q-bounds", "Rotation and shape-operator bounds");
  qb->add_option("--graphs", q_graphs)->capture_default_str();
  qb->add_option("--samples", q_samples)->capture_default_str();
  qb->add_option("--seed", q_seed)->capture_default_str();
  qb->callback([&] {
    command = "verify q-bounds";
    action = [&](Context& ctx) {
      const auto reps = verify_rotation_bounds(random_graphs(q_graphs, 1.0, q_seed), q_samples, q_seed);
      bool ok = true;
      for (const auto& r : reps) ok = ok && r.passed();
      write_json(ctx.file("q_bounds.json"), {{"graphs", q_graphs}, {"samples_per_graph", q_samples},
                                             {"all_passed", ok}, {"reports", reps}});
      ctx.log << (ok ? "all bounds hold" : "BOUND VIOLATED") << '\n';
    };
  });

  ProjectionSuiteOptions po;
  auto* pb = verify->add_subcommand("pi-bounds", "Tangent-line projection bounds");
  pb->add_option("--samples", po.derivative_samples)->capture_default_str();
  pb->add_option("--pairs", po.pair_samples)->capture_default_str();
  pb->add_option("--min-cross", po.min_cross)->capture_default_str();
  pb->add_option("--seed", po.seed)->capture_default_str();
  pb->callback([&] {
    command = "verify pi-bounds";
    action = [&](Context& ctx) {
      const auto reps = verify_projection_bounds(po);
      bool ok = true;
      for (const auto& r : reps) ok = ok && r.passed();
      write_json(ctx.file("pi_bounds.json"), {{"all_passed", ok}, {"reports", reps}});
      ctx.log << (ok ? "all bounds hold" : "BOUND VIOLATED") << '\n';
    };
  });

  std::size_t p_graphs = 20, p_fields = 5;
  double p_h = 0.0625;
  std::uint64_t p_seed = 17;
  auto* pc = verify->add_subcommand("poincare", "Poincare ratio and its refinement stability");
  pc->add_option("--graphs", p_graphs)->capture_default_str();
  pc->add_option("--fields", p_fields)->capture_default_str();
  pc->add_option("--h", p_h)->capture_default_str();
  pc->add_option("--seed", p_seed)->capture_default_str();
  pc->callback([&] {
    command = "verify poincare";
    action = [&](Context& ctx) {
      const PoincareReport r = poincare_experiment(p_graphs, p_fields, p_h, p_seed);
      write_json(ctx.file("poincare.json"), r);
      ctx.log << "max ratio " << format_number(r.max_ratio_coarse) << " -> "
              << format_number(r.max_ratio_fine) << '\n';
    };
  });

  DomainOpts gd;
  EnergyOpts ge;
  int g_fields = 10, g_nodes = 20;
  double g_step = 1e-4;
  std::uint64_t g_seed = 7;
  auto* gc = verify->add_subcommand("gradient", "grad_G against central differences");
  add_domain_options(gc, gd);
  add_energy_options(gc, ge);
  gc->add_option("--fields", g_fields)->capture_default_str();
  gc->add_option("--nodes", g_nodes)->capture_default_str();
  gc->add_option("--step", g_step)->capture_default_str();
  gc->add_option("--seed", g_seed)->capture_default_str();
  gc->callback([&] {
    command = "verify gradient";
    action = [&](Context& ctx) {
      const Domain dom = make_domain(gd, ctx);
      const GradientCheck r = gradient_check(dom.mesh(), ge.params(), g_fields, g_nodes, g_step, g_seed);
      write_json(ctx.file("gradient.json"), {{"domain", to_json(dom.spec)},
                                             {"energy_params", {{"K", ge.K}, {"K13", ge.K13}}},
                                             {"check", r}});
      ctx.log << "max relative error " << format_number(r.max_relative_error) << '\n';
    };
  });

  // boundary-gen ------------------------------------------------------------
  int genus = 0, resolution = 48;
  auto* bg = app.add_subcommand("boundary-gen", "Tangent boundary data on a genus-k surface");
  bg->add_option("--genus", genus)->capture_default_str();
  bg->add_option("--resolution", resolution)->capture_default_str();
  bg->callback([&] {
    command = "boundary-gen";
    action = [&](Context& ctx) {
      const TangentBoundaryData d = genus_boundary_field(genus, resolution);
      write_boundary_csv(ctx.file("boundary.csv"), d);
      write_json(ctx.file("boundary.json"), d);
      ctx.log << "ledger sum " << d.ledger_sum << ", chi " << d.euler_characteristic << '\n';
    };
  });

  // decay -------------------------------------------------------------------
  MinimizeCli dc;
  std::string d_field;
  std::vector<std::string> d_centers;
  double d_R = 0.5;
  int d_levels = 4;
  bool d_detect = false;
  double d_threshold = 0.0, d_kappa = 0.3;
  std::string d_vortex = "0.36,0.015625,0";
  auto* decay = app.add_subcommand("decay", "Rescaled-energy decay profiles and singular-point detection");
  dc.add(decay);
  decay->add_option("--field", d_field, "Field CSV on the same domain (skips minimization)");
  decay->add_option("--center", d_centers, "Centre x,y,z (repeatable)");
  decay->add_option("--R", d_R)->capture_default_str();
  decay->add_option("--levels", d_levels)->capture_default_str();
  decay->add_flag("--detect", d_detect, "Also run singular-point detection on G nodes");
  decay->add_option("--threshold", d_threshold, "Detection threshold (0: kappa times the vortex reference)")
      ->capture_default_str();
  decay->add_option("--kappa", d_kappa)->capture_default_str();
  decay->add_option("--vortex", d_vortex, "Reference vortex centre x,y,z for the threshold")
      ->capture_default_str();
  decay->callback([&] {
    command = "decay";
    action = [&](Context& ctx) {
      const Domain dom = make_domain(dc.domain, ctx);
      const GraphDomain& g = need_graph(dom);
      json report;
      report["domain"] = to_json(dom.spec);
      SphereField u;
      if (!d_field.empty()) {
        u = load_field(d_field, g.mesh(), ctx);
      } else {
        json mini;
        u = dc.solve(g, ctx, mini).field;
        report["minimize"] = mini;
      }
      const auto centers = parse_points(d_centers);
      require(!centers.empty() || d_detect, "decay needs at least one --center or --detect");
      const auto profiles = decay_scan(u, g.mesh(), centers, d_R, d_levels);
      write_decay_csv(ctx.file("decay.csv"), profiles);
      report["profiles"] = profiles;
      if (d_detect) {
        double thr = d_threshold;
        if (thr <= 0.0) {
          const Vec3 a = parse_points({d_vortex}).front();
          thr = d_kappa * vortex_reference_energy(g.mesh(), a, d_R);
          report["calibration"] = {{"kappa", d_kappa}, {"vortex", {a.x(), a.y(), a.z()}}, {"R", d_R}};
        }
        const SingularReport s = detect_singular(u, g.mesh(), thr, 2.0 * g.h(), d_R);
        report["singular"] = s;
      }
      write_json(ctx.file("decay.json"), report);
      ctx.log << profiles.size() << " profiles\n";
    };
  });

  // residual ----------------------------------------------------------------
  DomainOpts rd;
  std::string r_field;
  double r_alpha = std::numbers::pi;
  auto* residual = app.add_subcommand("residual", "Euler-Lagrange residual of a field");
  add_domain_options(residual, rd);
  residual->add_option("--field", r_field, "Field CSV (default: analytic equator rotation)");
  residual->add_option("--alpha", r_alpha, "Wave number of the analytic field")->capture_default_str();
  residual->callback([&] {
    command = "residual";
    action = [&](Context& ctx) {
      const Domain dom = make_domain(rd, ctx);
      const Mesh& m = dom.mesh();
      SphereField u;
      json report;
      report["domain"] = to_json(dom.spec);
      if (!r_field.empty()) {
        u = load_field(r_field, m, ctx);
        report["field"] = r_field;
      } else {
        u = make_field([&](const Vec3& x) {
          return Vec3(std::cos(r_alpha * x.x()), std::sin(r_alpha * x.x()), 0.0);
        }, m);
        report["field"] = "equator";
        report["alpha"] = r_alpha;
      }
      report["residual"] = el_residual(u, m);
      write_json(ctx.file("residual.json"), report);
      ctx.log << "interior L2 residual " << format_number(report["residual"]["interior_l2"].get<double>()) << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    if (!dynamic_cast<const CLI::ConversionError*>(&e)) err << app.help();
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  const auto start = std::chrono::steady_clock::now();
  json manifest;
  manifest["command"] = command;
  manifest["argv"] = std::vector<std::string>(argv + 1, argv + argc);
  manifest["options"] = JsonConfig::dump(&app, true);
  manifest["version"] = HARMAP_VERSION;
  manifest["threads"] = threads;

  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory '" << out_dir << "': " << ec.message() << '\n';
    return kValidation;
  }
  Context ctx{dir, {}, json::object(), out};
  int code = kOk;
  try {
    if (config_opt->count() > 0 && !config_opt->results().empty())
      ctx.input(config_opt->results().front());
    parallel::set_max_threads(threads);
    action(ctx);
    manifest["status"] = "ok";
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    manifest["status"] = "validation_error";
    manifest["error"] = e.what();
    code = kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    manifest["status"] = "internal_error";
    manifest["error"] = e.what();
    code = kInternal;
  }
  manifest["exit_code"] = code;
  manifest["inputs"] = ctx.inputs;
  manifest["outputs"] = ctx.outputs;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_json((dir / "run.json").string(), manifest);
  } catch (const std::exception& e) {
    err << "error: cannot write run.json: " << e.what() << '\n';
    if (code == kOk) code = kInternal;
  }
  return code;
}

}  // namespace harmap::cli
