#pragma once

#include "harmap/analysis.hpp"
#include "harmap/constructions.hpp"
#include "harmap/energy.hpp"
#include "harmap/geometry.hpp"
#include "harmap/optimizer.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace harmap {

using json = nlohmann::json;

/// Shortest round-trip decimal form ("%.17g").
std::string format_number(double x);

// JSON views of the report types. Density buffers are omitted.
void to_json(json& j, const EnergyReport& r);
void to_json(json& j, const DecayProfile& p);
void to_json(json& j, const BoundReport& r);
void to_json(json& j, const SingularReport& r);
void to_json(json& j, const BlowupResult& r);
void to_json(json& j, const VortexNormEstimate& e);
void to_json(json& j, const TangentBoundaryData& d);
void to_json(json& j, const ElResidual& r);
void to_json(json& j, const GradientCheck& g);
void to_json(json& j, const PoincareReport& r);
void to_json(json& j, const MinimizeOptions& o);
void to_json(json& j, const TraceRow& r);

/// Domain descriptor {kind, params, h}. kind is "box" or a graph family
/// (flat, paraboloid, sinusoid, tabulated). Box params: l, d,
/// lateral_cells (optional). Graph params: the family scalars, plus "table"
/// (array of n*n values) for tabulated graphs.
struct DomainSpec {
  std::string kind = "flat";
  json params = json::object();
  double h = 0.125;
};

DomainSpec domain_spec_from_json(const json& j);
json to_json(const DomainSpec& spec);

/// Either a graph or a box domain built from a descriptor.
struct Domain {
  DomainSpec spec;
  std::optional<GraphDomain> graph;
  std::optional<BoxDomain> box;

  const Mesh& mesh() const;
};

GraphFn graph_from_spec(const std::string& kind, const json& params);
Domain build_domain(const DomainSpec& spec);

/// node,x,y,z,u1,u2,u3
void write_field_csv(const std::string& path, const SphereField& u, const Mesh& mesh);

struct FieldTable {
  std::vector<Vec3> points;
  std::vector<Vec3> values;
};
FieldTable read_field_csv(const std::string& path);

/// iter,energy,grad_norm,step,backtracks,tangency,unit
void write_trace_csv(const std::string& path, const MinimizeTrace& trace);

/// node,x,y,z,nu1,nu2,nu3,g1,g2,g3
void write_boundary_csv(const std::string& path, const TangentBoundaryData& data);

/// center_x,center_y,center_z,r,integral,E_r,exponent,residual
void write_decay_csv(const std::string& path, const std::vector<DecayProfile>& profiles);

/// Legacy VTK polydata: node positions as vertices with point data.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::map<std::string, const std::vector<Vec3>*>& vectors,
               const std::map<std::string, const std::vector<double>*>& scalars);

void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

}  // namespace harmap
