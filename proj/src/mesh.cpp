#include "harmap/mesh.hpp"

#include <algorithm>

namespace harmap {

std::string to_string(NodeTag tag) {
  switch (tag) {
    case NodeTag::Interior: return "interior";
    case NodeTag::Graph: return "graph";
    case NodeTag::Fixed: return "fixed";
  }
  return "unknown";
}

double Mesh::max_spacing() const { return std::max({hx, hy, hz}); }

std::size_t Mesh::count(NodeTag tag) const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), tag));
}

std::vector<NodeIndex> Mesh::nodes_with(NodeTag tag) const {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < size(); ++v)
    if (tags[v] == tag) out.push_back(v);
  return out;
}

double Mesh::total_volume() const {
  double s = 0.0;
  for (double v : volume) s += v;
  return s;
}

double Mesh::graph_area() const {
  double s = 0.0;
  for (const auto& sp : surface)
    if (tags[sp.node] == NodeTag::Graph) s += sp.area;
  return s;
}

}  // namespace harmap
