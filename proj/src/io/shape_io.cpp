#include <json.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "almlab/error.hpp"
#include "almlab/io.hpp"

namespace almlab {

using nlohmann::json;

namespace {

json shape_json(const ShapeSet& s, const std::string& sidecar) {
  json j;
  j["encoding"] = to_string(s.encoding());
  j["dimension"] = s.dimension();
  json p = json::object();
  if (const auto* iv = s.intervals()) {
    p["intervals"] = json::array();
    for (const auto& [lo, hi] : iv->intervals) p["intervals"].push_back({lo, hi});
  } else if (const auto* poly = s.polygon()) {
    p["loops"] = json::array();
    for (const auto& loop : poly->loops) {
      json l = json::array();
      for (const auto& v : loop) l.push_back({v.x(), v.y()});
      p["loops"].push_back(l);
    }
  } else if (const auto* r = s.radial()) {
    p["center"] = std::vector<double>(r->center().data(), r->center().data() + r->center().size());
    p["radii"] = r->radii();
    if (r->dim() == 3) {
      p["n_theta"] = r->n_theta();
      p["n_phi"] = r->n_phi();
    }
  } else if (const auto* g = s.grid()) {
    const int d = g->frame.dim;
    p["cell"] = g->frame.cell;
    p["origin"] = std::vector<double>(g->frame.origin.begin(), g->frame.origin.begin() + d);
    p["size"] = std::vector<int>(g->frame.size.begin(), g->frame.size.begin() + d);
    if (sidecar.empty())
      p["cells"] = g->cells;
    else
      p["sidecar"] = sidecar;
  }
  j["payload"] = p;
  return j;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(std::string("shape file: missing field '") + name + "'");
  return j.at(name);
}

ShapeSet parse_shape(const json& j, const std::filesystem::path& base) {
  try {
    const std::string enc = field(j, "encoding").get<std::string>();
    const int dim = field(j, "dimension").get<int>();
    const json& p = field(j, "payload");
    if (dim < 1 || dim > 3) throw Error("shape file: dimension must be 1, 2 or 3");
    if (enc == "polygon") {
      if (dim == 1) {
        IntervalSet iv;
        for (const auto& pair : field(p, "intervals")) iv.intervals.emplace_back(pair.at(0), pair.at(1));
        return ShapeSet(std::move(iv));
      }
      if (dim != 2) throw Error("shape file: polygon encoding needs dimension 1 or 2");
      PolygonLoops poly;
      for (const auto& loop : field(p, "loops")) {
        std::vector<Vec2> pts;
        for (const auto& v : loop) pts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        poly.loops.push_back(std::move(pts));
      }
      return ShapeSet(std::move(poly));
    }
    if (enc == "radial") {
      const auto c = field(p, "center").get<std::vector<double>>();
      if (static_cast<int>(c.size()) != dim) throw Error("shape file: center dimension mismatch");
      Vec center = Eigen::Map<const Vec>(c.data(), static_cast<Eigen::Index>(c.size()));
      auto radii = field(p, "radii").get<std::vector<double>>();
      if (dim == 2) return ShapeSet(RadialProfile(center, std::move(radii)));
      if (dim == 3)
        return ShapeSet(
            RadialProfile(center, field(p, "n_theta").get<int>(), field(p, "n_phi").get<int>(), std::move(radii)));
      throw Error("shape file: radial encoding needs dimension 2 or 3");
    }
    if (enc == "grid") {
      Grid g;
      g.frame.dim = dim;
      g.frame.cell = field(p, "cell").get<double>();
      if (!(g.frame.cell > 0)) throw Error("shape file: grid cell must be positive");
      const auto origin = field(p, "origin").get<std::vector<double>>();
      const auto size = field(p, "size").get<std::vector<int>>();
      if (static_cast<int>(origin.size()) != dim || static_cast<int>(size.size()) != dim)
        throw Error("shape file: grid origin/size dimension mismatch");
      for (int k = 0; k < dim; ++k) {
        if (size[k] < 1) throw Error("shape file: grid size must be positive");
        g.frame.origin[k] = origin[k];
        g.frame.size[k] = size[k];
      }
      if (p.contains("sidecar")) {
        std::filesystem::path side = p.at("sidecar").get<std::string>();
        if (side.is_relative()) side = base / side;
        g.cells = read_grid_sidecar(side.string(), g.frame);
      } else {
        g.cells = field(p, "cells").get<std::vector<std::uint8_t>>();
      }
      if (g.cells.size() != g.frame.cell_count()) throw Error("shape file: grid cell count does not match size");
      return ShapeSet(std::move(g));
    }
    throw Error("shape file: unknown encoding '" + enc + "'");
  } catch (const json::exception& e) {
    throw Error(std::string("shape file: ") + e.what());
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const std::string& data, std::size_t at) {
  const auto* b = reinterpret_cast<const unsigned char*>(data.data() + at);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

std::string shape_to_json(const ShapeSet& s) { return shape_json(s, "").dump(); }

ShapeSet shape_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("shape file: ") + e.what());
  }
  return parse_shape(j, std::filesystem::current_path());
}

ShapeSet read_shape(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open shape file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("shape file '" + path + "': " + e.what());
  }
  return parse_shape(j, std::filesystem::path(path).parent_path());
}

void write_shape(const ShapeSet& s, const std::string& path, std::size_t inline_limit) {
  std::string sidecar;
  if (const auto* g = s.grid(); g && g->cells.size() > inline_limit) {
    const std::filesystem::path p(path);
    sidecar = p.stem().string() + ".grd";
    write_grid_sidecar(*g, (p.parent_path() / sidecar).string());
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write shape file '" + path + "'");
  out << shape_json(s, sidecar).dump(1) << '\n';
}

void write_grid_sidecar(const Grid& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write grid sidecar '" + path + "'");
  out.write("GRD1", 4);
  put_u32(out, static_cast<std::uint32_t>(g.frame.dim));
  for (int k = 0; k < g.frame.dim; ++k) put_u32(out, static_cast<std::uint32_t>(g.frame.size[k]));
  out.write(reinterpret_cast<const char*>(g.cells.data()), static_cast<std::streamsize>(g.cells.size()));
}

std::vector<std::uint8_t> read_grid_sidecar(const std::string& path, const GridFrame& frame) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open grid sidecar '" + path + "'");
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 8 || data.compare(0, 4, "GRD1") != 0) throw Error("grid sidecar: bad magic in '" + path + "'");
  const std::uint32_t ndim = get_u32(data, 4);
  if (static_cast<int>(ndim) != frame.dim) throw Error("grid sidecar: dimension mismatch");
  const std::size_t header = 8 + 4 * static_cast<std::size_t>(ndim);
  if (data.size() < header) throw Error("grid sidecar: truncated header");
  for (std::uint32_t k = 0; k < ndim; ++k)
    if (static_cast<int>(get_u32(data, 8 + 4 * k)) != frame.size[k]) throw Error("grid sidecar: size mismatch");
  if (data.size() != header + frame.cell_count()) throw Error("grid sidecar: cell count mismatch");
  std::vector<std::uint8_t> cells(data.begin() + static_cast<std::ptrdiff_t>(header), data.end());
  for (auto c : cells)
    if (c > 1) throw Error("grid sidecar: cells must be 0 or 1");
  return cells;
}

namespace {

std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

double parse_number(const std::string& tok, const std::string& spec) {
  std::string t = tok;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw Error("bad number '" + tok + "' in '" + spec + "'");
  return v;
}

std::vector<std::vector<double>> parse_groups(const std::string& body, const std::string& spec) {
  std::vector<std::vector<double>> out;
  std::stringstream groups(body);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<double> vals;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) vals.push_back(parse_number(item, spec));
    out.push_back(std::move(vals));
  }
  return out;
}

std::vector<double> parse_list(const std::string& body, const std::string& spec) {
  const auto groups = parse_groups(body, spec);
  if (groups.size() > 1) throw Error("unexpected ';' in '" + spec + "'");
  return groups.empty() ? std::vector<double>{} : groups.front();
}

}  // namespace

SurfaceTension tension_from_spec(const std::string& spec, int dim) {
  const auto [name, body] = split_spec(spec);
  if (name == "isotropic") {
    if (!body.empty()) throw Error("isotropic tension takes no parameters");
    return SurfaceTension::isotropic();
  }
  if (name == "p-norm") {
    const auto v = parse_list(body, spec);
    if (v.size() != 1) throw Error("p-norm tension needs one parameter p");
    return SurfaceTension::p_norm(v[0]);
  }
  if (name == "axial") {
    const auto v = parse_list(body, spec);
    if (v.size() != 1) throw Error("axial tension needs one parameter c");
    return SurfaceTension::axial(v[0]);
  }
  if (name == "crystalline") {
    std::vector<Vec> normals;
    std::vector<double> values;
    for (const auto& g : parse_groups(body, spec)) {
      if (static_cast<int>(g.size()) != dim + 1)
        throw Error("crystalline facet needs " + std::to_string(dim) + " normal components and a value");
      normals.push_back(Eigen::Map<const Vec>(g.data(), dim));
      values.push_back(g.back());
    }
    return SurfaceTension::crystalline(std::move(normals), std::move(values));
  }
  throw Error("unknown surface tension '" + name + "'");
}

RadialPotential potential_from_spec(const std::string& spec) {
  const auto [name, body] = split_spec(spec);
  if ((name == "zero" || name == "linear" || name == "quadratic") && !body.empty())
    throw Error(name + " potential takes no parameters");
  if (name == "zero") return RadialPotential::zero();
  if (name == "linear") return RadialPotential::linear();
  if (name == "quadratic") return RadialPotential::quadratic();
  if (name == "power") {
    const auto v = parse_list(body, spec);
    if (v.empty() || v.size() > 2) throw Error("power potential needs alpha and an optional coefficient");
    return RadialPotential::power(v[0], v.size() == 2 ? v[1] : 1.0);
  }
  if (name == "table") {
    std::vector<double> t, h;
    for (const auto& g : parse_groups(body, spec)) {
      if (g.size() != 2) throw Error("table potential needs t,h pairs separated by ';'");
      t.push_back(g[0]);
      h.push_back(g[1]);
    }
    return RadialPotential::table(std::move(t), std::move(h));
  }
  throw Error("unknown potential '" + name + "'");
}

}  // namespace almlab
