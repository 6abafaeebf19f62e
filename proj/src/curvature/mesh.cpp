#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "almlab/curvature.hpp"
#include "almlab/error.hpp"
#include "almlab/numeric.hpp"

namespace almlab {

namespace {

SurfaceMesh unit_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 8) throw Error("icosphere subdivisions must be in [0, 8]");
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  SurfaceMesh m;
  m.vertices = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : m.vertices) v.normalize();
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const int idx = static_cast<int>(m.vertices.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& t : m.triangles) {
      const int a = midpoint(t[0], t[1]), b = midpoint(t[1], t[2]), c = midpoint(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    m.triangles = std::move(next);
  }
  return m;
}

}  // namespace

SurfaceMesh icosphere(double radius, int subdivisions, const Vec3& center) {
  if (!(radius > 0)) throw Error("icosphere radius must be positive");
  SurfaceMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.vertices) v = center + radius * v;
  return m;
}

SurfaceMesh ellipsoid_mesh(double a, double b, double c, int subdivisions) {
  if (!(a > 0 && b > 0 && c > 0)) throw Error("ellipsoid semi-axes must be positive");
  SurfaceMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.vertices) v = Vec3(a * v.x(), b * v.y(), c * v.z());
  return m;
}

SurfaceMesh torus_mesh(double R, double r, int n_major, int n_minor) {
  if (!(r > 0 && R > r)) throw Error("torus needs 0 < r < R");
  if (n_major < 3 || n_minor < 3) throw Error("torus needs at least 3 segments per direction");
  SurfaceMesh m;
  for (int i = 0; i < n_major; ++i) {
    const double u = 2 * kPi * i / n_major;
    for (int j = 0; j < n_minor; ++j) {
      const double v = 2 * kPi * j / n_minor;
      m.vertices.emplace_back((R + r * std::cos(v)) * std::cos(u), (R + r * std::cos(v)) * std::sin(u), r * std::sin(v));
    }
  }
  auto id = [&](int i, int j) { return ((i % n_major) * n_minor) + (j % n_minor); };
  for (int i = 0; i < n_major; ++i)
    for (int j = 0; j < n_minor; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

SurfaceMesh mesh_from_profile(const RadialProfile& p, int subdivisions) {
  if (p.dim() != 3) throw Error("surface meshes need a spatial radial profile");
  SurfaceMesh m = unit_icosphere(subdivisions);
  const Vec3 c = p.center();
  for (auto& v : m.vertices) v = c + p.radius_toward(Vec(v)) * v;
  return m;
}

SurfaceMesh read_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw Error("truncated OFF file '" + path + "'");
    return tokens[pos++];
  };
  if (next() != "OFF") throw Error("missing OFF header in '" + path + "'");
  const long nv = std::stol(next()), nf = std::stol(next());
  next();  // edge count, unused
  if (nv < 0 || nf < 0) throw Error("negative counts in OFF file");
  SurfaceMesh m;
  for (long i = 0; i < nv; ++i) {
    const double x = std::stod(next()), y = std::stod(next()), z = std::stod(next());
    m.vertices.emplace_back(x, y, z);
  }
  for (long f = 0; f < nf; ++f) {
    const int k = std::stoi(next());
    if (k < 3) throw Error("OFF face with fewer than 3 vertices");
    std::vector<int> idx(k);
    for (auto& v : idx) v = std::stoi(next());
    for (int j = 1; j + 1 < k; ++j) m.triangles.push_back({idx[0], idx[j], idx[j + 1]});
  }
  return m;
}

SurfaceMesh read_stl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 84) throw Error("STL file too short: '" + path + "'");
  std::uint32_t count = 0;
  std::memcpy(&count, data.data() + 80, 4);
  if (data.size() != 84 + 50ull * count) {
    if (data.compare(0, 5, "solid") == 0) throw Error("ASCII STL is not supported");
    throw Error("STL size does not match its triangle count");
  }
  SurfaceMesh m;
  std::map<std::array<float, 3>, int> index;
  for (std::uint32_t t = 0; t < count; ++t) {
    const char* rec = data.data() + 84 + 50ull * t;
    std::array<int, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      std::array<float, 3> v{};
      std::memcpy(v.data(), rec + 12 + 12 * k, 12);
      auto [it, fresh] = index.emplace(v, static_cast<int>(m.vertices.size()));
      if (fresh) m.vertices.emplace_back(v[0], v[1], v[2]);
      tri[k] = it->second;
    }
    m.triangles.push_back(tri);
  }
  return m;
}

SurfaceMesh read_mesh(const std::string& path) {
  auto ends_with = [&](const std::string& s) {
    if (path.size() < s.size()) return false;
    std::string tail = path.substr(path.size() - s.size());
    for (auto& ch : tail) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return tail == s;
  };
  if (ends_with(".off")) return read_off(path);
  if (ends_with(".stl")) return read_stl(path);
  throw Error("unsupported mesh format for '" + path + "' (expected .off or .stl)");
}

void write_off(const SurfaceMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out.precision(17);
  out << "OFF\n" << m.vertices.size() << ' ' << m.triangles.size() << " 0\n";
  for (const auto& v : m.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : m.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_stl(const SurfaceMesh& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  char header[80] = {};
  std::memcpy(header, "almlab binary stl", 17);
  out.write(header, 80);
  const auto count = static_cast<std::uint32_t>(m.triangles.size());
  out.write(reinterpret_cast<const char*>(&count), 4);
  for (const auto& t : m.triangles) {
    const Vec3 n = (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]).normalized();
    float buf[12];
    for (int k = 0; k < 3; ++k) buf[k] = static_cast<float>(n[k]);
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < 3; ++k) buf[3 + 3 * v + k] = static_cast<float>(m.vertices[t[v]][k]);
    out.write(reinterpret_cast<const char*>(buf), sizeof(buf));
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
}

void write_vertex_csv(const SurfaceMesh& m, const CurvatureCertificate* cert, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out.precision(12);
  out << "index,x,y,z,H,A2,K,Hf,omega,v\n";
  auto at = [](const std::vector<double>& f, std::size_t i) -> std::string {
    if (i >= f.size()) return "";
    std::ostringstream s;
    s.precision(12);
    s << f[i];
    return s.str();
  };
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const auto& v = m.vertices[i];
    out << i << ',' << v.x() << ',' << v.y() << ',' << v.z() << ',' << at(m.H, i) << ',' << at(m.A2, i) << ','
        << at(m.K, i) << ',' << at(m.Hf, i) << ',' << (cert ? at(cert->omega, i) : "") << ','
        << (cert ? at(cert->v, i) : "") << '\n';
  }
}

}  // namespace almlab
