#include "dgsem/mesh.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace dgsem::mesh {

FaceIndex orient(int code, std::size_t n, std::size_t p, std::size_t q) {
  std::size_t a = (code & 1) ? q : p;
  std::size_t b = (code & 1) ? p : q;
  if (code & 2) a = n - 1 - a;
  if (code & 4) b = n - 1 - b;
  return {a, b};
}

int inverse_orientation(int code) {
  if (!(code & 1)) return code;
  // Undoing the flips first and then the swap exchanges the roles of the two flip bits.
  return 1 | ((code & 2) ? 4 : 0) | ((code & 4) ? 2 : 0);
}

std::optional<int> match_orientation(const std::vector<Vec3>& mine, const std::vector<Vec3>& other, std::size_t n,
                                     const Vec3& offset, double tol) {
  for (int code = 0; code < kNumOrientations; ++code) {
    bool ok = true;
    for (std::size_t q = 0; q < n && ok; ++q) {
      for (std::size_t p = 0; p < n && ok; ++p) {
        const auto [a, b] = orient(code, n, p, q);
        ok = norm(other[a + n * b] - (mine[p + n * q] + offset)) <= tol;
      }
    }
    if (ok) return code;
  }
  return std::nullopt;
}

void MeshTopology::validate() const {
  const auto k = static_cast<int>(elements.size());
  for (int e = 0; e < k; ++e) {
    for (int f = 0; f < geometry::kNumFaces; ++f) {
      const auto& c = elements[e].faces[f];
      if (c.kind == BoundaryKind::dirichlet) continue;
      std::ostringstream where;
      where << "element " << e << " face " << geometry::to_string(geometry::face_from_index(f));
      if (c.neighbor < 0 || c.neighbor >= k) throw TopologyError(where.str() + ": neighbor index out of range");
      if (c.orientation < 0 || c.orientation >= kNumOrientations) {
        throw TopologyError(where.str() + ": orientation code out of range");
      }
      const auto& back = elements[c.neighbor].faces[static_cast<int>(c.neighbor_face)];
      if (back.kind != c.kind || back.neighbor != e || static_cast<int>(back.neighbor_face) != f) {
        throw TopologyError(where.str() + ": face pairing is not involutive");
      }
      if (back.orientation != inverse_orientation(c.orientation)) {
        throw TopologyError(where.str() + ": orientation codes of the two sides are inconsistent");
      }
      if (c.neighbor == e && c.neighbor_face == geometry::face_from_index(f)) {
        throw TopologyError(where.str() + ": face is connected to itself");
      }
    }
  }
}

FaceDefinition element_faces(const ElementRecord& element, const geometry::NodalBasis& basis) {
  if (element.curved_faces) return geometry::resample_faces(*element.curved_faces, basis);
  return geometry::faces_from_corners(element.corners, basis);
}

namespace {

int structured_index(std::array<int, 3> n, int a, int b, int c) { return a + n[0] * (b + n[1] * c); }

// Fills connectivity of a structured n0 x n1 x n2 block with aligned local axes.
void connect_structured(MeshTopology& mesh, std::array<int, 3> n, std::array<bool, 3> periodic) {
  for (int c = 0; c < n[2]; ++c) {
    for (int b = 0; b < n[1]; ++b) {
      for (int a = 0; a < n[0]; ++a) {
        const int e = structured_index(n, a, b, c);
        const std::array<int, 3> pos{a, b, c};
        for (int dir = 0; dir < 3; ++dir) {
          for (int side = 0; side < 2; ++side) {
            auto& conn = mesh.elements[e].faces[2 * dir + side];
            auto nb = pos;
            nb[dir] += side == 0 ? -1 : 1;
            bool wrapped = false;
            if (nb[dir] < 0 || nb[dir] >= n[dir]) {
              if (!periodic[dir]) {
                conn = FaceConnection{};
                continue;
              }
              nb[dir] = (nb[dir] + n[dir]) % n[dir];
              wrapped = true;
            }
            conn.kind = wrapped ? BoundaryKind::periodic : BoundaryKind::interior;
            conn.neighbor = structured_index(n, nb[0], nb[1], nb[2]);
            conn.neighbor_face = geometry::face_from_index(2 * dir + (1 - side));
            conn.orientation = 0;
          }
        }
      }
    }
  }
}

}  // namespace

MeshTopology cartesian_box(std::array<int, 3> n, Vec3 lo, Vec3 hi, std::array<bool, 3> periodic) {
  for (int d = 0; d < 3; ++d) {
    if (n[d] < 1) throw std::invalid_argument("cartesian_box: element counts must be positive");
  }
  MeshTopology mesh;
  mesh.elements.resize(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  for (int c = 0; c < n[2]; ++c) {
    for (int b = 0; b < n[1]; ++b) {
      for (int a = 0; a < n[0]; ++a) {
        auto& el = mesh.elements[structured_index(n, a, b, c)];
        const std::array<int, 3> pos{a, b, c};
        for (int corner = 0; corner < 8; ++corner) {
          // Corner order (-,-,-), (+,-,-), (+,+,-), (-,+,-), then the same at +zeta.
          const int cx = (corner == 1 || corner == 2 || corner == 5 || corner == 6) ? 1 : 0;
          const int cy = (corner == 2 || corner == 3 || corner == 6 || corner == 7) ? 1 : 0;
          const int cz = corner >= 4 ? 1 : 0;
          const std::array<int, 3> off{cx, cy, cz};
          Vec3 p{};
          for (int d = 0; d < 3; ++d) {
            p[d] = lo[d] + (hi[d] - lo[d]) * static_cast<double>(pos[d] + off[d]) / static_cast<double>(n[d]);
          }
          el.corners[corner] = p;
        }
      }
    }
  }
  connect_structured(mesh, n, periodic);
  return mesh;
}

MeshTopology warped_box(int n_per_direction, double amplitude, int face_degree) {
  const int n = n_per_direction;
  MeshTopology mesh = cartesian_box({n, n, n}, {0, 0, 0}, {1, 1, 1}, {true, true, true});
  const geometry::NodalBasis basis(face_degree);
  const double pi = std::numbers::pi;
  for (int c = 0; c < n; ++c) {
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        auto& el = mesh.elements[structured_index({n, n, n}, a, b, c)];
        auto warp = [&](const Vec3& xi) {
          const Vec3 xh{(a + 0.5 * (1.0 + xi.x)) / n, (b + 0.5 * (1.0 + xi.y)) / n, (c + 0.5 * (1.0 + xi.z)) / n};
          const double sx = std::sin(pi * xh.x), sy = std::sin(pi * xh.y), sz = std::sin(pi * xh.z);
          return xh + amplitude * Vec3{sy * sz, sx * sz, sx * sy};
        };
        el.curved_faces = geometry::faces_from_function(warp, basis);
        el.corners = geometry::corners_of(*el.curved_faces);
      }
    }
  }
  return mesh;
}

void connect_by_geometry(MeshTopology& mesh, const geometry::NodalBasis& basis, const std::vector<Vec3>& periods,
                         double tol) {
  const std::size_t n = basis.size();
  const auto k = mesh.elements.size();
  std::vector<FaceDefinition> faces;
  faces.reserve(k);
  for (const auto& el : mesh.elements) faces.push_back(element_faces(el, basis));
  for (auto& el : mesh.elements) {
    for (auto& c : el.faces) c = FaceConnection{};
  }

  std::vector<Vec3> offsets;
  for (const auto& t : periods) {
    offsets.push_back(t);
    offsets.push_back(-t);
  }

  for (std::size_t e = 0; e < k; ++e) {
    for (int f = 0; f < geometry::kNumFaces; ++f) {
      if (mesh.elements[e].faces[f].neighbor >= 0) continue;
      const auto& mine = faces[e].faces[f];
      for (std::size_t e2 = e; e2 < k && mesh.elements[e].faces[f].neighbor < 0; ++e2) {
        for (int f2 = 0; f2 < geometry::kNumFaces; ++f2) {
          if (e2 == e && f2 <= f) continue;
          if (mesh.elements[e2].faces[f2].neighbor >= 0) continue;
          const auto& other = faces[e2].faces[f2];
          BoundaryKind kind = BoundaryKind::interior;
          auto code = match_orientation(mine, other, n, Vec3{}, tol);
          for (std::size_t o = 0; !code && o < offsets.size(); ++o) {
            code = match_orientation(mine, other, n, offsets[o], tol);
            kind = BoundaryKind::periodic;
          }
          if (!code) continue;
          mesh.elements[e].faces[f] = {kind, static_cast<int>(e2), geometry::face_from_index(f2), *code};
          mesh.elements[e2].faces[f2] = {kind, static_cast<int>(e), geometry::face_from_index(f),
                                         inverse_orientation(*code)};
          break;
        }
      }
    }
  }
}

// File format (whitespace separated, '#' starts a comment):
//   dgsem-mesh 1
//   elements <K>
//   face_degree <M>                      (0: every element is straight-sided)
//   element <e>
//   corners  followed by 8 points
//   [curved  followed by 6 x (M+1)^2 points, face by face, p fastest]
//   face <f> neighbor <e2> <f2> <orientation> | face <f> dirichlet | face <f> periodic
//   end
//   periodic <P>
//   <e> <f> <e2> <f2> <orientation>       (each periodic pair once)
void write_mesh(std::ostream& out, const MeshTopology& mesh) {
  int face_degree = 0;
  for (const auto& el : mesh.elements) {
    if (el.curved_faces) face_degree = el.curved_faces->degree;
  }
  out << std::setprecision(17);
  out << "dgsem-mesh 1\n";
  out << "elements " << mesh.elements.size() << "\n";
  out << "face_degree " << face_degree << "\n";
  std::vector<std::array<int, 5>> periodic_pairs;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    out << "element " << e << "\ncorners\n";
    for (const auto& c : el.corners) out << c.x << ' ' << c.y << ' ' << c.z << '\n';
    if (el.curved_faces) {
      if (el.curved_faces->degree != face_degree) {
        throw TopologyError("write_mesh: all curved elements must share one face degree");
      }
      out << "curved\n";
      for (const auto& face : el.curved_faces->faces) {
        for (const auto& p : face) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
      }
    }
    for (int f = 0; f < geometry::kNumFaces; ++f) {
      const auto& c = el.faces[f];
      out << "face " << f << ' ';
      switch (c.kind) {
        case BoundaryKind::interior:
          out << "neighbor " << c.neighbor << ' ' << static_cast<int>(c.neighbor_face) << ' ' << c.orientation;
          break;
        case BoundaryKind::periodic:
          out << "periodic";
          if (std::make_pair(static_cast<int>(e), f) < std::make_pair(c.neighbor, static_cast<int>(c.neighbor_face))) {
            periodic_pairs.push_back({static_cast<int>(e), f, c.neighbor, static_cast<int>(c.neighbor_face),
                                      c.orientation});
          }
          break;
        case BoundaryKind::dirichlet: out << "dirichlet"; break;
      }
      out << '\n';
    }
    out << "end\n";
  }
  out << "periodic " << periodic_pairs.size() << "\n";
  for (const auto& p : periodic_pairs) out << p[0] << ' ' << p[1] << ' ' << p[2] << ' ' << p[3] << ' ' << p[4] << '\n';
}

namespace {

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back(tok);
    }
  }

  std::string next(const char* what) {
    if (pos_ >= tokens_.size()) throw TopologyError(std::string("mesh file: unexpected end of input, expected ") + what);
    return tokens_[pos_++];
  }
  void expect(const std::string& keyword) {
    const auto tok = next(keyword.c_str());
    if (tok != keyword) throw TopologyError("mesh file: expected '" + keyword + "', found '" + tok + "'");
  }
  double number(const char* what) {
    const auto tok = next(what);
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw TopologyError(std::string("mesh file: malformed ") + what + " '" + tok + "'");
    }
  }
  int integer(const char* what) {
    const double v = number(what);
    if (v != std::floor(v)) throw TopologyError(std::string("mesh file: ") + what + " must be an integer");
    return static_cast<int>(v);
  }
  Vec3 point() {
    const double x = number("coordinate");
    const double y = number("coordinate");
    const double z = number("coordinate");
    return {x, y, z};
  }
  const std::string& peek() const {
    static const std::string empty;
    return pos_ < tokens_.size() ? tokens_[pos_] : empty;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

MeshTopology read_mesh(std::istream& in) {
  TokenReader r(in);
  r.expect("dgsem-mesh");
  if (r.integer("format version") != 1) throw TopologyError("mesh file: unsupported format version");
  r.expect("elements");
  const int k = r.integer("element count");
  if (k < 1) throw TopologyError("mesh file: element count must be positive");
  r.expect("face_degree");
  const int face_degree = r.integer("face degree");
  if (face_degree < 0 || face_degree > spectral::kMaxDegree) throw TopologyError("mesh file: face degree out of range");

  MeshTopology mesh;
  mesh.elements.resize(static_cast<std::size_t>(k));
  for (int e = 0; e < k; ++e) {
    r.expect("element");
    if (r.integer("element index") != e) throw TopologyError("mesh file: elements must be listed in order");
    auto& el = mesh.elements[e];
    r.expect("corners");
    for (auto& c : el.corners) c = r.point();
    if (r.peek() == "curved") {
      r.next("curved");
      if (face_degree < 1) throw TopologyError("mesh file: curved element requires face_degree >= 1");
      FaceDefinition def;
      def.degree = face_degree;
      const auto m = static_cast<std::size_t>(face_degree) + 1;
      for (auto& face : def.faces) {
        face.resize(m * m);
        for (auto& p : face) p = r.point();
      }
      el.curved_faces = std::move(def);
    }
    for (int f = 0; f < geometry::kNumFaces; ++f) {
      r.expect("face");
      if (r.integer("face index") != f) throw TopologyError("mesh file: faces must be listed in order 0..5");
      const auto kind = r.next("face kind");
      auto& c = el.faces[f];
      if (kind == "neighbor") {
        c.kind = BoundaryKind::interior;
        c.neighbor = r.integer("neighbor element");
        const int nf = r.integer("neighbor face");
        if (nf < 0 || nf >= geometry::kNumFaces) throw TopologyError("mesh file: neighbor face out of range");
        c.neighbor_face = geometry::face_from_index(nf);
        c.orientation = r.integer("orientation");
      } else if (kind == "periodic") {
        c.kind = BoundaryKind::periodic;
      } else if (kind == "dirichlet") {
        c.kind = BoundaryKind::dirichlet;
      } else {
        throw TopologyError("mesh file: unknown face kind '" + kind + "'");
      }
    }
    r.expect("end");
  }
  r.expect("periodic");
  const int np = r.integer("periodic pair count");
  for (int i = 0; i < np; ++i) {
    const int e1 = r.integer("element");
    const int f1 = r.integer("face");
    const int e2 = r.integer("element");
    const int f2 = r.integer("face");
    const int o = r.integer("orientation");
    if (e1 < 0 || e1 >= k || e2 < 0 || e2 >= k || f1 < 0 || f1 >= 6 || f2 < 0 || f2 >= 6 || o < 0 || o >= 8) {
      throw TopologyError("mesh file: periodic pair out of range");
    }
    auto& c1 = mesh.elements[e1].faces[f1];
    auto& c2 = mesh.elements[e2].faces[f2];
    if (c1.kind != BoundaryKind::periodic || c2.kind != BoundaryKind::periodic) {
      throw TopologyError("mesh file: periodic pair references a face not marked periodic");
    }
    c1 = {BoundaryKind::periodic, e2, geometry::face_from_index(f2), o};
    c2 = {BoundaryKind::periodic, e1, geometry::face_from_index(f1), inverse_orientation(o)};
  }
  for (int e = 0; e < k; ++e) {
    for (int f = 0; f < geometry::kNumFaces; ++f) {
      const auto& c = mesh.elements[e].faces[f];
      if (c.kind == BoundaryKind::periodic && c.neighbor < 0) {
        throw TopologyError("mesh file: periodic face without a listed partner (element " + std::to_string(e) +
                            ", face " + std::to_string(f) + ")");
      }
    }
  }
  mesh.validate();
  return mesh;
}

MeshTopology read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh_file(const std::string& path, const MeshTopology& mesh) {
  std::ofstream out(path);
  if (!out) throw TopologyError("cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
}

}  // namespace dgsem::mesh
