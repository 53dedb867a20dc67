#include "biotcr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

namespace biotcr {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Bottom: return "bottom";
    case BoundaryTag::Right: return "right";
    case BoundaryTag::Top: return "top";
    case BoundaryTag::Left: return "left";
    case BoundaryTag::Interior: return "interior";
  }
  return "unknown";
}

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

BoundaryTag classify_boundary(const Point& outward) {
  if (std::abs(outward.y()) >= std::abs(outward.x())) {
    return outward.y() < 0.0 ? BoundaryTag::Bottom : BoundaryTag::Top;
  }
  return outward.x() > 0.0 ? BoundaryTag::Right : BoundaryTag::Left;
}

}  // namespace

Point circumcenter(const Point& a, const Point& b, const Point& c) {
  const Point ab = b - a;
  const Point ac = c - a;
  const double det = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
  const double scale = std::max(ab.squaredNorm(), ac.squaredNorm());
  if (std::abs(det) <= 1e-14 * scale) {
    throw std::invalid_argument("circumcenter: collinear vertices");
  }
  const double ab2 = ab.squaredNorm();
  const double ac2 = ac.squaredNorm();
  const Point offset((ac.y() * ab2 - ab.y() * ac2) / det, (ab.x() * ac2 - ac.x() * ab2) / det);
  return a + offset;
}

Point circumcenter(std::size_t cell, const Mesh& mesh) {
  const auto& v = mesh.cell(cell);
  return circumcenter(mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2]));
}

Mesh Mesh::from_triangles(std::vector<Point> vertices,
                          std::vector<std::array<std::size_t, 3>> cells) {
  Mesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);

  const std::size_t nc = mesh.cells_.size();
  mesh.areas_.resize(nc);
  mesh.circumcenters_.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    auto& tri = mesh.cells_[c];
    for (auto v : tri) {
      if (v >= mesh.vertices_.size()) throw std::invalid_argument("cell references missing vertex");
    }
    double area = signed_area(mesh.vertices_[tri[0]], mesh.vertices_[tri[1]], mesh.vertices_[tri[2]]);
    if (area < 0.0) {
      std::swap(tri[1], tri[2]);
      area = -area;
    }
    const double diam2 = std::max({(mesh.vertices_[tri[1]] - mesh.vertices_[tri[0]]).squaredNorm(),
                                   (mesh.vertices_[tri[2]] - mesh.vertices_[tri[0]]).squaredNorm(),
                                   (mesh.vertices_[tri[2]] - mesh.vertices_[tri[1]]).squaredNorm()});
    if (area <= 1e-14 * diam2) throw std::invalid_argument("degenerate triangle " + std::to_string(c));
    mesh.areas_[c] = area;
    mesh.circumcenters_[c] =
        biotcr::circumcenter(mesh.vertices_[tri[0]], mesh.vertices_[tri[1]], mesh.vertices_[tri[2]]);
  }

  // Faces are numbered in order of first appearance while sweeping cells.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  std::vector<std::vector<std::size_t>> face_cells;
  mesh.cell_to_faces_.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& tri = mesh.cells_[c];
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = tri[(k + 1) % 3];
      const std::size_t b = tri[(k + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace({key.first, key.second}, face_cells.size());
      if (inserted) {
        face_cells.emplace_back();
        Face f;
        f.endpoints = {a, b};
        mesh.faces_.push_back(f);
      }
      face_cells[it->second].push_back(c);
      if (face_cells[it->second].size() > 2) throw std::invalid_argument("non-manifold edge");
      mesh.cell_to_faces_[c][k].face = it->second;
    }
  }

  mesh.boundary_tags_.assign(mesh.faces_.size(), BoundaryTag::Interior);
  for (std::size_t f = 0; f < mesh.faces_.size(); ++f) {
    Face& face = mesh.faces_[f];
    const auto& adj = face_cells[f];
    face.t_plus = adj[0];  // lower cell index, by construction of the sweep
    if (adj.size() == 2) face.t_minus = adj[1];

    const Point& pa = mesh.vertices_[face.endpoints[0]];
    const Point& pb = mesh.vertices_[face.endpoints[1]];
    face.length = (pb - pa).norm();
    face.barycenter = 0.5 * (pa + pb);
    const int k_plus = mesh.local_index(face.t_plus, f);
    face.normal = mesh.outward_normal(face.t_plus, k_plus);

    face.d_plus = (face.barycenter - mesh.circumcenters_[face.t_plus]).dot(face.normal);
    face.d_minus =
        face.t_minus ? (mesh.circumcenters_[*face.t_minus] - face.barycenter).dot(face.normal) : 0.0;
    face.d_e = face.d_plus + face.d_minus;
    face.omega = face.length * face.d_e / 2.0;

    if (face.is_boundary()) mesh.boundary_tags_[f] = classify_boundary(face.normal);
  }

  for (std::size_t c = 0; c < nc; ++c) {
    for (auto& cf : mesh.cell_to_faces_[c]) cf.sign = (mesh.faces_[cf.face].t_plus == c) ? 1 : -1;
  }

  if (mesh.has_negative_weights()) {
    std::clog << "biotcr: warning: mesh has negative lumping weights "
                 "(circumcenter outside its cell)\n";
  }
  return mesh;
}

Point Mesh::centroid(std::size_t c) const {
  const auto& t = cells_[c];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

Point Mesh::outward_normal(std::size_t c, int local_face) const {
  const auto& t = cells_[c];
  const Point edge = vertices_[t[(local_face + 2) % 3]] - vertices_[t[(local_face + 1) % 3]];
  return Point(edge.y(), -edge.x()).normalized();
}

int Mesh::local_index(std::size_t c, std::size_t face) const {
  const auto& cf = cell_to_faces_[c];
  for (int k = 0; k < 3; ++k) {
    if (cf[k].face == face) return k;
  }
  return -1;
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

bool Mesh::has_negative_weights() const {
  return std::any_of(faces_.begin(), faces_.end(),
                     [](const Face& f) { return f.omega < -1e-14 * f.length * f.length; });
}

Mesh build_structured_mesh(std::size_t nx, std::size_t ny, const Rectangle& domain,
                           DiagonalRule diagonal) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("build_structured_mesh: nx and ny must be >= 1");
  if (!(domain.x_max > domain.x_min) || !(domain.y_max > domain.y_min)) {
    throw std::invalid_argument("build_structured_mesh: degenerate rectangle");
  }

  const double hx = (domain.x_max - domain.x_min) / static_cast<double>(nx);
  const double hy = (domain.y_max - domain.y_min) / static_cast<double>(ny);
  std::vector<Point> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    for (std::size_t i = 0; i <= nx; ++i) {
      // Snap the last row/column onto the rectangle to keep the area exact.
      const double x = (i == nx) ? domain.x_max : domain.x_min + static_cast<double>(i) * hx;
      const double y = (j == ny) ? domain.y_max : domain.y_min + static_cast<double>(j) * hy;
      vertices.emplace_back(x, y);
    }
  }

  auto vid = [nx](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };
  std::vector<std::array<std::size_t, 3>> cells;
  cells.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t sw = vid(i, j), se = vid(i + 1, j), ne = vid(i + 1, j + 1), nw = vid(i, j + 1);
      const bool flip = diagonal == DiagonalRule::Alternating && ((i + j) % 2 == 1);
      if (!flip) {
        cells.push_back({sw, se, ne});
        cells.push_back({sw, ne, nw});
      } else {
        cells.push_back({sw, se, nw});
        cells.push_back({se, ne, nw});
      }
    }
  }
  return Mesh::from_triangles(std::move(vertices), std::move(cells));
}

double lumping_weight(std::size_t face, const Mesh& mesh) { return mesh.face(face).omega; }

std::vector<std::size_t> degenerate_faces(const Mesh& mesh, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (!face.is_boundary() && std::abs(face.d_e) < tol * face.length) out.push_back(f);
  }
  return out;
}

}  // namespace biotcr
