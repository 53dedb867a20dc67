#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace biotcr {

using Point = Eigen::Vector2d;

/// Which side of the rectangular domain a boundary face lies on.
enum class BoundaryTag { Bottom, Right, Top, Left, Interior };

std::string_view to_string(BoundaryTag tag);

enum class DiagonalRule { SouthWestToNorthEast, Alternating };

struct Rectangle {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  double area() const { return (x_max - x_min) * (y_max - y_min); }
};

/// Signed orientation of a face relative to one of its cells.
struct CellFace {
  std::size_t face = 0;
  int sign = 1;  // n_e . n_{e,T}
};

struct Face {
  std::array<std::size_t, 2> endpoints{};
  Point normal = Point::Zero();  // fixed unit normal n_e, outward from t_plus
  double length = 0.0;
  std::size_t t_plus = 0;
  std::optional<std::size_t> t_minus;
  Point barycenter = Point::Zero();
  // Signed distances along n_e: circumcenter(T+) -> face line and
  // face line -> circumcenter(T-). d_e = d_plus + d_minus.
  double d_plus = 0.0;
  double d_minus = 0.0;
  double d_e = 0.0;
  double omega = 0.0;  // |e| d_e / 2

  bool is_boundary() const { return !t_minus.has_value(); }
};

/// Conforming triangulation of a planar polygon with face topology.
///
/// Cells are stored counterclockwise. Local face k of a cell is the edge
/// opposite its k-th vertex. A constructed mesh is immutable.
class Mesh {
 public:
  /// Builds topology and geometry from raw triangles. Clockwise triangles are
  /// reoriented; degenerate triangles throw std::invalid_argument. Boundary
  /// faces are tagged by the dominant direction of their outward normal.
  static Mesh from_triangles(std::vector<Point> vertices,
                             std::vector<std::array<std::size_t, 3>> cells);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& cells() const { return cells_; }
  const std::vector<Face>& faces() const { return faces_; }

  const Point& vertex(std::size_t v) const { return vertices_[v]; }
  const std::array<std::size_t, 3>& cell(std::size_t c) const { return cells_[c]; }
  const Face& face(std::size_t f) const { return faces_[f]; }
  const std::array<CellFace, 3>& cell_faces(std::size_t c) const { return cell_to_faces_[c]; }
  BoundaryTag boundary_tag(std::size_t f) const { return boundary_tags_[f]; }
  const std::vector<BoundaryTag>& boundary_tags() const { return boundary_tags_; }

  double cell_area(std::size_t c) const { return areas_[c]; }
  const Point& circumcenter(std::size_t c) const { return circumcenters_[c]; }
  Point centroid(std::size_t c) const;

  /// Unit normal of local face k pointing out of cell c.
  Point outward_normal(std::size_t c, int local_face) const;

  /// Local index (0..2) of a global face within cell c, or -1.
  int local_index(std::size_t c, std::size_t face) const;

  double total_area() const;
  bool has_negative_weights() const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<std::size_t, 3>> cells_;
  std::vector<Face> faces_;
  std::vector<std::array<CellFace, 3>> cell_to_faces_;
  std::vector<BoundaryTag> boundary_tags_;
  std::vector<double> areas_;
  std::vector<Point> circumcenters_;
};

/// Splits an nx-by-ny grid of rectangles into 2*nx*ny triangles.
Mesh build_structured_mesh(std::size_t nx, std::size_t ny, const Rectangle& domain = {},
                           DiagonalRule diagonal = DiagonalRule::SouthWestToNorthEast);

/// Point equidistant from the three vertices of a triangle; throws on
/// collinear input.
Point circumcenter(const Point& a, const Point& b, const Point& c);
Point circumcenter(std::size_t cell, const Mesh& mesh);

double lumping_weight(std::size_t face, const Mesh& mesh);

/// Interior faces with |d_e| < tol * |e|, ascending.
std::vector<std::size_t> degenerate_faces(const Mesh& mesh, double tol = 1e-10);

}  // namespace biotcr
