#pragma once

#include <map>
#include <string>
#include <vector>

#include "specseq/abelian.hpp"

namespace specseq {

using Simplex = std::vector<int>;

/// Finite abstract simplicial complex. Simplices are strictly increasing
/// vertex tuples, listed per dimension in lexicographic order; orientation
/// is the sorted vertex order.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Closes `maximal` under faces. Every vertex 0..vertex_count-1 becomes a
  /// 0-simplex. Throws InvalidInput for out-of-range or repeated vertices.
  static SimplicialComplex from_maximal(int vertex_count, const std::vector<Simplex>& maximal);
  /// Takes the full simplex list; throws InvalidInput unless it is closed
  /// under faces and duplicate-free.
  static SimplicialComplex from_simplices(int vertex_count, std::vector<std::vector<Simplex>> by_dimension);

  int vertex_count() const { return vertex_count_; }
  /// -1 for the empty complex.
  int dimension() const { return static_cast<int>(simplices_.size()) - 1; }
  const std::vector<Simplex>& simplices(int p) const;
  int count(int p) const { return static_cast<int>(simplices(p).size()); }
  /// Position of s among the p-simplices, or -1.
  int index_of(const Simplex& s) const;
  bool contains(const Simplex& s) const { return index_of(s) >= 0; }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.vertex_count_ == b.vertex_count_ && a.simplices_ == b.simplices_;
  }

 private:
  void build_index();

  int vertex_count_ = 0;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::map<Simplex, int>> index_;
};

/// Vertex map carrying every simplex onto a simplex.
class SimplicialMap {
 public:
  SimplicialMap() = default;
  /// Throws InvalidInput if some image is not a simplex of the target.
  SimplicialMap(SimplicialComplex source, SimplicialComplex target, std::vector<int> vertex_map);

  static SimplicialMap identity(const SimplicialComplex& x);
  /// Collapse onto vertex 0 of a one-point complex.
  static SimplicialMap to_point(const SimplicialComplex& x);

  const SimplicialComplex& source() const { return source_; }
  const SimplicialComplex& target() const { return target_; }
  const std::vector<int>& vertex_map() const { return vertex_map_; }

  /// Pullback on integral p-cochains: source p-simplices x target p-simplices.
  /// Degenerate images contribute zero.
  IntMatrix cochain_matrix(int p) const;

 private:
  SimplicialComplex source_;
  SimplicialComplex target_;
  std::vector<int> vertex_map_;
};

/// g o f; throws ShapeMismatch unless f.target() == g.source().
SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f);

/// Rows: (p-1)-simplices, columns: p-simplices, entry (-1)^i when deleting
/// vertex i of the column simplex gives the row simplex.
IntMatrix boundary_matrix(const SimplicialComplex& x, int p);
/// delta^p : C^p -> C^{p+1}, i.e. the transpose of boundary_matrix(x, p + 1).
IntMatrix coboundary_matrix(const SimplicialComplex& x, int p);

SimplicialComplex skeleton(const SimplicialComplex& x, int p);

/// Integral simplicial homology H_p(X; Z).
FGModule integral_homology(const SimplicialComplex& x, int p);

/// Unreduced H^p(X; G) over G.ring(), assembled by universal coefficients:
/// Hom(H_p, G) + Ext(H_{p-1}, G).
FGModule cohomology(const SimplicialComplex& x, const FGModule& g, int p);

/// Cochains C^p(X; G) = G^{#p-simplices}; injections[i] places the copy of G
/// sitting on p-simplex i.
DirectSum cochain_module(const SimplicialComplex& x, const FGModule& g, int p);
/// delta^p tensor G as a homomorphism C^p(X; G) -> C^{p+1}(X; G).
ModuleHom coboundary(const SimplicialComplex& x, const FGModule& g, int p);
/// Integer matrix `m` (rows x cols simplices) tensored with id_G and placed
/// on the canonical generators of the two cochain modules.
IntMatrix tensor_with_identity(const IntMatrix& m, const DirectSum& rows, const DirectSum& cols, const FGModule& g);
/// Coefficient map: id on simplices tensor phi, C^p(X; G) -> C^p(X; G').
IntMatrix cochain_coefficient_map(const SimplicialComplex& x, const ModuleHom& phi, int p);

/// H^p(X; G) computed directly as ker delta^p / im delta^{p-1}, with the
/// cocycle data needed to push maps through.
Subquotient cochain_cohomology(const SimplicialComplex& x, const FGModule& g, int p);

/// f^* : H^p(target; G) -> H^p(source; G).
ModuleHom induced_cohomology_map(const SimplicialMap& f, const FGModule& g, int p);

namespace fixtures {

SimplicialComplex point();
SimplicialComplex two_points();
/// Boundary of a triangle.
SimplicialComplex circle();
/// Hexagonal circle; `double_cover()` wraps it twice around `circle()`.
SimplicialComplex hexagon();
/// Boundary of the 3-simplex.
SimplicialComplex sphere();
/// Seven-vertex torus.
SimplicialComplex torus();
/// Six-vertex projective plane.
SimplicialComplex rp2();
SimplicialMap double_cover();

/// Looks up one of: point, two-points, circle, hexagon, sphere, torus, rp2.
SimplicialComplex by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace fixtures

}  // namespace specseq
