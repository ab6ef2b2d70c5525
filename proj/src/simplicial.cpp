#include "specseq/simplicial.hpp"

#include <algorithm>
#include <set>

#include "specseq/smith.hpp"

namespace specseq {

namespace {

void check_simplex(const Simplex& s, int vertex_count) {
  if (s.empty()) throw Error(ErrorCode::InvalidInput, "empty simplex");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= vertex_count)
      throw Error(ErrorCode::InvalidInput, "vertex " + std::to_string(s[i]) + " out of range");
    if (i > 0 && s[i] <= s[i - 1]) throw Error(ErrorCode::InvalidInput, "simplex vertices repeat or are unsorted");
  }
}

Simplex drop_vertex(const Simplex& s, std::size_t i) {
  Simplex face;
  face.reserve(s.size() - 1);
  for (std::size_t k = 0; k < s.size(); ++k)
    if (k != i) face.push_back(s[k]);
  return face;
}

}  // namespace

SimplicialComplex SimplicialComplex::from_maximal(int vertex_count, const std::vector<Simplex>& maximal) {
  if (vertex_count < 0) throw Error(ErrorCode::InvalidInput, "negative vertex count");
  std::vector<std::set<Simplex>> faces;
  auto add = [&](const Simplex& s) {
    const std::size_t p = s.size() - 1;
    if (faces.size() <= p) faces.resize(p + 1);
    faces[p].insert(s);
  };
  for (int v = 0; v < vertex_count; ++v) add({v});
  for (Simplex s : maximal) {
    std::sort(s.begin(), s.end());
    check_simplex(s, vertex_count);
    if (s.size() > 24) throw Error(ErrorCode::InvalidInput, "simplex dimension too large");
    const unsigned long subsets = 1ul << s.size();
    for (unsigned long mask = 1; mask < subsets; ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask & (1ul << i)) face.push_back(s[i]);
      add(face);
    }
  }
  SimplicialComplex x;
  x.vertex_count_ = vertex_count;
  for (auto& level : faces) x.simplices_.emplace_back(level.begin(), level.end());
  x.build_index();
  return x;
}

SimplicialComplex SimplicialComplex::from_simplices(int vertex_count, std::vector<std::vector<Simplex>> by_dimension) {
  if (vertex_count < 0) throw Error(ErrorCode::InvalidInput, "negative vertex count");
  while (!by_dimension.empty() && by_dimension.back().empty()) by_dimension.pop_back();
  SimplicialComplex x;
  x.vertex_count_ = vertex_count;
  for (std::size_t p = 0; p < by_dimension.size(); ++p) {
    auto level = by_dimension[p];
    for (const auto& s : level) {
      check_simplex(s, vertex_count);
      if (s.size() != p + 1) throw Error(ErrorCode::InvalidInput, "simplex listed in the wrong dimension");
    }
    std::sort(level.begin(), level.end());
    if (std::adjacent_find(level.begin(), level.end()) != level.end())
      throw Error(ErrorCode::InvalidInput, "duplicate simplex");
    x.simplices_.push_back(std::move(level));
  }
  x.build_index();
  for (int p = 1; p <= x.dimension(); ++p)
    for (const auto& s : x.simplices(p))
      for (std::size_t i = 0; i < s.size(); ++i)
        if (!x.contains(drop_vertex(s, i))) throw Error(ErrorCode::InvalidInput, "complex is not closed under faces");
  return x;
}

void SimplicialComplex::build_index() {
  index_.assign(simplices_.size(), {});
  for (std::size_t p = 0; p < simplices_.size(); ++p)
    for (std::size_t i = 0; i < simplices_[p].size(); ++i) index_[p][simplices_[p][i]] = static_cast<int>(i);
}

const std::vector<Simplex>& SimplicialComplex::simplices(int p) const {
  static const std::vector<Simplex> empty;
  if (p < 0 || p > dimension()) return empty;
  return simplices_[static_cast<std::size_t>(p)];
}

int SimplicialComplex::index_of(const Simplex& s) const {
  const int p = static_cast<int>(s.size()) - 1;
  if (p < 0 || p > dimension()) return -1;
  const auto& idx = index_[static_cast<std::size_t>(p)];
  auto it = idx.find(s);
  return it == idx.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------

SimplicialMap::SimplicialMap(SimplicialComplex source, SimplicialComplex target, std::vector<int> vertex_map)
    : source_(std::move(source)), target_(std::move(target)), vertex_map_(std::move(vertex_map)) {
  if (static_cast<int>(vertex_map_.size()) != source_.vertex_count())
    throw Error(ErrorCode::InvalidInput, "vertex map has wrong length");
  for (int v : vertex_map_)
    if (v < 0 || v >= target_.vertex_count()) throw Error(ErrorCode::InvalidInput, "vertex image out of range");
  for (int p = 0; p <= source_.dimension(); ++p) {
    for (const auto& s : source_.simplices(p)) {
      Simplex img;
      for (int v : s) img.push_back(vertex_map_[static_cast<std::size_t>(v)]);
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      if (!target_.contains(img)) throw Error(ErrorCode::InvalidInput, "image of a simplex is not a simplex");
    }
  }
}

SimplicialMap SimplicialMap::identity(const SimplicialComplex& x) {
  std::vector<int> v(static_cast<std::size_t>(x.vertex_count()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
  return SimplicialMap(x, x, std::move(v));
}

SimplicialMap SimplicialMap::to_point(const SimplicialComplex& x) {
  return SimplicialMap(x, fixtures::point(), std::vector<int>(static_cast<std::size_t>(x.vertex_count()), 0));
}

IntMatrix SimplicialMap::cochain_matrix(int p) const {
  IntMatrix m = IntMatrix::Zero(source_.count(p), target_.count(p));
  const auto& simplices = source_.simplices(p);
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    Simplex img;
    for (int v : simplices[i]) img.push_back(vertex_map_[static_cast<std::size_t>(v)]);
    // sign of the sorting permutation
    int inversions = 0;
    bool degenerate = false;
    for (std::size_t a = 0; a < img.size(); ++a)
      for (std::size_t b = a + 1; b < img.size(); ++b) {
        if (img[a] == img[b]) degenerate = true;
        if (img[a] > img[b]) ++inversions;
      }
    if (degenerate) continue;
    std::sort(img.begin(), img.end());
    m(static_cast<Index>(i), target_.index_of(img)) = inversions % 2 ? -1 : 1;
  }
  return m;
}

SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f) {
  if (!(f.target() == g.source())) throw Error(ErrorCode::ShapeMismatch, "simplicial maps do not compose");
  std::vector<int> v;
  for (int x : f.vertex_map()) v.push_back(g.vertex_map()[static_cast<std::size_t>(x)]);
  return SimplicialMap(f.source(), g.target(), std::move(v));
}

// ---------------------------------------------------------------------------

IntMatrix boundary_matrix(const SimplicialComplex& x, int p) {
  IntMatrix m = IntMatrix::Zero(p >= 1 ? x.count(p - 1) : 0, x.count(p));
  if (p < 1) return m;
  const auto& cols = x.simplices(p);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i)
      m(x.index_of(drop_vertex(cols[j], i)), static_cast<Index>(j)) = i % 2 ? -1 : 1;
  return m;
}

IntMatrix coboundary_matrix(const SimplicialComplex& x, int p) { return boundary_matrix(x, p + 1).transpose(); }

SimplicialComplex skeleton(const SimplicialComplex& x, int p) {
  std::vector<std::vector<Simplex>> levels;
  for (int k = 0; k <= std::min(p, x.dimension()); ++k) levels.push_back(x.simplices(k));
  return SimplicialComplex::from_simplices(x.vertex_count(), std::move(levels));
}

FGModule integral_homology(const SimplicialComplex& x, int p) {
  if (p < 0 || p > x.dimension()) return FGModule::zero();
  const Index rank_in = p >= 1 ? integer_rank(boundary_matrix(x, p)) : 0;
  auto next = smith_normal_form(boundary_matrix(x, p + 1), SmithTransforms::None);
  std::vector<Integer> orders;
  for (const auto& d : next.invariant_factors())
    if (d > 1) orders.push_back(d);
  return FGModule::from_orders(LocalizationRing::integers(), static_cast<int>(x.count(p) - rank_in - next.rank),
                               orders);
}

FGModule cohomology(const SimplicialComplex& x, const FGModule& g, int p) {
  if (p < 0 || p > x.dimension()) return FGModule::zero(g.ring());
  const FGModule gz = integral_form(g);
  FGModule sum = direct_sum({hom_group(integral_homology(x, p), gz), ext_group(integral_homology(x, p - 1), gz)});
  return tensor_localize(sum, g.ring());
}

DirectSum cochain_module(const SimplicialComplex& x, const FGModule& g, int p) {
  DirectSum ds = direct_power(g, x.count(p));
  if (x.count(p) == 0) ds.module = FGModule::zero(g.ring());
  return ds;
}

IntMatrix tensor_with_identity(const IntMatrix& m, const DirectSum& rows, const DirectSum& cols, const FGModule& g) {
  IntMatrix out = IntMatrix::Zero(rows.module.generator_count(), cols.module.generator_count());
  const int gens = g.generator_count();
  for (Index a = 0; a < m.rows(); ++a)
    for (Index b = 0; b < m.cols(); ++b) {
      if (m(a, b) == 0) continue;
      for (int j = 0; j < gens; ++j)
        out(rows.injections[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)],
            cols.injections[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)]) = m(a, b);
    }
  return out;
}

ModuleHom coboundary(const SimplicialComplex& x, const FGModule& g, int p) {
  DirectSum from = cochain_module(x, g, p);
  DirectSum to = cochain_module(x, g, p + 1);
  IntMatrix delta = p >= 0 ? coboundary_matrix(x, p) : IntMatrix::Zero(x.count(0), 0);
  return ModuleHom(from.module, to.module, tensor_with_identity(delta, to, from, g));
}

IntMatrix cochain_coefficient_map(const SimplicialComplex& x, const ModuleHom& phi, int p) {
  DirectSum from = cochain_module(x, phi.domain(), p);
  DirectSum to = cochain_module(x, phi.codomain(), p);
  IntMatrix out = IntMatrix::Zero(to.module.generator_count(), from.module.generator_count());
  for (int s = 0; s < x.count(p); ++s)
    for (Index a = 0; a < phi.matrix().rows(); ++a)
      for (Index b = 0; b < phi.matrix().cols(); ++b)
        out(to.injections[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)],
            from.injections[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)]) = phi.matrix()(a, b);
  return out;
}

Subquotient cochain_cohomology(const SimplicialComplex& x, const FGModule& g, int p) {
  return subquotient(coboundary(x, g, p - 1), coboundary(x, g, p));
}

ModuleHom induced_cohomology_map(const SimplicialMap& f, const FGModule& g, int p) {
  Subquotient on_target = cochain_cohomology(f.target(), g, p);
  Subquotient on_source = cochain_cohomology(f.source(), g, p);
  IntMatrix pullback = tensor_with_identity(f.cochain_matrix(p), cochain_module(f.source(), g, p),
                                            cochain_module(f.target(), g, p), g);
  return induced_map(on_target, on_source, pullback);
}

// ---------------------------------------------------------------------------

namespace fixtures {

SimplicialComplex point() { return SimplicialComplex::from_maximal(1, {{0}}); }

SimplicialComplex two_points() { return SimplicialComplex::from_maximal(2, {{0}, {1}}); }

SimplicialComplex circle() { return SimplicialComplex::from_maximal(3, {{0, 1}, {1, 2}, {0, 2}}); }

SimplicialComplex hexagon() {
  std::vector<Simplex> edges;
  for (int i = 0; i < 6; ++i) edges.push_back({i, (i + 1) % 6});
  return SimplicialComplex::from_maximal(6, edges);
}

SimplicialComplex sphere() {
  return SimplicialComplex::from_maximal(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

SimplicialComplex torus() {
  std::vector<Simplex> triangles;
  for (int i = 0; i < 7; ++i) {
    triangles.push_back({i, (i + 1) % 7, (i + 3) % 7});
    triangles.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return SimplicialComplex::from_maximal(7, triangles);
}

SimplicialComplex rp2() {
  return SimplicialComplex::from_maximal(6, {{0, 1, 2},
                                             {0, 2, 3},
                                             {0, 3, 4},
                                             {0, 4, 5},
                                             {0, 1, 5},
                                             {1, 2, 4},
                                             {2, 3, 5},
                                             {1, 3, 4},
                                             {2, 4, 5},
                                             {1, 3, 5}});
}

SimplicialMap double_cover() { return SimplicialMap(hexagon(), circle(), {0, 1, 2, 0, 1, 2}); }

SimplicialComplex by_name(const std::string& name) {
  if (name == "point") return point();
  if (name == "two-points") return two_points();
  if (name == "circle") return circle();
  if (name == "hexagon") return hexagon();
  if (name == "sphere") return sphere();
  if (name == "torus") return torus();
  if (name == "rp2") return rp2();
  throw Error(ErrorCode::InvalidInput, "no fixture named '" + name + "'");
}

std::vector<std::string> names() { return {"point", "two-points", "circle", "hexagon", "sphere", "torus", "rp2"}; }

}  // namespace fixtures

}  // namespace specseq
