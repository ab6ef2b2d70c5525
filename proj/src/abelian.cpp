#include "specseq/abelian.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "specseq/smith.hpp"

namespace specseq {

// ---------------------------------------------------------------------------
// LocalizationRing

LocalizationRing LocalizationRing::rationals() {
  LocalizationRing r;
  r.all_ = true;
  return r;
}

LocalizationRing LocalizationRing::inverting(std::vector<long> primes) {
  std::sort(primes.begin(), primes.end());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(Integer(primes[i])))
      throw Error(ErrorCode::InvalidInput, std::to_string(primes[i]) + " is not prime");
    if (i > 0 && primes[i] == primes[i - 1])
      throw Error(ErrorCode::InvalidInput, "prime " + std::to_string(primes[i]) + " listed twice");
  }
  LocalizationRing r;
  r.primes_ = std::move(primes);
  return r;
}

bool LocalizationRing::inverts(const Integer& prime) const {
  if (all_) return true;
  if (prime > std::numeric_limits<long>::max()) return false;
  return std::binary_search(primes_.begin(), primes_.end(), prime.convert_to<long>());
}

bool LocalizationRing::refines(const LocalizationRing& coarser) const {
  if (all_) return true;
  if (coarser.all_) return false;
  return std::includes(primes_.begin(), primes_.end(), coarser.primes_.begin(), coarser.primes_.end());
}

std::string LocalizationRing::to_string() const {
  if (all_) return "Q";
  if (primes_.empty()) return "Z";
  std::string s = "Z[";
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i) s += ',';
    s += "1/" + std::to_string(primes_[i]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// FGModule

Integer PrimePower::value() const { return boost::multiprecision::pow(prime, static_cast<unsigned>(exponent)); }

FGModule FGModule::zero(const LocalizationRing& ring) {
  FGModule m;
  m.ring_ = ring;
  return m;
}

FGModule FGModule::free(const LocalizationRing& ring, int rank) {
  if (rank < 0) throw Error(ErrorCode::InvalidInput, "negative free rank");
  FGModule m;
  m.ring_ = ring;
  m.rank_ = rank;
  return m;
}

FGModule FGModule::cyclic(const LocalizationRing& ring, const Integer& order) {
  if (order == 0) return free(ring, 1);
  return from_orders(ring, 0, {order});
}

FGModule FGModule::from_orders(const LocalizationRing& ring, int rank, const std::vector<Integer>& orders) {
  std::vector<PrimePower> torsion;
  for (const Integer& m : orders) {
    if (m < 0) throw Error(ErrorCode::InvalidInput, "negative torsion order");
    if (m == 0) {
      ++rank;
      continue;
    }
    for (auto& [p, e] : factorize(m))
      if (!ring.inverts(p)) torsion.push_back({p, e});
  }
  std::stable_sort(torsion.begin(), torsion.end());
  return canonical(ring, rank, std::move(torsion));
}

FGModule FGModule::canonical(const LocalizationRing& ring, int rank, std::vector<PrimePower> torsion) {
  if (rank < 0) throw Error(ErrorCode::InvalidInput, "negative free rank");
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    const auto& t = torsion[i];
    if (t.exponent < 1 || !is_prime(t.prime))
      throw Error(ErrorCode::InvalidInput, "torsion order is not a prime power > 1");
    if (ring.inverts(t.prime))
      throw Error(ErrorCode::InvalidInput,
                  "torsion at prime " + t.prime.str() + " which is invertible in " + ring.to_string());
    if (i > 0 && torsion[i] < torsion[i - 1])
      throw Error(ErrorCode::InvalidInput, "torsion orders not in (prime, exponent) order");
  }
  FGModule m;
  m.ring_ = ring;
  m.rank_ = rank;
  m.torsion_ = std::move(torsion);
  return m;
}

std::vector<Integer> FGModule::torsion_orders() const {
  std::vector<Integer> out;
  for (const auto& t : torsion_) out.push_back(t.value());
  return out;
}

std::vector<Integer> FGModule::invariant_factors() const {
  std::map<Integer, std::vector<int>> by_prime;
  for (const auto& t : torsion_) by_prime[t.prime].push_back(t.exponent);
  std::size_t count = 0;
  for (auto& [p, exps] : by_prime) {
    std::sort(exps.rbegin(), exps.rend());
    count = std::max(count, exps.size());
  }
  std::vector<Integer> out(count, Integer(1));
  // k-th largest factor collects the k-th largest exponent of every prime
  for (const auto& [p, exps] : by_prime)
    for (std::size_t k = 0; k < exps.size(); ++k)
      out[count - 1 - k] *= PrimePower{p, exps[k]}.value();
  return out;
}

Integer FGModule::generator_order(int i) const {
  if (i < rank_) return 0;
  return torsion_.at(static_cast<std::size_t>(i - rank_)).value();
}

IntMatrix FGModule::relation_matrix() const {
  const Index n = generator_count();
  const Index s = static_cast<Index>(torsion_.size());
  IntMatrix r = IntMatrix::Zero(n, s);
  for (Index k = 0; k < s; ++k) r(rank_ + k, k) = torsion_[static_cast<std::size_t>(k)].value();
  return r;
}

std::string FGModule::to_string() const {
  if (is_zero()) return "0";
  std::vector<std::string> terms;
  if (rank_ > 0) {
    std::string sym = ring_.to_string();
    terms.push_back(rank_ == 1 ? sym : sym + "^" + std::to_string(rank_));
  }
  for (const auto& t : torsion_) terms.push_back("Z/" + t.value().str());
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? " + " : "") + terms[i];
  return s;
}

FGModule integral_form(const FGModule& m) {
  return FGModule::canonical(LocalizationRing::integers(), m.free_rank(), m.torsion());
}

FGModule cokernel(const IntMatrix& presentation, const LocalizationRing& ring) {
  auto snf = smith_normal_form(presentation, SmithTransforms::None);
  std::vector<Integer> orders;
  for (Index i = 0; i < snf.rank; ++i)
    if (snf.D(i, i) > 1) orders.push_back(snf.D(i, i));
  return FGModule::from_orders(ring, static_cast<int>(presentation.rows() - snf.rank), orders);
}

FGModule tensor_localize(const FGModule& g, const LocalizationRing& ring) {
  if (!ring.refines(g.ring()))
    throw Error(ErrorCode::RefinementError,
                "cannot base change from " + g.ring().to_string() + " to " + ring.to_string());
  std::vector<PrimePower> kept;
  for (const auto& t : g.torsion())
    if (!ring.inverts(t.prime)) kept.push_back(t);
  return FGModule::canonical(ring, g.free_rank(), std::move(kept));
}

ModuleHom tensor_localize(const ModuleHom& f, const LocalizationRing& ring) {
  auto kept = [&](const FGModule& m) {
    std::vector<Index> idx;
    for (int i = 0; i < m.generator_count(); ++i)
      if (i < m.free_rank() || !ring.inverts(m.torsion()[static_cast<std::size_t>(i - m.free_rank())].prime))
        idx.push_back(i);
    return idx;
  };
  const auto rows = kept(f.codomain());
  const auto cols = kept(f.domain());
  IntMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = f.matrix()(rows[i], cols[j]);
  return ModuleHom(tensor_localize(f.domain(), ring), tensor_localize(f.codomain(), ring), std::move(m));
}

// ---------------------------------------------------------------------------
// Direct sums

DirectSum direct_sum_with_injections(const std::vector<FGModule>& summands) {
  DirectSum out;
  LocalizationRing ring = summands.empty() ? LocalizationRing{} : summands.front().ring();
  struct Item {
    std::size_t summand;
    int local;
    PrimePower order;
  };
  std::vector<Item> torsion;
  int rank = 0;
  out.injections.resize(summands.size());
  for (std::size_t k = 0; k < summands.size(); ++k) {
    const FGModule& m = summands[k];
    if (!(m.ring() == ring)) throw Error(ErrorCode::ShapeMismatch, "direct sum over different rings");
    out.injections[k].resize(static_cast<std::size_t>(m.generator_count()));
    for (int j = 0; j < m.free_rank(); ++j) out.injections[k][static_cast<std::size_t>(j)] = rank++;
    for (std::size_t t = 0; t < m.torsion().size(); ++t)
      torsion.push_back({k, m.free_rank() + static_cast<int>(t), m.torsion()[t]});
  }
  std::stable_sort(torsion.begin(), torsion.end(),
                   [](const Item& a, const Item& b) { return a.order < b.order; });
  std::vector<PrimePower> orders;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    out.injections[torsion[i].summand][static_cast<std::size_t>(torsion[i].local)] = rank + static_cast<int>(i);
    orders.push_back(torsion[i].order);
  }
  out.module = FGModule::canonical(ring, rank, std::move(orders));
  return out;
}

FGModule direct_sum(const std::vector<FGModule>& summands) {
  return direct_sum_with_injections(summands).module;
}

DirectSum direct_power(const FGModule& g, int n) {
  return direct_sum_with_injections(std::vector<FGModule>(static_cast<std::size_t>(n), g));
}

// ---------------------------------------------------------------------------
// ModuleHom

ModuleHom::ModuleHom(FGModule domain, FGModule codomain, IntMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (!(domain_.ring() == codomain_.ring()))
    throw Error(ErrorCode::ShapeMismatch, "homomorphism between modules over different rings");
  if (matrix_.rows() != codomain_.generator_count() || matrix_.cols() != domain_.generator_count())
    throw Error(ErrorCode::ShapeMismatch,
                "matrix is " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                    ", expected " + std::to_string(codomain_.generator_count()) + "x" +
                    std::to_string(domain_.generator_count()));
  for (Index i = 0; i < matrix_.rows(); ++i) {
    const Integer n = codomain_.generator_order(static_cast<int>(i));
    for (Index j = 0; j < matrix_.cols(); ++j) {
      const Integer m = domain_.generator_order(static_cast<int>(j));
      if (m != 0) {
        // m * entry must vanish in the target cyclic summand
        bool ok = n == 0 ? matrix_(i, j) == 0 : (m * matrix_(i, j)) % n == 0;
        if (!ok)
          throw Error(ErrorCode::IllDefinedHom, "generator " + std::to_string(j) + " of order " + m.str() +
                                                    " cannot map to entry " + matrix_(i, j).str() +
                                                    " in row " + std::to_string(i));
      }
      if (n != 0) matrix_(i, j) = mod_floor(matrix_(i, j), n);
    }
  }
}

ModuleHom ModuleHom::zero(const FGModule& domain, const FGModule& codomain) {
  return ModuleHom(domain, codomain, IntMatrix::Zero(codomain.generator_count(), domain.generator_count()));
}

ModuleHom ModuleHom::identity(const FGModule& m) {
  return ModuleHom(m, m, IntMatrix::Identity(m.generator_count(), m.generator_count()));
}

bool ModuleHom::is_zero() const { return specseq::is_zero(matrix_); }

bool operator==(const ModuleHom& a, const ModuleHom& b) {
  return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.matrix_ == b.matrix_;
}

ModuleHom compose(const ModuleHom& outer, const ModuleHom& inner) {
  if (!(inner.codomain() == outer.domain()))
    throw Error(ErrorCode::ShapeMismatch, "cannot compose: " + inner.codomain().to_string() + " vs " +
                                              outer.domain().to_string());
  return ModuleHom(inner.domain(), outer.codomain(), outer.matrix() * inner.matrix());
}

ModuleHom direct_sum(const std::vector<ModuleHom>& maps) {
  std::vector<FGModule> doms, cods;
  for (const auto& f : maps) {
    doms.push_back(f.domain());
    cods.push_back(f.codomain());
  }
  DirectSum ds = direct_sum_with_injections(doms);
  DirectSum cs = direct_sum_with_injections(cods);
  IntMatrix m = IntMatrix::Zero(cs.module.generator_count(), ds.module.generator_count());
  for (std::size_t k = 0; k < maps.size(); ++k)
    for (Index i = 0; i < maps[k].matrix().rows(); ++i)
      for (Index j = 0; j < maps[k].matrix().cols(); ++j)
        m(cs.injections[k][static_cast<std::size_t>(i)], ds.injections[k][static_cast<std::size_t>(j)]) =
            maps[k].matrix()(i, j);
  return ModuleHom(ds.module, cs.module, std::move(m));
}

IntVector reduce(const FGModule& m, IntVector v) {
  for (Index i = 0; i < v.size(); ++i) {
    const Integer n = m.generator_order(static_cast<int>(i));
    if (n != 0) v(i) = mod_floor(v(i), n);
  }
  return v;
}

bool represents_zero(const FGModule& m, const IntVector& v) {
  IntVector r = reduce(m, v);
  for (Index i = 0; i < r.size(); ++i)
    if (r(i) != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Subquotients
//
// All lattice work happens over Z on the integral forms; the result is then
// read over the ring by discarding torsion at inverted primes. Localization
// is exact, so this equals the subquotient computed over the ring.

namespace {

IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

// Integer solution z of A z = b, if one exists.
std::optional<IntVector> solve_integer(const SmithDecomposition<Integer>& snf, const IntVector& b) {
  IntVector c = snf.U * b;
  IntVector w = IntVector::Zero(snf.D.cols());
  for (Index i = 0; i < c.size(); ++i) {
    if (i < snf.rank) {
      if (c(i) % snf.D(i, i) != 0) return std::nullopt;
      w(i) = c(i) / snf.D(i, i);
    } else if (c(i) != 0) {
      return std::nullopt;
    }
  }
  return IntVector(snf.V * w);
}

}  // namespace

Subquotient subquotient(const ModuleHom& d_in, const ModuleHom& d_out) {
  if (!(d_in.codomain() == d_out.domain()))
    throw Error(ErrorCode::ShapeMismatch, "d_in lands in " + d_in.codomain().to_string() +
                                              " but d_out starts at " + d_out.domain().to_string());
  if (!compose(d_out, d_in).is_zero())
    throw Error(ErrorCode::CompositionNonzero, "d_out o d_in is not zero");

  const FGModule& middle = d_out.domain();
  const FGModule& target = d_out.codomain();
  const LocalizationRing& ring = middle.ring();
  const Index n = middle.generator_count();

  Subquotient sq;
  sq.middle_ = middle;

  // K' = { x : d_out x lies in the relation span of the target }
  IntMatrix stacked = hcat(d_out.matrix(), target.relation_matrix());
  auto snf_stack = smith_normal_form(stacked, SmithTransforms::Forward);
  IntMatrix generators = snf_stack.V.block(0, snf_stack.rank, n, stacked.cols() - snf_stack.rank);

  auto snf_gen = smith_normal_form(generators, SmithTransforms::WithInverses);
  const Index k = snf_gen.rank;
  sq.kernel_u_ = snf_gen.U;
  sq.kernel_d_ = snf_gen.invariant_factors();
  IntMatrix basis(n, k);
  for (Index i = 0; i < k; ++i) basis.col(i) = snf_gen.U_inv.col(i) * sq.kernel_d_[static_cast<std::size_t>(i)];

  // Boundaries and middle relations, written in the basis of K'.
  IntMatrix relations = hcat(middle.relation_matrix(), d_in.matrix());
  IntMatrix z = snf_gen.U * relations;
  IntMatrix rel_coords(k, relations.cols());
  for (Index j = 0; j < relations.cols(); ++j)
    for (Index i = 0; i < k; ++i) rel_coords(i, j) = z(i, j) / sq.kernel_d_[static_cast<std::size_t>(i)];

  auto snf_q = smith_normal_form(rel_coords, SmithTransforms::WithInverses);
  const Index rq = snf_q.rank;
  sq.quotient_u_ = snf_q.U;

  struct Component {
    Index source;
    PrimePower order;
    Integer lambda;  // CRT idempotent picking the p-primary part of Z/d
  };
  std::vector<Component> torsion;
  for (Index i = 0; i < rq; ++i) {
    const Integer& d = snf_q.D(i, i);
    if (d == 1) continue;
    for (auto& [p, e] : factorize(d)) {
      if (ring.inverts(p)) continue;
      PrimePower pp{p, e};
      Integer q = pp.value();
      Integer co = d / q;
      torsion.push_back({i, pp, mod_floor(co * inverse_mod(co, q), d)});
    }
  }
  std::stable_sort(torsion.begin(), torsion.end(),
                   [](const Component& a, const Component& b) { return a.order < b.order; });

  const int free_rank = static_cast<int>(k - rq);
  std::vector<PrimePower> orders;
  for (const auto& c : torsion) orders.push_back(c.order);
  sq.module_ = FGModule::canonical(ring, free_rank, std::move(orders));

  const Index h = sq.module_.generator_count();
  sq.lift_ = IntMatrix::Zero(n, h);
  for (Index g = 0; g < h; ++g) {
    Index source;
    Integer lambda = 1;
    if (g < free_rank) {
      source = rq + g;
      sq.modulus_.push_back(0);
    } else {
      const auto& c = torsion[static_cast<std::size_t>(g - free_rank)];
      source = c.source;
      lambda = c.lambda;
      sq.modulus_.push_back(c.order.value());
    }
    sq.source_.push_back(source);
    IntVector element = basis * (snf_q.U_inv.col(source) * lambda);
    sq.lift_.col(g) = reduce(middle, element);
  }
  return sq;
}

IntVector Subquotient::coordinates(const IntVector& x) const {
  if (x.size() != middle_.generator_count())
    throw Error(ErrorCode::ShapeMismatch, "element has wrong number of coordinates");
  const Index k = static_cast<Index>(kernel_d_.size());
  IntVector z = kernel_u_ * x;
  IntVector y(k);
  for (Index i = 0; i < z.size(); ++i) {
    if (i < k) {
      const Integer& d = kernel_d_[static_cast<std::size_t>(i)];
      if (z(i) % d != 0) throw Error(ErrorCode::ShapeMismatch, "element is not a cycle");
      y(i) = z(i) / d;
    } else if (z(i) != 0) {
      throw Error(ErrorCode::ShapeMismatch, "element is not a cycle");
    }
  }
  IntVector w = quotient_u_ * y;
  IntVector out(static_cast<Index>(source_.size()));
  for (std::size_t g = 0; g < source_.size(); ++g) {
    const Integer& v = w(source_[g]);
    out(static_cast<Index>(g)) = modulus_[g] == 0 ? v : mod_floor(v, modulus_[g]);
  }
  return out;
}

IntMatrix Subquotient::coordinates(const IntMatrix& columns) const {
  IntMatrix out(module_.generator_count(), columns.cols());
  for (Index j = 0; j < columns.cols(); ++j) out.col(j) = coordinates(IntVector(columns.col(j)));
  return out;
}

ModuleHom induced_map(const Subquotient& from, const Subquotient& to, const IntMatrix& middle_map) {
  if (middle_map.rows() != to.middle().generator_count() || middle_map.cols() != from.middle().generator_count())
    throw Error(ErrorCode::ShapeMismatch, "middle map has the wrong shape");
  return ModuleHom(from.module(), to.module(), to.coordinates(IntMatrix(middle_map * from.lift())));
}

FGModule kernel(const ModuleHom& f) {
  return subquotient(ModuleHom::zero(FGModule::zero(f.domain().ring()), f.domain()), f).module();
}

FGModule image(const ModuleHom& f) {
  Subquotient ker = subquotient(ModuleHom::zero(FGModule::zero(f.domain().ring()), f.domain()), f);
  ModuleHom inclusion(ker.module(), f.domain(), ker.lift());
  return subquotient(inclusion, ModuleHom::zero(f.domain(), FGModule::zero(f.domain().ring()))).module();
}

FGModule cokernel(const ModuleHom& f) {
  return subquotient(f, ModuleHom::zero(f.codomain(), FGModule::zero(f.codomain().ring()))).module();
}

bool is_isomorphism(const ModuleHom& f) {
  return kernel(f).is_zero() && cokernel(f).is_zero();
}

ModuleHom inverse(const ModuleHom& f) {
  if (!is_isomorphism(f)) throw Error(ErrorCode::NotInvertible, "map is not an isomorphism");
  const FGModule& cod = f.codomain();
  const Index n = f.domain().generator_count();
  auto snf = smith_normal_form(hcat(f.matrix(), cod.relation_matrix()), SmithTransforms::Forward);
  IntMatrix inv(n, cod.generator_count());
  for (Index j = 0; j < cod.generator_count(); ++j) {
    IntVector e = IntVector::Zero(cod.generator_count());
    e(j) = 1;
    auto z = solve_integer(snf, e);
    if (!z) throw Error(ErrorCode::NotInvertible, "inverse is not integral on canonical generators");
    inv.col(j) = z->head(n);
  }
  return ModuleHom(cod, f.domain(), std::move(inv));
}

FGModule hom_group(const FGModule& from, const FGModule& to) {
  const auto z = LocalizationRing::integers();
  std::vector<Integer> orders;
  int rank = from.free_rank() * to.free_rank();
  for (int i = 0; i < from.free_rank(); ++i)
    for (const auto& t : to.torsion()) orders.push_back(t.value());
  for (const auto& s : from.torsion())
    for (const auto& t : to.torsion())
      if (s.prime == t.prime) orders.push_back(PrimePower{s.prime, std::min(s.exponent, t.exponent)}.value());
  return FGModule::from_orders(z, rank, orders);
}

FGModule ext_group(const FGModule& from, const FGModule& to) {
  const auto z = LocalizationRing::integers();
  std::vector<Integer> orders;
  for (const auto& s : from.torsion()) {
    for (int i = 0; i < to.free_rank(); ++i) orders.push_back(s.value());
    for (const auto& t : to.torsion())
      if (s.prime == t.prime) orders.push_back(PrimePower{s.prime, std::min(s.exponent, t.exponent)}.value());
  }
  return FGModule::from_orders(z, 0, orders);
}

}  // namespace specseq
