#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "specseq/errors.hpp"
#include "specseq/integer.hpp"

namespace specseq {

/// A subring of Q: Z with a finite set of primes inverted, or Q itself.
class LocalizationRing {
 public:
  LocalizationRing() = default;  // Z

  static LocalizationRing integers() { return {}; }
  static LocalizationRing rationals();
  /// Throws InvalidInput for non-primes; duplicates are rejected.
  static LocalizationRing inverting(std::vector<long> primes);

  bool is_rationals() const { return all_; }
  bool is_integers() const { return !all_ && primes_.empty(); }
  const std::vector<long>& inverted_primes() const { return primes_; }

  bool inverts(const Integer& prime) const;
  /// True when this ring inverts every prime that `coarser` inverts.
  bool refines(const LocalizationRing& coarser) const;

  /// "Z", "Q", or "Z[1/2,1/3]".
  std::string to_string() const;

  friend bool operator==(const LocalizationRing&, const LocalizationRing&) = default;

 private:
  bool all_ = false;
  std::vector<long> primes_;
};

struct PrimePower {
  Integer prime;
  int exponent = 1;

  Integer value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
  friend bool operator<(const PrimePower& a, const PrimePower& b) {
    return a.prime != b.prime ? a.prime < b.prime : a.exponent < b.exponent;
  }
};

/// Isomorphism class of a finitely generated module over a localization of Z,
/// stored as free rank plus prime-power torsion sorted by (prime, exponent).
///
/// Canonical generators: the free generators first, then one generator per
/// torsion order in stored order. Equal fields iff isomorphic.
class FGModule {
 public:
  FGModule() = default;  // zero module over Z

  static FGModule zero(const LocalizationRing& ring = {});
  static FGModule free(const LocalizationRing& ring, int rank);
  static FGModule cyclic(const LocalizationRing& ring, const Integer& order);
  /// Arbitrary (rank, orders) data; orders > 1 are split into prime powers and
  /// those at inverted primes are dropped.
  static FGModule from_orders(const LocalizationRing& ring, int rank,
                              const std::vector<Integer>& orders);
  /// Already canonical data; validated.
  static FGModule canonical(const LocalizationRing& ring, int rank, std::vector<PrimePower> torsion);

  const LocalizationRing& ring() const { return ring_; }
  int free_rank() const { return rank_; }
  const std::vector<PrimePower>& torsion() const { return torsion_; }
  std::vector<Integer> torsion_orders() const;
  /// Invariant-factor view: m_1 | m_2 | ... with every m_i > 1.
  std::vector<Integer> invariant_factors() const;

  int generator_count() const { return rank_ + static_cast<int>(torsion_.size()); }
  /// Additive order of canonical generator i; 0 for free generators.
  Integer generator_order(int i) const;
  bool is_zero() const { return generator_count() == 0; }

  /// Relations as columns: generator_count x torsion count.
  IntMatrix relation_matrix() const;

  /// "0", "Z", "Z^2 + Z/2", "Q^3", "Z[1/2] + Z/3".
  std::string to_string() const;

  friend bool operator==(const FGModule&, const FGModule&) = default;

 private:
  LocalizationRing ring_;
  int rank_ = 0;
  std::vector<PrimePower> torsion_;
};

/// The same module data read over Z (the integral lattice whose
/// localization is `m`).
FGModule integral_form(const FGModule& m);

/// Cokernel of a presentation matrix (rows = generators, columns = relations).
FGModule cokernel(const IntMatrix& presentation, const LocalizationRing& ring = {});

/// Base change G -> G (x) ring. Throws RefinementError if ring inverts fewer
/// primes than G.ring().
FGModule tensor_localize(const FGModule& g, const LocalizationRing& ring);

/// Direct sum together with the position of every summand generator inside
/// the sum's canonical generators.
struct DirectSum {
  FGModule module;
  std::vector<std::vector<int>> injections;  // injections[k][j] = index in sum
};

DirectSum direct_sum_with_injections(const std::vector<FGModule>& summands);
FGModule direct_sum(const std::vector<FGModule>& summands);
/// n copies of g; injections[k] places copy k.
DirectSum direct_power(const FGModule& g, int n);

/// Homomorphism given by an integer matrix on canonical generators
/// (codomain generators x domain generators). Entries in a torsion row of
/// order m are kept reduced into [0, m).
class ModuleHom {
 public:
  ModuleHom() = default;
  /// Throws ShapeMismatch on size or ring disagreement, IllDefinedHom when a
  /// torsion generator is not sent into the annihilator of its order.
  ModuleHom(FGModule domain, FGModule codomain, IntMatrix matrix);

  static ModuleHom zero(const FGModule& domain, const FGModule& codomain);
  static ModuleHom identity(const FGModule& m);

  const FGModule& domain() const { return domain_; }
  const FGModule& codomain() const { return codomain_; }
  const IntMatrix& matrix() const { return matrix_; }

  bool is_zero() const;

  friend bool operator==(const ModuleHom& a, const ModuleHom& b);

 private:
  FGModule domain_;
  FGModule codomain_;
  IntMatrix matrix_;
};

/// outer o inner. Throws ShapeMismatch unless inner.codomain == outer.domain.
ModuleHom compose(const ModuleHom& outer, const ModuleHom& inner);
inline ModuleHom operator*(const ModuleHom& outer, const ModuleHom& inner) {
  return compose(outer, inner);
}

/// Block-diagonal sum of homomorphisms, on the canonical sums.
ModuleHom direct_sum(const std::vector<ModuleHom>& maps);

/// Base change of a homomorphism: rows and columns of torsion generators at
/// newly inverted primes are dropped.
ModuleHom tensor_localize(const ModuleHom& f, const LocalizationRing& ring);

/// Reduce a vector of coordinates modulo the relations of m.
IntVector reduce(const FGModule& m, IntVector v);
/// True when v represents 0 in m.
bool represents_zero(const FGModule& m, const IntVector& v);

/// ker(d_out) / im(d_in) with enough data to carry maps across.
///
/// `lift()` gives, for each canonical generator of the result, a
/// representative element of the middle module; `coordinates()` maps any
/// element of ker(d_out) to its class.
class Subquotient {
 public:
  const FGModule& module() const { return module_; }
  const FGModule& middle() const { return middle_; }
  /// middle generators x module generators.
  const IntMatrix& lift() const { return lift_; }

  /// Class of x (an element of ker d_out, given on middle generators).
  /// Throws ShapeMismatch if x is not a cycle.
  IntVector coordinates(const IntVector& x) const;
  IntMatrix coordinates(const IntMatrix& columns) const;

 private:
  friend Subquotient subquotient(const ModuleHom&, const ModuleHom&);

  FGModule module_;
  FGModule middle_;
  IntMatrix lift_;
  // kernel lattice K' = span(basis) with coordinates y_i = (kernel_u x)_i / kernel_d_i
  IntMatrix kernel_u_;
  std::vector<Integer> kernel_d_;
  // w = quotient_u y; canonical coordinate g reads w[source_] (mod modulus_)
  IntMatrix quotient_u_;
  std::vector<Index> source_;
  std::vector<Integer> modulus_;
};

/// Throws ShapeMismatch when d_in.codomain != d_out.domain and
/// CompositionNonzero when d_out o d_in != 0.
Subquotient subquotient(const ModuleHom& d_in, const ModuleHom& d_out);

/// Map between subquotients induced by a middle-level map (middle(to) x
/// middle(from) integer matrix) that carries cycles to cycles and
/// boundaries to boundaries.
ModuleHom induced_map(const Subquotient& from, const Subquotient& to, const IntMatrix& middle_map);

FGModule kernel(const ModuleHom& f);
FGModule image(const ModuleHom& f);
FGModule cokernel(const ModuleHom& f);

/// Exact bijectivity test over f.domain().ring().
bool is_isomorphism(const ModuleHom& f);

/// Two-sided inverse with integer matrix. Throws NotInvertible unless f is
/// an isomorphism whose inverse is integral on canonical generators (always
/// the case over Z).
ModuleHom inverse(const ModuleHom& f);

/// Ext^1_Z and Hom_Z computed straight from canonical forms (over Z).
FGModule hom_group(const FGModule& from, const FGModule& to);
FGModule ext_group(const FGModule& from, const FGModule& to);

}  // namespace specseq
