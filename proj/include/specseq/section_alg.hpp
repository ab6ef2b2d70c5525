#pragma once

#include <map>
#include <optional>
#include <vector>

#include "specseq/coefficients.hpp"
#include "specseq/simplicial.hpp"
#include "specseq/spectral.hpp"

namespace specseq {

/// Input of the section-algebra pipeline: a base complex X, the fibre's
/// coefficient system, the localization P, and optionally the stabilized
/// system with the comparison map into it.
struct ProblemSpec {
  SimplicialComplex complex;
  GradedCoefficientSystem system;
  LocalizationRing ring;
  std::optional<bool> bott_stable;
  std::optional<GradedCoefficientSystem> stabilized_system;
  std::optional<CoefficientMap> comparison;

  /// Throws InvalidInput when comparison and stabilized_system are not both
  /// present or both absent, or the comparison does not connect the two
  /// systems; RefinementError when ring does not refine a system's ring.
  void validate() const;

  /// Sets stabilized_system and the canonical comparison into it.
  ProblemSpec with_stabilized(const GradedCoefficientSystem& stable, int window) const;
};

/// E^2_{-p,q} = H^p(X; S(q) (x) P).
SpectralPage theorem_a_e2(const ProblemSpec& spec, const PageOptions& opts = {});

/// E^2 with the stabilized coefficients. Without a stabilized system the
/// colimit of `tower` is used. When a tower is given, its stage pages and
/// last connecting morphism are checked against the result; NotStabilized
/// lists the bidegrees that disagree.
SpectralPage theorem_b_e2(const ProblemSpec& spec, const PageOptions& opts = {},
                          const std::optional<CoefficientTower>& tower = {});

enum class HSpaceHypothesis { NotAcknowledged, Acknowledged };

struct CollapseTable {
  int max_degree = 0;
  std::map<int, int> dimensions;  // n -> dim over Q, n = 1..max_degree

  friend bool operator==(const CollapseTable&, const CollapseTable&) = default;
};

/// dim_Q of sum_p H^p(X; Q) (x) S(n+p) (x) Q for n = 1..max_degree, with
/// unreduced H^p. Throws HypothesisNotAcknowledged.
CollapseTable collapse_rational(const SimplicialComplex& x, const GradedCoefficientSystem& s, HSpaceHypothesis ack,
                                int n_max = 12);

struct BottStableReport {
  ComparisonVerdict verdict;
  /// E^2 isomorphism status on the union of both windows.
  std::map<Bidegree, bool> e2_status;
  /// The comparison map is an isomorphism in every degree of the window.
  bool coefficients_bott_stable = false;
  /// False when a supplied bott_stable flag contradicts the coefficients.
  bool flag_consistent = true;
};

/// Compares the Theorem A and Theorem B sequences along the comparison map.
BottStableReport bott_stable_verdict(const ProblemSpec& spec, const DifferentialSupplier& a_supplier = no_differentials(),
                                     const DifferentialSupplier& b_supplier = no_differentials(),
                                     const PageOptions& opts = {});

/// Inverse sequence of complexes: maps[j] : stages[j + 1] -> stages[j].
struct Tower {
  std::vector<SimplicialComplex> stages;
  std::vector<SimplicialMap> maps;

  /// Throws InvalidInput on an empty tower or a map between the wrong stages.
  void validate() const;
  static Tower constant(const SimplicialComplex& x, int length);
};

struct TowerReport {
  std::vector<SpectralPage> pages;
  /// morphisms[j] : pages[j] -> pages[j + 1] (pullback along maps[j]).
  std::vector<PageMorphism> morphisms;
  /// Nonzero bidegrees whose last connecting map is neither an isomorphism
  /// nor into zero.
  std::vector<Bidegree> unstable;
  std::optional<SpectralPage> limit_page;

  bool stabilized() const { return unstable.empty(); }
  /// Throws NotStabilized naming the unstable bidegrees.
  const SpectralPage& limit() const;
};

TowerReport tower_pages(const Tower& tower, const GradedCoefficientSystem& s, const LocalizationRing& ring,
                        const PageOptions& opts = {});

/// The split summand H^{1-j}(X; Z) of the unitization; j in {0, 1}.
FGModule unitization_correction(const SimplicialComplex& x, int j);
/// pi_j of maps X -> C - 0: H^1(X; Z) for j = 0, H^0(X; Z) for j = 1, zero
/// above. Throws DegreeOutOfRange for j < 0.
FGModule thom_homotopy(const SimplicialComplex& x, int j);
/// pi_j(GL(A_+)) = pi_j(GL(A)) + H^{1-j}(X; Z).
FGModule unitized_homotopy(const SimplicialComplex& x, int j, const FGModule& non_unital);

}  // namespace specseq
