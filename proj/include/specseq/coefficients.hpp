#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specseq/abelian.hpp"

namespace specseq {

/// q -> FGModule for q >= 1 (the q = 0 entry is always zero). Either
/// finitely supported, periodic (entries given on q = 1..period), or
/// defined only up to a stable-range bound.
class GradedCoefficientSystem {
 public:
  GradedCoefficientSystem() = default;
  /// Throws InvalidInput when the invariants fail: mixed rings, keys outside
  /// q >= 1 (or outside one period), both period and bound set, or a period
  /// other than 2 or 8.
  GradedCoefficientSystem(std::string label, LocalizationRing ring, std::map<int, FGModule> groups,
                          std::optional<int> period = {}, std::optional<int> stable_bound = {});

  const std::string& label() const { return label_; }
  const LocalizationRing& ring() const { return ring_; }
  const std::map<int, FGModule>& groups() const { return groups_; }
  std::optional<int> period() const { return period_; }
  std::optional<int> stable_bound() const { return stable_bound_; }

  bool is_defined(int q) const { return !stable_bound_ || q <= *stable_bound_; }
  /// Largest q' <= q at which the system is defined.
  int defined_up_to(int q) const { return stable_bound_ ? std::min(q, *stable_bound_) : q; }
  /// Largest q with a nonzero entry, if finitely supported and not periodic.
  std::optional<int> support_bound() const;

  /// Throws StableRangeExceeded beyond the stable bound.
  FGModule at(int q) const;
  FGModule operator()(int q) const { return at(q); }

  friend bool operator==(const GradedCoefficientSystem&, const GradedCoefficientSystem&) = default;

 private:
  std::string label_;
  LocalizationRing ring_;
  std::map<int, FGModule> groups_;
  std::optional<int> period_;
  std::optional<int> stable_bound_;
};

/// Per-degree homomorphisms between two systems. Degrees without an entry
/// carry the zero map; a periodic map repeats its entries for q = 1..period.
class CoefficientMap {
 public:
  CoefficientMap() = default;
  CoefficientMap(GradedCoefficientSystem source, GradedCoefficientSystem target, std::map<int, ModuleHom> maps,
                 std::optional<int> period = {});

  /// Identity wherever source and target agree and are both defined, zero
  /// elsewhere, on q = 1..window (or one period when both are periodic with
  /// the same period).
  static CoefficientMap canonical(const GradedCoefficientSystem& source, const GradedCoefficientSystem& target,
                                  int window);
  static CoefficientMap identity(const GradedCoefficientSystem& s, int window);

  const GradedCoefficientSystem& source() const { return source_; }
  const GradedCoefficientSystem& target() const { return target_; }
  const std::map<int, ModuleHom>& maps() const { return maps_; }
  std::optional<int> period() const { return period_; }

  /// Component at q; both systems must be defined there.
  ModuleHom at(int q) const;

 private:
  GradedCoefficientSystem source_;
  GradedCoefficientSystem target_;
  std::map<int, ModuleHom> maps_;
  std::optional<int> period_;
};

/// Names: gl1-complex, unitary-<n> (n >= 1), ku-stable, ko-stable, zero.
/// Throws UnknownAtlas otherwise.
GradedCoefficientSystem builtin(const std::string& name, const LocalizationRing& ring = {});
std::vector<std::string> builtin_names();

GradedCoefficientSystem localize_system(const GradedCoefficientSystem& s, const LocalizationRing& ring);

CoefficientMap localize_map(const CoefficientMap& m, const LocalizationRing& ring);

struct CoefficientTower {
  std::vector<GradedCoefficientSystem> stages;
  std::vector<CoefficientMap> maps;  // maps[j] : stages[j] -> stages[j + 1]
};

/// unitary-1 -> unitary-2 -> ... -> unitary-n_max, identities on the shared
/// stable range.
CoefficientTower stabilization_tower(int n_max, const LocalizationRing& ring = {});

/// Eventual value at each q. A degree counts as stabilized when its last
/// connecting map is an isomorphism or lands in zero, or when only the final
/// stage defines it. `window` bounds the degrees examined; it defaults to the
/// last stage's stable bound, period, or support. Throws NotStabilized listing
/// the offending degrees.
GradedCoefficientSystem colimit_system(const CoefficientTower& tower, std::optional<int> window = {});

}  // namespace specseq
