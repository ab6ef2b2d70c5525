#include "specseq/coefficients.hpp"

#include <algorithm>

namespace specseq {

GradedCoefficientSystem::GradedCoefficientSystem(std::string label, LocalizationRing ring,
                                                 std::map<int, FGModule> groups, std::optional<int> period,
                                                 std::optional<int> stable_bound)
    : label_(std::move(label)),
      ring_(std::move(ring)),
      groups_(std::move(groups)),
      period_(period),
      stable_bound_(stable_bound) {
  if (period_ && stable_bound_) throw Error(ErrorCode::InvalidInput, "a system cannot be both periodic and bounded");
  if (period_ && *period_ != 2 && *period_ != 8) throw Error(ErrorCode::InvalidInput, "period must be 2 or 8");
  if (stable_bound_ && *stable_bound_ < 0) throw Error(ErrorCode::InvalidInput, "negative stable bound");
  for (auto it = groups_.begin(); it != groups_.end();) {
    const auto& [q, g] = *it;
    if (!(g.ring() == ring_)) throw Error(ErrorCode::InvalidInput, "entry at q=" + std::to_string(q) + " over the wrong ring");
    if (q < 1) throw Error(ErrorCode::InvalidInput, "entries start at q = 1");
    if (period_ && q > *period_) throw Error(ErrorCode::InvalidInput, "periodic entries must lie in 1..period");
    if (stable_bound_ && q > *stable_bound_) throw Error(ErrorCode::InvalidInput, "entry beyond the stable bound");
    it = g.is_zero() ? groups_.erase(it) : std::next(it);
  }
}

std::optional<int> GradedCoefficientSystem::support_bound() const {
  if (period_) return std::nullopt;
  return groups_.empty() ? 0 : groups_.rbegin()->first;
}

FGModule GradedCoefficientSystem::at(int q) const {
  if (q < 1) return FGModule::zero(ring_);
  if (!is_defined(q))
    throw Error(ErrorCode::StableRangeExceeded,
                label_ + " is only known for q <= " + std::to_string(*stable_bound_) + ", asked for q = " +
                    std::to_string(q));
  if (period_) q = (q - 1) % *period_ + 1;
  auto it = groups_.find(q);
  return it == groups_.end() ? FGModule::zero(ring_) : it->second;
}

// ---------------------------------------------------------------------------

CoefficientMap::CoefficientMap(GradedCoefficientSystem source, GradedCoefficientSystem target,
                               std::map<int, ModuleHom> maps, std::optional<int> period)
    : source_(std::move(source)), target_(std::move(target)), maps_(std::move(maps)), period_(period) {
  if (period_ && (source_.period() != period_ || target_.period() != period_))
    throw Error(ErrorCode::ShapeMismatch, "a periodic map needs both systems periodic with the same period");
  for (const auto& [q, f] : maps_) {
    if (!source_.is_defined(q) || !target_.is_defined(q))
      throw Error(ErrorCode::ShapeMismatch, "map given at q=" + std::to_string(q) + " outside a stable range");
    if (!(f.domain() == source_.at(q)) || !(f.codomain() == target_.at(q)))
      throw Error(ErrorCode::ShapeMismatch, "component at q=" + std::to_string(q) + " has the wrong shape");
  }
}

CoefficientMap CoefficientMap::canonical(const GradedCoefficientSystem& source, const GradedCoefficientSystem& target,
                                         int window) {
  std::optional<int> period;
  if (source.period() && source.period() == target.period()) {
    period = source.period();
    window = *period;
  }
  std::map<int, ModuleHom> maps;
  for (int q = 1; q <= window; ++q) {
    if (!source.is_defined(q) || !target.is_defined(q)) continue;
    FGModule a = source.at(q), b = target.at(q);
    if (a == b && !a.is_zero()) maps.emplace(q, ModuleHom::identity(a));
  }
  return CoefficientMap(source, target, std::move(maps), period);
}

CoefficientMap CoefficientMap::identity(const GradedCoefficientSystem& s, int window) {
  return canonical(s, s, window);
}

ModuleHom CoefficientMap::at(int q) const {
  FGModule a = source_.at(q), b = target_.at(q);
  int key = period_ && q >= 1 ? (q - 1) % *period_ + 1 : q;
  auto it = maps_.find(key);
  return it == maps_.end() ? ModuleHom::zero(a, b) : it->second;
}

// ---------------------------------------------------------------------------

namespace {

FGModule z_free() { return FGModule::free(LocalizationRing::integers(), 1); }

FGModule z_mod(long m) { return FGModule::cyclic(LocalizationRing::integers(), m); }

}  // namespace

GradedCoefficientSystem builtin(const std::string& name, const LocalizationRing& ring) {
  const auto z = LocalizationRing::integers();
  GradedCoefficientSystem s;
  if (name == "gl1-complex") {
    s = GradedCoefficientSystem(name, z, {{1, z_free()}});
  } else if (name == "ku-stable") {
    s = GradedCoefficientSystem(name, z, {{1, z_free()}}, 2);
  } else if (name == "ko-stable") {
    // q mod 8: 0 -> Z/2, 1 -> Z/2, 3 -> Z, 7 -> Z; stored on q = 1..8
    s = GradedCoefficientSystem(name, z, {{1, z_mod(2)}, {3, z_free()}, {7, z_free()}, {8, z_mod(2)}}, 8);
  } else if (name == "zero") {
    s = GradedCoefficientSystem(name, z, {});
  } else if (name.rfind("unitary-", 0) == 0) {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(name.substr(8), &used);
      if (used != name.size() - 8) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n < 1) throw Error(ErrorCode::UnknownAtlas, "unitary-n needs a positive integer n, got '" + name + "'");
    std::map<int, FGModule> groups;
    for (int q = 1; q <= 2 * n - 1; q += 2) groups.emplace(q, z_free());
    s = GradedCoefficientSystem(name, z, std::move(groups), std::nullopt, 2 * n - 1);
  } else {
    throw Error(ErrorCode::UnknownAtlas, "no built-in coefficient system named '" + name + "'");
  }
  return localize_system(s, ring);
}

std::vector<std::string> builtin_names() { return {"gl1-complex", "unitary-n", "ku-stable", "ko-stable", "zero"}; }

GradedCoefficientSystem localize_system(const GradedCoefficientSystem& s, const LocalizationRing& ring) {
  if (!ring.refines(s.ring()))
    throw Error(ErrorCode::RefinementError, "cannot base change " + s.label() + " to " + ring.to_string());
  std::map<int, FGModule> groups;
  for (const auto& [q, g] : s.groups()) groups.emplace(q, tensor_localize(g, ring));
  return GradedCoefficientSystem(s.label(), ring, std::move(groups), s.period(), s.stable_bound());
}

CoefficientMap localize_map(const CoefficientMap& m, const LocalizationRing& ring) {
  std::map<int, ModuleHom> maps;
  for (const auto& [q, f] : m.maps()) maps.emplace(q, tensor_localize(f, ring));
  return CoefficientMap(localize_system(m.source(), ring), localize_system(m.target(), ring), std::move(maps),
                        m.period());
}

CoefficientTower stabilization_tower(int n_max, const LocalizationRing& ring) {
  if (n_max < 1) throw Error(ErrorCode::InvalidInput, "tower needs at least one stage");
  CoefficientTower t;
  for (int n = 1; n <= n_max; ++n) t.stages.push_back(builtin("unitary-" + std::to_string(n), ring));
  // the fringe q = 2n is outside the encoded source range
  for (int n = 1; n < n_max; ++n)
    t.maps.push_back(CoefficientMap::canonical(t.stages[static_cast<std::size_t>(n - 1)],
                                               t.stages[static_cast<std::size_t>(n)], 2 * n - 1));
  return t;
}

GradedCoefficientSystem colimit_system(const CoefficientTower& tower, std::optional<int> window) {
  if (tower.stages.empty()) throw Error(ErrorCode::InvalidInput, "empty tower");
  if (tower.maps.size() + 1 != tower.stages.size())
    throw Error(ErrorCode::ShapeMismatch, "tower needs one map between consecutive stages");
  for (std::size_t j = 0; j < tower.maps.size(); ++j)
    if (!(tower.maps[j].source() == tower.stages[j]) || !(tower.maps[j].target() == tower.stages[j + 1]))
      throw Error(ErrorCode::ShapeMismatch, "tower map " + std::to_string(j) + " does not connect its stages");

  const GradedCoefficientSystem& last = tower.stages.back();
  std::optional<int> period;
  int top;
  if (window) {
    top = last.defined_up_to(*window);
  } else if (last.stable_bound()) {
    top = *last.stable_bound();
  } else if (last.period()) {
    period = last.period();
    top = *period;
  } else {
    top = 0;
    for (const auto& s : tower.stages)
      if (auto b = s.support_bound()) top = std::max(top, *b);
  }

  std::map<int, FGModule> groups;
  std::vector<std::string> unstable;
  for (int q = 1; q <= top; ++q) {
    if (tower.stages.size() >= 2) {
      const auto& before = tower.stages[tower.stages.size() - 2];
      if (before.is_defined(q)) {
        ModuleHom f = tower.maps.back().at(q);
        if (!f.codomain().is_zero() && !is_isomorphism(f)) unstable.push_back(std::to_string(q));
      }
    }
    groups.emplace(q, last.at(q));
  }
  if (!unstable.empty()) {
    std::string list;
    for (const auto& q : unstable) list += (list.empty() ? "" : ", ") + q;
    throw Error(ErrorCode::NotStabilized, "degrees q = " + list + " never settle within the tower", unstable);
  }
  std::string label = "colim(" + tower.stages.front().label() + " -> " + last.label() + ")";
  if (period) return GradedCoefficientSystem(label, last.ring(), std::move(groups), period);
  return GradedCoefficientSystem(label, last.ring(), std::move(groups), std::nullopt, top);
}

}  // namespace specseq
