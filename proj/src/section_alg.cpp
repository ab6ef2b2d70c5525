#include "specseq/section_alg.hpp"

#include <algorithm>
#include <set>

namespace specseq {

namespace {

void require_refines(const LocalizationRing& ring, const GradedCoefficientSystem& s) {
  if (!ring.refines(s.ring()))
    throw Error(ErrorCode::RefinementError, ring.to_string() + " does not refine the ring of " + s.label());
}

std::string joined(const std::vector<Bidegree>& bs) {
  std::string out;
  for (const auto& b : bs) out += (out.empty() ? "(" : ", (") + b.to_string() + ")";
  return out;
}

std::vector<std::string> keys(const std::vector<Bidegree>& bs) {
  std::vector<std::string> out;
  for (const auto& b : bs) out.push_back(b.to_string());
  return out;
}

}  // namespace

void ProblemSpec::validate() const {
  require_refines(ring, system);
  if (stabilized_system.has_value() != comparison.has_value())
    throw Error(ErrorCode::InvalidInput, "a stabilized system and its comparison map come together");
  if (stabilized_system) {
    require_refines(ring, *stabilized_system);
    if (!(comparison->source() == system) || !(comparison->target() == *stabilized_system))
      throw Error(ErrorCode::InvalidInput, "the comparison map must run from the system to the stabilized system");
  }
}

ProblemSpec ProblemSpec::with_stabilized(const GradedCoefficientSystem& stable, int window) const {
  ProblemSpec out = *this;
  out.stabilized_system = stable;
  out.comparison = CoefficientMap::canonical(system, stable, window);
  return out;
}

SpectralPage theorem_a_e2(const ProblemSpec& spec, const PageOptions& opts) {
  spec.validate();
  return e2_page(spec.complex, localize_system(spec.system, spec.ring), opts);
}

SpectralPage theorem_b_e2(const ProblemSpec& spec, const PageOptions& opts, const std::optional<CoefficientTower>& tower) {
  spec.validate();
  GradedCoefficientSystem stable;
  if (spec.stabilized_system)
    stable = *spec.stabilized_system;
  else if (tower)
    stable = colimit_system(*tower);
  else
    throw Error(ErrorCode::InvalidInput, "Theorem B needs a stabilized system or a stabilization tower");
  require_refines(spec.ring, stable);
  SpectralPage page = e2_page(spec.complex, localize_system(stable, spec.ring), opts);
  if (!tower || tower->stages.empty()) return page;

  const auto& stages = tower->stages;
  const SpectralPage last = e2_page(spec.complex, localize_system(stages.back(), spec.ring), opts);
  std::optional<PageMorphism> step;
  if (stages.size() >= 2)
    step = page_morphism_from_coefficients(spec.complex, localize_map(tower->maps.back(), spec.ring), opts);
  std::vector<Bidegree> bad;
  for (int p = 0; p <= page.max_p(); ++p)
    for (int q = 1; q <= page.q_limit(); ++q) {
      const Bidegree b{p, q};
      if (!last.in_window(b)) continue;
      bool ok = last.entry(b) == page.entry(b);
      if (ok && step && step->source().in_window(b))
        ok = step->target().entry(b).is_zero() || is_isomorphism(step->at(b));
      if (!ok) bad.push_back(b);
    }
  if (!bad.empty())
    throw Error(ErrorCode::NotStabilized, "stage pages disagree with the stabilized page at " + joined(bad), keys(bad));
  return page;
}

CollapseTable collapse_rational(const SimplicialComplex& x, const GradedCoefficientSystem& s, HSpaceHypothesis ack,
                                int n_max) {
  if (ack != HSpaceHypothesis::Acknowledged)
    throw Error(ErrorCode::HypothesisNotAcknowledged,
                "the rational collapse needs the H-space hypothesis on the fibre; acknowledge it explicitly");
  if (n_max < 1) throw Error(ErrorCode::InvalidInput, "degree ceiling must be at least 1");
  const LocalizationRing q_ring = LocalizationRing::rationals();
  const int max_p = std::max(x.dimension(), 0);
  std::vector<int> betti;
  for (int p = 0; p <= x.dimension(); ++p) betti.push_back(cohomology(x, FGModule::free(q_ring, 1), p).free_rank());

  CollapseTable table;
  table.max_degree = std::max(0, std::min(n_max, s.defined_up_to(max_p + n_max) - max_p));
  for (int n = 1; n <= table.max_degree; ++n) {
    int dim = 0;
    for (int p = 0; p < static_cast<int>(betti.size()); ++p) dim += betti[static_cast<std::size_t>(p)] * s.at(n + p).free_rank();
    table.dimensions[n] = dim;
  }
  return table;
}

BottStableReport bott_stable_verdict(const ProblemSpec& spec, const DifferentialSupplier& a_supplier,
                                     const DifferentialSupplier& b_supplier, const PageOptions& opts) {
  spec.validate();
  if (!spec.comparison) throw Error(ErrorCode::InvalidInput, "Bott-stability needs a comparison map");
  const CoefficientMap m = localize_map(*spec.comparison, spec.ring);
  const PageMorphism morphism = page_morphism_from_coefficients(spec.complex, m, opts);

  BottStableReport report;
  const int max_p = std::max(morphism.source().max_p(), morphism.target().max_p());
  const int q_limit = std::max(morphism.source().q_limit(), morphism.target().q_limit());
  for (int p = 0; p <= max_p; ++p)
    for (int q = 1; q <= q_limit; ++q) report.e2_status[{p, q}] = is_isomorphism_at(morphism, {p, q});

  report.coefficients_bott_stable = true;
  const int window = std::max(m.source().defined_up_to(q_limit), m.target().defined_up_to(q_limit));
  for (int q = 1; q <= window && report.coefficients_bott_stable; ++q) {
    const bool in_source = m.source().is_defined(q), in_target = m.target().is_defined(q);
    if (in_source && in_target)
      report.coefficients_bott_stable = is_isomorphism(m.at(q));
    else
      report.coefficients_bott_stable = (in_source ? m.source() : m.target()).at(q).is_zero();
  }
  report.flag_consistent = !spec.bott_stable || *spec.bott_stable == report.coefficients_bott_stable;
  report.verdict = comparison_verdict(morphism, spec.complex.dimension(), a_supplier, b_supplier);
  return report;
}

// ---------------------------------------------------------------------------

void Tower::validate() const {
  if (stages.empty()) throw Error(ErrorCode::InvalidInput, "empty tower");
  if (maps.size() + 1 != stages.size())
    throw Error(ErrorCode::InvalidInput, "a tower of " + std::to_string(stages.size()) + " stages needs " +
                                             std::to_string(stages.size() - 1) + " maps");
  for (std::size_t j = 0; j < maps.size(); ++j)
    if (!(maps[j].source() == stages[j + 1]) || !(maps[j].target() == stages[j]))
      throw Error(ErrorCode::InvalidInput, "tower map " + std::to_string(j) + " must run from stage " +
                                               std::to_string(j + 1) + " to stage " + std::to_string(j));
}

Tower Tower::constant(const SimplicialComplex& x, int length) {
  if (length < 1) throw Error(ErrorCode::InvalidInput, "tower needs at least one stage");
  Tower t;
  t.stages.assign(static_cast<std::size_t>(length), x);
  t.maps.assign(static_cast<std::size_t>(length - 1), SimplicialMap::identity(x));
  return t;
}

const SpectralPage& TowerReport::limit() const {
  if (!limit_page)
    throw Error(ErrorCode::NotStabilized, "the tower does not stabilize at " + joined(unstable), keys(unstable));
  return *limit_page;
}

TowerReport tower_pages(const Tower& tower, const GradedCoefficientSystem& s, const LocalizationRing& ring,
                        const PageOptions& opts) {
  tower.validate();
  const GradedCoefficientSystem local = localize_system(s, ring);
  TowerReport report;
  for (const auto& x : tower.stages) report.pages.push_back(e2_page(x, local, opts));
  for (const auto& f : tower.maps) report.morphisms.push_back(page_morphism_from_map(f, local, opts));

  const SpectralPage& last = report.pages.back();
  if (!report.morphisms.empty()) {
    const PageMorphism& step = report.morphisms.back();
    std::set<Bidegree> tracked;
    for (const auto& page : report.pages)
      for (const auto& [b, m] : page.entries())
        if (last.in_window(b)) tracked.insert(b);
    for (const auto& b : tracked) {
      if (!step.source().in_window(b)) continue;
      if (step.target().entry(b).is_zero() || is_isomorphism(step.at(b))) continue;
      report.unstable.push_back(b);
    }
  }
  if (report.unstable.empty()) report.limit_page = last;
  return report;
}

// ---------------------------------------------------------------------------

FGModule unitization_correction(const SimplicialComplex& x, int j) {
  if (j != 0 && j != 1)
    throw Error(ErrorCode::DegreeOutOfRange, "the unitization sequence is split in degrees 0 and 1 only, got " +
                                                 std::to_string(j));
  return cohomology(x, FGModule::free(LocalizationRing::integers(), 1), 1 - j);
}

FGModule thom_homotopy(const SimplicialComplex& x, int j) {
  if (j < 0) throw Error(ErrorCode::DegreeOutOfRange, "homotopy degree must be non-negative, got " + std::to_string(j));
  if (j >= 2) return FGModule::zero();
  return cohomology(x, FGModule::free(LocalizationRing::integers(), 1), 1 - j);
}

FGModule unitized_homotopy(const SimplicialComplex& x, int j, const FGModule& non_unital) {
  return direct_sum({non_unital, unitization_correction(x, j)});
}

}  // namespace specseq
