#include "specseq/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "specseq/parallel.hpp"

namespace specseq {

std::string Bidegree::to_string() const {
  return (p == 0 ? std::string("0") : "-" + std::to_string(p)) + "," + std::to_string(q);
}

Bidegree Bidegree::parse(const std::string& key) {
  auto fail = [&] { return Error(ErrorCode::InvalidInput, "malformed bidegree key '" + key + "'"); };
  auto comma = key.find(',');
  if (comma == std::string::npos) throw fail();
  int a = 0, q = 0;
  const char* begin = key.data();
  const char* mid = begin + comma;
  const char* end = begin + key.size();
  auto r1 = std::from_chars(begin, mid, a);
  auto r2 = std::from_chars(mid + 1, end, q);
  if (r1.ec != std::errc() || r1.ptr != mid || r2.ec != std::errc() || r2.ptr != end || a > 0) throw fail();
  return {-a, q};
}

// ---------------------------------------------------------------------------

SpectralPage::SpectralPage(LocalizationRing ring, int r, int max_p, int q_limit, int n_max)
    : ring_(std::move(ring)), r_(r), max_p_(max_p), q_limit_(q_limit), n_max_(n_max) {
  if (r < 1) throw Error(ErrorCode::InvalidInput, "page index must be at least 1");
  if (max_p < 0 || q_limit < 0) throw Error(ErrorCode::InvalidInput, "negative page window");
  if (n_max < 1) throw Error(ErrorCode::InvalidInput, "degree ceiling must be at least 1");
}

FGModule SpectralPage::entry(Bidegree b) const {
  auto it = entries_.find(b);
  return it == entries_.end() ? FGModule::zero(ring_) : it->second;
}

ModuleHom SpectralPage::differential(Bidegree b) const {
  auto it = differentials_.find(b);
  if (it != differentials_.end()) return it->second;
  return ModuleHom::zero(entry(b), entry(differential_target(b, r_)));
}

SpectralPage SpectralPage::with_entry(Bidegree b, const FGModule& m) const {
  if (!is_defined(b)) throw Error(ErrorCode::BidegreeViolation, "(" + b.to_string() + ") lies outside the page window");
  if (!(m.ring() == ring_))
    throw Error(ErrorCode::ShapeMismatch, "entry over " + m.ring().to_string() + " on a page over " + ring_.to_string());
  SpectralPage out = *this;
  out.final_ = false;
  if (m.is_zero())
    out.entries_.erase(b);
  else
    out.entries_[b] = m;
  out.differentials_.erase(b);
  out.differentials_.erase(differential_source(b, r_));
  return out;
}

SpectralPage SpectralPage::as_final() const {
  if (r_ < std::max(max_p_ + 1, 2))
    throw Error(ErrorCode::NotConverged, "page " + std::to_string(r_) + " precedes the convergence page " +
                                             std::to_string(std::max(max_p_ + 1, 2)));
  SpectralPage out = *this;
  out.final_ = true;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Window {
  int max_p;
  int q_limit;
};

Window page_window(const SimplicialComplex& x, const GradedCoefficientSystem& s, const PageOptions& opts) {
  if (opts.n_max < 1) throw Error(ErrorCode::InvalidInput, "degree ceiling must be at least 1");
  const int max_p = std::max(x.dimension(), 0);
  const int wanted = max_p + opts.n_max;
  if (opts.strict && !s.is_defined(wanted))
    throw Error(ErrorCode::StableRangeExceeded, s.label() + " is only known for q <= " +
                                                    std::to_string(*s.stable_bound()) + ", the page needs q <= " +
                                                    std::to_string(wanted));
  return {max_p, s.defined_up_to(wanted)};
}

}  // namespace

SpectralPage e1_page(const SimplicialComplex& x, const GradedCoefficientSystem& s, const PageOptions& opts) {
  const Window w = page_window(x, s, opts);
  SpectralPage page(s.ring(), 1, w.max_p, w.q_limit, opts.n_max);
  for (int q = 1; q <= w.q_limit; ++q) {
    FGModule g = s.at(q);
    if (g.is_zero()) continue;
    for (int p = 0; p <= x.dimension(); ++p) page = page.with_entry({p, q}, cochain_module(x, g, p).module);
  }
  for (int q = 1; q <= w.q_limit; ++q) {
    FGModule g = s.at(q);
    if (g.is_zero()) continue;
    for (int p = 0; p < x.dimension(); ++p) page = attach_differential(page, {p, q}, coboundary(x, g, p));
  }
  return page;
}

E2Construction e2_with_sections(const SimplicialComplex& x, const GradedCoefficientSystem& s,
                                const PageOptions& opts) {
  const Window w = page_window(x, s, opts);
  // Cohomology depends only on (p, S(q)); compute each distinct pair once.
  std::vector<FGModule> distinct;
  std::map<int, std::size_t> which;
  for (int q = 1; q <= w.q_limit; ++q) {
    FGModule g = s.at(q);
    if (g.is_zero()) continue;
    auto it = std::find(distinct.begin(), distinct.end(), g);
    which[q] = static_cast<std::size_t>(it - distinct.begin());
    if (it == distinct.end()) distinct.push_back(g);
  }
  const int columns = x.dimension() + 1;
  std::vector<std::optional<Subquotient>> computed(distinct.size() * static_cast<std::size_t>(std::max(columns, 0)));
  parallel_for(computed.size(), [&](std::size_t k) {
    const std::size_t g = k / static_cast<std::size_t>(columns);
    const int p = static_cast<int>(k % static_cast<std::size_t>(columns));
    computed[k] = cochain_cohomology(x, distinct[g], p);
  });

  E2Construction out{SpectralPage(s.ring(), 2, w.max_p, w.q_limit, opts.n_max), {}};
  for (const auto& [q, g] : which)
    for (int p = 0; p < columns; ++p) {
      const Subquotient& sq = *computed[g * static_cast<std::size_t>(columns) + static_cast<std::size_t>(p)];
      if (sq.module().is_zero()) continue;
      out.page = out.page.with_entry({p, q}, sq.module());
      out.sections.emplace(Bidegree{p, q}, sq);
    }
  return out;
}

SpectralPage e2_page(const SimplicialComplex& x, const GradedCoefficientSystem& s, const PageOptions& opts) {
  return e2_with_sections(x, s, opts).page;
}

SpectralPage attach_differential(const SpectralPage& page, Bidegree from, Bidegree to, const ModuleHom& d) {
  const int r = page.r();
  if (to != differential_target(from, r))
    throw Error(ErrorCode::BidegreeViolation,
                "d" + std::to_string(r) + " from (" + from.to_string() + ") must land in (" +
                    differential_target(from, r).to_string() + "), not (" + to.to_string() + ")",
                {from.to_string(), to.to_string()});
  if (!page.in_window(from) || !page.in_window(to))
    throw Error(ErrorCode::BidegreeViolation,
                "differential (" + from.to_string() + ") -> (" + to.to_string() + ") leaves the page window",
                {from.to_string(), to.to_string()});
  if (!(d.domain() == page.entry(from)) || !(d.codomain() == page.entry(to)))
    throw Error(ErrorCode::ShapeMismatch, "differential at (" + from.to_string() + ") does not run " +
                                              page.entry(from).to_string() + " -> " + page.entry(to).to_string(),
                {from.to_string()});
  SpectralPage out = page;
  out.final_ = false;
  if (d.is_zero()) {
    out.differentials_.erase(from);
    return out;
  }
  if (!(page.differential(to) * d).is_zero())
    throw Error(ErrorCode::CompositionNonzero,
                "d o d != 0 through (" + from.to_string() + ") -> (" + to.to_string() + ")", {from.to_string()});
  const Bidegree before = differential_source(from, r);
  if (!(d * page.differential(before)).is_zero())
    throw Error(ErrorCode::CompositionNonzero,
                "d o d != 0 through (" + before.to_string() + ") -> (" + from.to_string() + ")",
                {before.to_string()});
  out.differentials_[from] = d;
  return out;
}

SpectralPage attach_differential(const SpectralPage& page, Bidegree from, const ModuleHom& d) {
  return attach_differential(page, from, differential_target(from, page.r()), d);
}

PageTurn turn_page_with_sections(const SpectralPage& page) {
  std::vector<Bidegree> nonzero;
  for (const auto& [b, m] : page.entries()) nonzero.push_back(b);
  std::vector<std::optional<Subquotient>> results(nonzero.size());
  parallel_for(nonzero.size(), [&](std::size_t k) {
    const Bidegree b = nonzero[k];
    results[k] = subquotient(page.differential(differential_source(b, page.r())), page.differential(b));
  });
  PageTurn out{SpectralPage(page.ring(), page.r() + 1, page.max_p(), page.q_limit(), page.n_max()), {}};
  for (std::size_t k = 0; k < nonzero.size(); ++k) {
    if (results[k]->module().is_zero()) continue;
    out.page = out.page.with_entry(nonzero[k], results[k]->module());
    out.sections.emplace(nonzero[k], std::move(*results[k]));
  }
  return out;
}

SpectralPage turn_page(const SpectralPage& page) { return turn_page_with_sections(page).page; }

DifferentialSupplier no_differentials() {
  return [](const SpectralPage& page) { return page; };
}

namespace {

SpectralPage checked_supply(const DifferentialSupplier& supplier, const SpectralPage& page) {
  if (!supplier) return page;
  SpectralPage out = supplier(page);
  if (out.r() != page.r() || out.max_p() != page.max_p() || out.q_limit() != page.q_limit() ||
      !(out.ring() == page.ring()) || out.entries() != page.entries())
    throw Error(ErrorCode::InvalidInput,
                "a differential supplier may only attach differentials (page " + std::to_string(page.r()) + ")");
  return out;
}

int convergence_page(int dim) { return std::max(dim + 1, 2); }

}  // namespace

SpectralPage run_to_convergence(SpectralPage page, int dim, const DifferentialSupplier& supplier) {
  if (std::max(dim, 0) != page.max_p())
    throw Error(ErrorCode::InvalidInput, "dimension " + std::to_string(dim) + " does not match the page's column bound " +
                                             std::to_string(page.max_p()));
  while (page.r() < convergence_page(dim)) page = turn_page(checked_supply(supplier, page));
  return page.as_final();
}

// ---------------------------------------------------------------------------

const std::vector<std::pair<int, FGModule>>& AbutmentReport::pieces(int n) const {
  static const std::vector<std::pair<int, FGModule>> empty;
  auto it = degrees.find(n);
  return it == degrees.end() ? empty : it->second;
}

int AbutmentReport::total_rank(int n) const {
  int sum = 0;
  for (const auto& [p, m] : pieces(n)) sum += m.free_rank();
  return sum;
}

AbutmentReport abutment(const SpectralPage& page) {
  if (!page.is_final()) throw Error(ErrorCode::NotConverged, "page " + std::to_string(page.r()) + " is not certified final");
  AbutmentReport report;
  report.ring = page.ring();
  report.max_degree = std::max(0, std::min(page.n_max(), page.q_limit() - page.max_p()));
  report.extension_status =
      page.ring().is_rationals() ? ExtensionStatus::Split : ExtensionStatus::AssociatedGradedOnly;
  for (int n = 1; n <= report.max_degree; ++n) {
    auto& list = report.degrees[n];
    for (int p = 0; p <= page.max_p(); ++p) {
      FGModule e = page.entry({p, n + p});
      if (!e.is_zero()) list.emplace_back(p, e);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

PageMorphism::PageMorphism(SpectralPage source, SpectralPage target, std::map<Bidegree, ModuleHom> maps)
    : source_(std::move(source)), target_(std::move(target)) {
  if (source_.r() != target_.r())
    throw Error(ErrorCode::ShapeMismatch, "page morphism between pages " + std::to_string(source_.r()) + " and " +
                                              std::to_string(target_.r()));
  for (auto& [b, f] : maps) {
    if (!(f.domain() == source_.entry(b)) || !(f.codomain() == target_.entry(b)))
      throw Error(ErrorCode::ShapeMismatch, "component at (" + b.to_string() + ") does not run between the entries",
                  {b.to_string()});
    if (!f.is_zero()) maps_.emplace(b, std::move(f));
  }
}

PageMorphism PageMorphism::identity(const SpectralPage& page) {
  std::map<Bidegree, ModuleHom> maps;
  for (const auto& [b, m] : page.entries()) maps.emplace(b, ModuleHom::identity(m));
  return PageMorphism(page, page, std::move(maps));
}

ModuleHom PageMorphism::at(Bidegree b) const {
  auto it = maps_.find(b);
  return it == maps_.end() ? ModuleHom::zero(source_.entry(b), target_.entry(b)) : it->second;
}

PageMorphism compose(const PageMorphism& g, const PageMorphism& f) {
  if (!(f.target() == g.source())) throw Error(ErrorCode::ShapeMismatch, "page morphisms do not compose");
  std::map<Bidegree, ModuleHom> maps;
  for (const auto& [b, m] : f.maps()) maps.emplace(b, g.at(b) * m);
  return PageMorphism(f.source(), g.target(), std::move(maps));
}

std::vector<Bidegree> noncommuting_bidegrees(const PageMorphism& m) {
  std::vector<Bidegree> bad;
  const int r = m.source().r();
  for (const auto& [b, e] : m.source().entries()) {
    const Bidegree t = differential_target(b, r);
    if (!(m.target().differential(b) * m.at(b) == m.at(t) * m.source().differential(b))) bad.push_back(b);
  }
  return bad;
}

namespace {

std::vector<std::string> keys(const std::vector<Bidegree>& bs) {
  std::vector<std::string> out;
  for (const auto& b : bs) out.push_back(b.to_string());
  return out;
}

std::string joined(const std::vector<Bidegree>& bs) {
  std::string out;
  for (const auto& b : bs) out += (out.empty() ? "(" : ", (") + b.to_string() + ")";
  return out;
}

}  // namespace

PageMorphism turn_morphism(const PageMorphism& m, const PageTurn& source, const PageTurn& target) {
  if (source.page.r() != m.source().r() + 1 || target.page.r() != m.target().r() + 1)
    throw Error(ErrorCode::ShapeMismatch, "page turns do not follow the morphism's pages");
  if (auto bad = noncommuting_bidegrees(m); !bad.empty())
    throw Error(ErrorCode::NoncommutingDifferentials, "differentials fail naturality at " + joined(bad), keys(bad));
  std::map<Bidegree, ModuleHom> maps;
  for (const auto& [b, from] : source.sections) {
    auto to = target.sections.find(b);
    if (to == target.sections.end()) continue;
    maps.emplace(b, induced_map(from, to->second, m.at(b).matrix()));
  }
  return PageMorphism(source.page, target.page, std::move(maps));
}

PageMorphism page_morphism_from_coefficients(const SimplicialComplex& x, const CoefficientMap& m,
                                             const PageOptions& opts) {
  E2Construction src = e2_with_sections(x, m.source(), opts);
  E2Construction tgt = e2_with_sections(x, m.target(), opts);
  std::map<Bidegree, ModuleHom> maps;
  for (const auto& [b, from] : src.sections) {
    auto to = tgt.sections.find(b);
    if (to == tgt.sections.end()) continue;
    IntMatrix middle = cochain_coefficient_map(x, m.at(b.q), b.p);
    maps.emplace(b, induced_map(from, to->second, middle));
  }
  return PageMorphism(src.page, tgt.page, std::move(maps));
}

PageMorphism page_morphism_from_map(const SimplicialMap& f, const GradedCoefficientSystem& s,
                                    const PageOptions& opts) {
  E2Construction src = e2_with_sections(f.target(), s, opts);
  E2Construction tgt = e2_with_sections(f.source(), s, opts);
  std::map<Bidegree, ModuleHom> maps;
  for (const auto& [b, from] : src.sections) {
    auto to = tgt.sections.find(b);
    if (to == tgt.sections.end()) continue;
    const FGModule g = s.at(b.q);
    IntMatrix pullback = tensor_with_identity(f.cochain_matrix(b.p), cochain_module(f.source(), g, b.p),
                                              cochain_module(f.target(), g, b.p), g);
    maps.emplace(b, induced_map(from, to->second, pullback));
  }
  return PageMorphism(src.page, tgt.page, std::move(maps));
}

bool is_isomorphism_at(const PageMorphism& m, Bidegree b) {
  const bool in_source = m.source().in_window(b);
  const bool in_target = m.target().in_window(b);
  if (in_source && in_target) return is_isomorphism(m.at(b));
  if (in_source) return m.source().entry(b).is_zero();
  if (in_target) return m.target().entry(b).is_zero();
  return true;
}

std::string to_string(ComparisonVerdict::Status s) {
  return s == ComparisonVerdict::Status::IsoOnAbutmentGraded ? "ISO_ON_ABUTMENT_GRADED" : "NOT_ISO_AT_E2";
}

namespace {

std::vector<Bidegree> failing_bidegrees(const PageMorphism& m) {
  const int max_p = std::max(m.source().max_p(), m.target().max_p());
  const int q_limit = std::max(m.source().q_limit(), m.target().q_limit());
  std::vector<Bidegree> failing;
  for (int p = 0; p <= max_p; ++p)
    for (int q = 1; q <= q_limit; ++q)
      if (!is_isomorphism_at(m, {p, q})) failing.push_back({p, q});
  return failing;
}

}  // namespace

ComparisonVerdict comparison_verdict(const PageMorphism& m, int dim, const DifferentialSupplier& source_supplier,
                                     const DifferentialSupplier& target_supplier) {
  if (std::max(dim, 0) < std::max(m.source().max_p(), m.target().max_p()))
    throw Error(ErrorCode::InvalidInput, "dimension " + std::to_string(dim) + " is below the pages' column bound");
  ComparisonVerdict verdict;
  verdict.failing = failing_bidegrees(m);
  if (!verdict.failing.empty()) {
    verdict.status = ComparisonVerdict::Status::NotIsoAtE2;
    return verdict;
  }
  PageMorphism current = m;
  while (current.source().r() < convergence_page(dim)) {
    SpectralPage src = checked_supply(source_supplier, current.source());
    SpectralPage tgt = checked_supply(target_supplier, current.target());
    current = PageMorphism(src, tgt, current.maps());
    current = turn_morphism(current, turn_page_with_sections(src), turn_page_with_sections(tgt));
  }
  SpectralPage src = current.source().as_final();
  SpectralPage tgt = current.target().as_final();
  verdict.status = ComparisonVerdict::Status::IsoOnAbutmentGraded;
  verdict.source_report = abutment(src);
  verdict.target_report = abutment(tgt);
  verdict.infinity_iso = failing_bidegrees(current).empty();
  return verdict;
}

}  // namespace specseq
