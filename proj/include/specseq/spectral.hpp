#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specseq/abelian.hpp"
#include "specseq/coefficients.hpp"
#include "specseq/simplicial.hpp"

namespace specseq {

/// Position (-p, q) in the second quadrant; total degree q - p.
struct Bidegree {
  int p = 0;
  int q = 0;

  int total_degree() const { return q - p; }
  /// "-p,q" (p = 0 renders as "0,q").
  std::string to_string() const;
  /// Inverse of to_string; throws InvalidInput.
  static Bidegree parse(const std::string& key);

  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

/// Where d^r starting at b lands: (-p-r, q+r-1).
inline Bidegree differential_target(Bidegree b, int r) { return {b.p + r, b.q + r - 1}; }
/// Where d^r ending at b starts.
inline Bidegree differential_source(Bidegree b, int r) { return {b.p - r, b.q - r + 1}; }

/// One page E^r of a second-quadrant spectral sequence over a localization
/// of Z. Entries are stored for 0 <= p <= max_p and 1 <= q <= q_limit; zero
/// entries are omitted. Values are immutable: every operation returns a new
/// page.
class SpectralPage {
 public:
  SpectralPage() = default;
  /// n_max is the reporting ceiling on total degree.
  SpectralPage(LocalizationRing ring, int r, int max_p, int q_limit, int n_max);

  const LocalizationRing& ring() const { return ring_; }
  int r() const { return r_; }
  int max_p() const { return max_p_; }
  int q_limit() const { return q_limit_; }
  int n_max() const { return n_max_; }
  bool is_final() const { return final_; }

  const std::map<Bidegree, FGModule>& entries() const { return entries_; }
  const std::map<Bidegree, ModuleHom>& differentials() const { return differentials_; }

  /// Inside the materialized window (entries beyond max_p are zero, beyond
  /// q_limit unknown).
  bool is_defined(Bidegree b) const { return b.p >= 0 && b.p <= max_p_ && b.q >= 1 && b.q <= q_limit_; }
  bool in_window(Bidegree b) const { return b.p >= 0 && b.q >= 1 && b.q <= q_limit_; }
  FGModule entry(Bidegree b) const;
  /// Attached d^r at b, or the zero map into the law's target.
  ModuleHom differential(Bidegree b) const;

  /// Builder used by page constructors and loaders; throws
  /// BidegreeViolation outside the window and ShapeMismatch on ring mismatch.
  SpectralPage with_entry(Bidegree b, const FGModule& m) const;
  /// Certifies the page as E^infinity; throws NotConverged unless
  /// r >= max(max_p + 1, 2).
  SpectralPage as_final() const;

  friend bool operator==(const SpectralPage&, const SpectralPage&) = default;

 private:
  friend SpectralPage attach_differential(const SpectralPage&, Bidegree, Bidegree, const ModuleHom&);

  LocalizationRing ring_;
  int r_ = 1;
  int max_p_ = 0;
  int q_limit_ = 0;
  int n_max_ = 12;
  bool final_ = false;
  std::map<Bidegree, FGModule> entries_;
  std::map<Bidegree, ModuleHom> differentials_;
};

struct PageOptions {
  /// Degree ceiling: reports cover total degrees 1..n_max.
  int n_max = 12;
  /// When set, a coefficient system that stops short of the window raises
  /// StableRangeExceeded instead of truncating the page.
  bool strict = false;
};

/// E^1_{-p,q} = C^p(X; S(q)), d^1 the coboundary tensored with S(q).
SpectralPage e1_page(const SimplicialComplex& x, const GradedCoefficientSystem& s, const PageOptions& opts = {});

/// E^2 together with the cocycle data of each entry.
struct E2Construction {
  SpectralPage page;
  std::map<Bidegree, Subquotient> sections;
};
E2Construction e2_with_sections(const SimplicialComplex& x, const GradedCoefficientSystem& s,
                                const PageOptions& opts = {});
/// E^2_{-p,q} = H^p(X; S(q)); no differentials attached.
SpectralPage e2_page(const SimplicialComplex& x, const GradedCoefficientSystem& s, const PageOptions& opts = {});

/// Records d^r : from -> to. Throws BidegreeViolation unless `to` is
/// (-p-r, q+r-1) inside the window, ShapeMismatch unless d runs between the
/// two entries, CompositionNonzero when d o d != 0 against a neighbour.
/// Zero maps leave the page unchanged.
SpectralPage attach_differential(const SpectralPage& page, Bidegree from, Bidegree to, const ModuleHom& d);
SpectralPage attach_differential(const SpectralPage& page, Bidegree from, const ModuleHom& d);

/// E^{r+1} with the subquotient data of every nonzero entry.
struct PageTurn {
  SpectralPage page;
  std::map<Bidegree, Subquotient> sections;
};
PageTurn turn_page_with_sections(const SpectralPage& page);
/// ker d^r / im d^r at every bidegree; missing differentials count as zero.
SpectralPage turn_page(const SpectralPage& page);

/// Attaches the differentials of the given page (may return it unchanged).
using DifferentialSupplier = std::function<SpectralPage(const SpectralPage&)>;
DifferentialSupplier no_differentials();

/// Turns pages until r = max(dim + 1, 2) and certifies the result as
/// E^infinity. Requires dim == page.max_p().
SpectralPage run_to_convergence(SpectralPage page, int dim, const DifferentialSupplier& supplier = no_differentials());

enum class ExtensionStatus { Split, AssociatedGradedOnly };

/// Associated graded of the abutment per total degree n >= 1.
struct AbutmentReport {
  LocalizationRing ring;
  /// Highest reported total degree (entries above it fall outside the window).
  int max_degree = 0;
  /// n -> [(p, E^inf_{-p,n+p})] in increasing p, zero pieces omitted.
  std::map<int, std::vector<std::pair<int, FGModule>>> degrees;
  ExtensionStatus extension_status = ExtensionStatus::AssociatedGradedOnly;

  const std::vector<std::pair<int, FGModule>>& pieces(int n) const;
  /// Sum of free ranks of the pieces in degree n.
  int total_rank(int n) const;

  friend bool operator==(const AbutmentReport&, const AbutmentReport&) = default;
};

/// Throws NotConverged unless the page is certified final.
AbutmentReport abutment(const SpectralPage& page);

/// Entrywise maps between two pages with the same r.
class PageMorphism {
 public:
  PageMorphism() = default;
  /// Throws ShapeMismatch when r differs or a map does not run between the
  /// corresponding entries.
  PageMorphism(SpectralPage source, SpectralPage target, std::map<Bidegree, ModuleHom> maps);

  static PageMorphism identity(const SpectralPage& page);

  const SpectralPage& source() const { return source_; }
  const SpectralPage& target() const { return target_; }
  const std::map<Bidegree, ModuleHom>& maps() const { return maps_; }
  /// Component at b (zero when absent).
  ModuleHom at(Bidegree b) const;

 private:
  SpectralPage source_;
  SpectralPage target_;
  std::map<Bidegree, ModuleHom> maps_;
};

/// g o f; both must pass through the same middle page.
PageMorphism compose(const PageMorphism& g, const PageMorphism& f);

/// Bidegrees b where d_target(b) o m(b) != m(target of b) o d_source(b).
std::vector<Bidegree> noncommuting_bidegrees(const PageMorphism& m);

/// Map induced on the next pages; the turns must come from m's pages.
PageMorphism turn_morphism(const PageMorphism& m, const PageTurn& source, const PageTurn& target);

/// E^2(X; S) -> E^2(X; S') induced by a coefficient map (covariant).
PageMorphism page_morphism_from_coefficients(const SimplicialComplex& x, const CoefficientMap& m,
                                             const PageOptions& opts = {});
/// E^2(target; S) -> E^2(source; S) induced by f (contravariant).
PageMorphism page_morphism_from_map(const SimplicialMap& f, const GradedCoefficientSystem& s,
                                    const PageOptions& opts = {});

/// Classification at one bidegree of an E^2 morphism: an isomorphism where
/// both pages are defined; where only one page is defined, its entry must
/// vanish.
bool is_isomorphism_at(const PageMorphism& m, Bidegree b);

struct ComparisonVerdict {
  enum class Status { IsoOnAbutmentGraded, NotIsoAtE2 };
  Status status = Status::NotIsoAtE2;
  std::vector<Bidegree> failing;
  std::optional<AbutmentReport> source_report;
  std::optional<AbutmentReport> target_report;
  /// The induced map on E^infinity, checked entrywise.
  bool infinity_iso = false;
};

std::string to_string(ComparisonVerdict::Status s);

/// Comparison theorem: when m is an isomorphism at E^2 and the supplied
/// differentials commute with it on every page, both sides converge with
/// isomorphic associated graded pieces. Throws NoncommutingDifferentials.
ComparisonVerdict comparison_verdict(const PageMorphism& m, int dim, const DifferentialSupplier& source_supplier,
                                     const DifferentialSupplier& target_supplier);

}  // namespace specseq
