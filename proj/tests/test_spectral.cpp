#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "oracles.hpp"
#include "specseq/spectral.hpp"

using namespace specseq;

namespace {

const LocalizationRing Z = LocalizationRing::integers();
const LocalizationRing Q = LocalizationRing::rationals();
const FGModule z = FGModule::free(Z, 1);

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidInput;
}

ModuleHom times(long k) { return ModuleHom(z, z, int_matrix({{k}})); }

// E^2 with Z at (0,2) and (-2,3).
SpectralPage two_dots() {
  return SpectralPage(Z, 2, 2, 4, 12).with_entry({0, 2}, z).with_entry({2, 3}, z);
}

// Attaches the given maps on page r and nothing elsewhere.
DifferentialSupplier fixed(int r, std::map<Bidegree, ModuleHom> maps) {
  return [r, maps = std::move(maps)](const SpectralPage& page) {
    if (page.r() != r) return page;
    SpectralPage out = page;
    for (const auto& [b, d] : maps) out = attach_differential(out, b, d);
    return out;
  };
}

void require_page_invariants(const SpectralPage& page) {
  for (const auto& [b, d] : page.differentials()) {
    const Bidegree t = differential_target(b, page.r());
    REQUIRE(d.domain() == page.entry(b));
    REQUIRE(d.codomain() == page.entry(t));
    REQUIRE(compose(page.differential(t), d).is_zero());
    REQUIRE(compose(d, page.differential(differential_source(b, page.r()))).is_zero());
  }
}

}  // namespace

TEST_CASE("bidegree keys", "[spectral]") {
  CHECK(Bidegree{2, 3}.to_string() == "-2,3");
  CHECK(Bidegree{0, 1}.to_string() == "0,1");
  CHECK(Bidegree::parse("-2,3") == Bidegree{2, 3});
  CHECK(Bidegree::parse("0,5") == Bidegree{0, 5});
  CHECK(Bidegree{2, 3}.total_degree() == 1);
  CHECK(differential_target({0, 2}, 2) == Bidegree{2, 3});
  CHECK(differential_source({2, 3}, 2) == Bidegree{0, 2});
  for (const char* bad : {"2,3", "-2", "x,1", "-2,3,4", ""})
    CHECK(code_of([&] { Bidegree::parse(bad); }) == ErrorCode::InvalidInput);
}

TEST_CASE("page construction", "[spectral]") {
  const SpectralPage page = two_dots();
  CHECK(page.entry({0, 2}) == z);
  CHECK(page.entry({1, 2}).is_zero());
  CHECK(page.entry({9, 3}).is_zero());
  CHECK(code_of([&] { page.with_entry({0, 5}, z); }) == ErrorCode::BidegreeViolation);
  CHECK(code_of([&] { page.with_entry({3, 1}, z); }) == ErrorCode::BidegreeViolation);
  CHECK(code_of([&] { page.with_entry({0, 1}, FGModule::free(Q, 1)); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { page.as_final(); }) == ErrorCode::NotConverged);
  CHECK(code_of([] { SpectralPage(Z, 0, 1, 1, 12); }) == ErrorCode::InvalidInput);
  CHECK(page.with_entry({0, 2}, FGModule::zero()).entries().size() == 1);
}

TEST_CASE("E1 pages", "[spectral]") {
  const auto gl1 = builtin("gl1-complex");
  const SpectralPage point = e1_page(fixtures::point(), gl1);
  CHECK(point.r() == 1);
  CHECK(point.entries() == std::map<Bidegree, FGModule>{{{0, 1}, z}});

  const auto sphere = fixtures::sphere();
  const SpectralPage e1 = e1_page(sphere, gl1);
  CHECK(e1.entry({0, 1}) == FGModule::free(Z, 4));
  CHECK(e1.entry({1, 1}) == FGModule::free(Z, 6));
  CHECK(e1.entry({2, 1}) == FGModule::free(Z, 4));
  CHECK(e1.entries().size() == 3);
  CHECK(e1.differential({0, 1}).matrix() == coboundary_matrix(sphere, 0));
  CHECK(e1.differential({1, 1}).matrix() == coboundary_matrix(sphere, 1));

  CHECK(e1_page(fixtures::torus(), builtin("zero")).entries().empty());
}

TEST_CASE("d1 is the cellular coboundary and E2 is its cohomology", "[spectral][property]") {
  gen::Rng rng(31);
  const std::vector<GradedCoefficientSystem> systems{
      builtin("ku-stable"), builtin("ko-stable"),
      GradedCoefficientSystem("mixed", Z, {{1, FGModule::from_orders(Z, 1, {2})}, {2, FGModule::cyclic(Z, 4)}})};
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = gen::complex(rng, std::uniform_int_distribution<int>(2, 5)(rng), 2);
    const auto& s = systems[static_cast<std::size_t>(trial) % systems.size()];
    const PageOptions opts{4, false};
    const SpectralPage e1 = e1_page(x, s, opts);
    for (int p = 0; p <= x.dimension(); ++p)
      for (int q = 1; q <= e1.q_limit(); ++q)
        REQUIRE(e1.differential({p, q}) == coboundary(x, s.at(q), p));
    const SpectralPage turned = turn_page(e1);
    const SpectralPage e2 = e2_page(x, s, opts);
    REQUIRE(turned.r() == 2);
    REQUIRE(turned.entries() == e2.entries());
    for (const auto& [b, m] : e2.entries()) REQUIRE(m == cohomology(x, s.at(b.q), b.p));
  }
}

TEST_CASE("E2 examples", "[spectral]") {
  const auto sphere = fixtures::sphere();
  const SpectralPage gl1 = e2_page(sphere, builtin("gl1-complex"));
  CHECK(gl1.entries() == std::map<Bidegree, FGModule>{{{0, 1}, z}, {{2, 1}, z}});

  const SpectralPage ku = e2_page(sphere, builtin("ku-stable"));
  for (int q = 1; q <= ku.q_limit(); ++q)
    for (int p = 0; p <= 2; ++p) {
      const bool nonzero = q % 2 == 1 && p != 1;
      CHECK(ku.entry({p, q}) == (nonzero ? z : FGModule::zero()));
    }
  CHECK(ku.differentials().empty());

  const SpectralPage rp2 = e2_page(fixtures::rp2(), builtin("ku-stable"));
  for (int q = 1; q <= rp2.q_limit(); q += 2) {
    CHECK(rp2.entry({2, q}) == FGModule::cyclic(Z, 2));
    CHECK(rp2.entry({0, q}) == z);
    CHECK(rp2.entry({1, q}).is_zero());
  }
}

TEST_CASE("bounded systems: truncated window or strict refusal", "[spectral]") {
  const auto u2 = builtin("unitary-2");
  const SpectralPage page = e2_page(fixtures::sphere(), u2);
  CHECK(page.q_limit() == 3);
  CHECK(page.entry({2, 3}) == z);
  CHECK(code_of([&] { e2_page(fixtures::sphere(), u2, {12, true}); }) == ErrorCode::StableRangeExceeded);
  CHECK_NOTHROW(e2_page(fixtures::point(), builtin("unitary-7"), {12, true}));
}

TEST_CASE("attaching differentials", "[spectral]") {
  const SpectralPage page = two_dots();
  CHECK(attach_differential(page, {0, 2}, ModuleHom::zero(z, z)) == page);
  const SpectralPage doubled = attach_differential(page, {0, 2}, times(2));
  CHECK(doubled.differential({0, 2}) == times(2));
  CHECK(code_of([&] { attach_differential(page, {0, 2}, {1, 3}, times(2)); }) == ErrorCode::BidegreeViolation);
  CHECK(code_of([&] { attach_differential(page, {0, 2}, {2, 3}, ModuleHom::identity(FGModule::free(Z, 2))); }) ==
        ErrorCode::ShapeMismatch);
  // d^2 at (0,3) would leave the window q <= 4
  CHECK(code_of([&] { attach_differential(page.with_entry({0, 4}, z), {0, 4}, ModuleHom::zero(z, FGModule::zero())); }) ==
        ErrorCode::BidegreeViolation);

  // a chain Z -> Z -> Z with both maps nonzero fails d o d = 0
  const SpectralPage chain = SpectralPage(Z, 2, 4, 5, 12).with_entry({0, 1}, z).with_entry({2, 2}, z).with_entry({4, 3}, z);
  const SpectralPage first = attach_differential(chain, {0, 1}, times(1));
  CHECK(code_of([&] { attach_differential(first, {2, 2}, times(3)); }) == ErrorCode::CompositionNonzero);
  const SpectralPage second = attach_differential(chain, {2, 2}, times(3));
  CHECK(code_of([&] { attach_differential(second, {0, 1}, times(1)); }) == ErrorCode::CompositionNonzero);
}

TEST_CASE("turning pages", "[spectral]") {
  const SpectralPage page = two_dots();
  const SpectralPage same = turn_page(page);
  CHECK(same.r() == 3);
  CHECK(same.entries() == page.entries());

  const SpectralPage doubled = turn_page(attach_differential(page, {0, 2}, times(2)));
  CHECK(doubled.entry({0, 2}).is_zero());
  CHECK(doubled.entry({2, 3}) == FGModule::cyclic(Z, 2));
  CHECK(doubled.differentials().empty());

  const SpectralPage killed = turn_page(attach_differential(page, {0, 2}, times(-1)));
  CHECK(killed.entries().empty());
}

TEST_CASE("run_to_convergence and abutment", "[spectral]") {
  const SpectralPage e2 = e2_page(fixtures::sphere(), builtin("ku-stable"));
  const SpectralPage e3 = run_to_convergence(e2, 2);
  CHECK(e3.r() == 3);
  CHECK(e3.is_final());
  CHECK(e3.entries() == e2.entries());
  CHECK(code_of([&] { run_to_convergence(e2, 1); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { abutment(e2); }) == ErrorCode::NotConverged);

  const SpectralPage point = run_to_convergence(e2_page(fixtures::point(), builtin("ku-stable")), 0);
  CHECK(point.r() == 2);
  CHECK(point.is_final());

  const AbutmentReport ku = abutment(e3);
  CHECK(ku.pieces(1) == std::vector<std::pair<int, FGModule>>{{0, z}, {2, z}});
  CHECK(ku.pieces(2).empty());
  CHECK(ku.extension_status == ExtensionStatus::AssociatedGradedOnly);
  CHECK(ku.max_degree == 12);

  const AbutmentReport gl1 = abutment(run_to_convergence(e2_page(fixtures::sphere(), builtin("gl1-complex")), 2));
  CHECK(gl1.pieces(1) == std::vector<std::pair<int, FGModule>>{{0, z}});
  for (int n = 2; n <= 12; ++n) CHECK(gl1.pieces(n).empty());

  const SpectralPage q = e2_page(fixtures::torus(), localize_system(builtin("ku-stable"), Q));
  CHECK(abutment(run_to_convergence(q, 2)).extension_status == ExtensionStatus::Split);
}

TEST_CASE("supplied differentials change the abutment", "[spectral]") {
  const SpectralPage e2 = e2_page(fixtures::sphere(), builtin("ku-stable"));
  // every d^2 out of column 0 lands in an even row of column 2, which is zero
  CHECK(code_of([&] { attach_differential(e2, {0, 1}, times(2)); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { attach_differential(e2, {0, 3}, times(2)); }) == ErrorCode::ShapeMismatch);

  const SpectralPage odd = run_to_convergence(e2.with_entry({0, 2}, z), 2, fixed(2, {{{0, 2}, times(2)}}));
  CHECK(odd.entry({0, 2}).is_zero());
  CHECK(odd.entry({2, 3}) == FGModule::cyclic(Z, 2));
  CHECK(odd.entry({0, 3}) == z);
  CHECK(abutment(odd).pieces(1) == std::vector<std::pair<int, FGModule>>{{0, z}, {2, FGModule::cyclic(Z, 2)}});

  const DifferentialSupplier rewrites = [](const SpectralPage& p) { return p.with_entry({1, 1}, z); };
  CHECK(code_of([&] { run_to_convergence(e2, 2, rewrites); }) == ErrorCode::InvalidInput);
}

TEST_CASE("random pages keep the bidegree law and d o d = 0", "[spectral][property]") {
  gen::Rng rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    const int max_p = std::uniform_int_distribution<int>(1, 4)(rng);
    SpectralPage page = gen::with_random_differentials(rng, gen::page(rng, max_p, 6));
    require_page_invariants(page);
    while (page.r() <= max_p) {
      const SpectralPage next = turn_page(page);
      for (const auto& [b, m] : next.entries()) REQUIRE(m.free_rank() <= page.entry(b).free_rank());
      for (const auto& [b, m] : page.entries())
        if (page.differential(b).is_zero() && page.differential(differential_source(b, page.r())).is_zero())
          REQUIRE(next.entry(b) == m);
      page = gen::with_random_differentials(rng, next);
      require_page_invariants(page);
    }
    // past column range every differential leaves the page: turning is the identity
    REQUIRE(page.r() == max_p + 1);
    for (int k = 0; k < 3; ++k) {
      const SpectralPage next = turn_page(page);
      REQUIRE(next.entries() == page.entries());
      page = gen::with_random_differentials(rng, next);
      REQUIRE(page.differentials().empty());
    }
  }
}

TEST_CASE("rationalized page equals page of rationalized coefficients", "[spectral][property]") {
  gen::Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = gen::complex(rng, std::uniform_int_distribution<int>(2, 5)(rng), 2);
    std::map<int, FGModule> groups;
    for (int q = 1; q <= 4; ++q) groups[q] = gen::module(rng);
    const GradedCoefficientSystem s("random", Z, groups);
    const PageOptions opts{5, false};
    const SpectralPage integral = e2_page(x, s, opts);
    const SpectralPage rational = e2_page(x, localize_system(s, Q), opts);
    for (int p = 0; p <= integral.max_p(); ++p)
      for (int q = 1; q <= integral.q_limit(); ++q) {
        REQUIRE(rational.entry({p, q}) == tensor_localize(integral.entry({p, q}), Q));
        REQUIRE(rational.entry({p, q}).free_rank() == integral.entry({p, q}).free_rank());
      }
  }
}

TEST_CASE("page morphism examples", "[spectral]") {
  const auto sphere = fixtures::sphere();
  const auto ku = builtin("ku-stable");
  const PageMorphism id = page_morphism_from_coefficients(sphere, CoefficientMap::identity(ku, 14));
  for (const auto& [b, m] : id.source().entries()) CHECK(id.at(b) == ModuleHom::identity(m));

  const auto gl1 = builtin("gl1-complex");
  const PageMorphism inclusion = page_morphism_from_coefficients(sphere, CoefficientMap::canonical(gl1, ku, 14));
  CHECK(is_isomorphism_at(inclusion, {0, 1}));
  CHECK(is_isomorphism_at(inclusion, {2, 1}));
  CHECK_FALSE(is_isomorphism_at(inclusion, {0, 3}));
  CHECK(inclusion.at({0, 3}).is_zero());

  const PageMorphism collapse = page_morphism_from_map(SimplicialMap::to_point(sphere), ku);
  CHECK(collapse.source().max_p() == 0);
  CHECK(collapse.target().max_p() == 2);
  for (const auto& [b, m] : collapse.maps()) CHECK(b.p == 0);
  CHECK(is_isomorphism(collapse.at({0, 1})));

  const PageMorphism cover = page_morphism_from_map(fixtures::double_cover(), gl1);
  CHECK(cokernel(cover.at({1, 1})) == FGModule::cyclic(Z, 2));

  CHECK(code_of([&] { PageMorphism(two_dots(), two_dots(), {{{0, 2}, ModuleHom::identity(FGModule::free(Z, 2))}}); }) ==
        ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { PageMorphism(two_dots(), turn_page(two_dots()), {}); }) == ErrorCode::ShapeMismatch);
  const PageMorphism twice = compose(id, id);
  CHECK(twice.maps() == id.maps());
}

TEST_CASE("comparison verdict examples", "[spectral]") {
  const SpectralPage page = two_dots();
  const auto identity = PageMorphism::identity(page);
  const auto iso = comparison_verdict(identity, 2, no_differentials(), no_differentials());
  CHECK(iso.status == ComparisonVerdict::Status::IsoOnAbutmentGraded);
  CHECK(iso.infinity_iso);
  CHECK(iso.source_report == iso.target_report);
  CHECK(to_string(iso.status) == "ISO_ON_ABUTMENT_GRADED");

  const PageMorphism dead(page, page, {{{2, 3}, ModuleHom::identity(z)}});
  const auto fail = comparison_verdict(dead, 2, no_differentials(), no_differentials());
  CHECK(fail.status == ComparisonVerdict::Status::NotIsoAtE2);
  CHECK(fail.failing == std::vector<Bidegree>{{0, 2}});
  CHECK_FALSE(fail.source_report);
  CHECK(to_string(fail.status) == "NOT_ISO_AT_E2");

  const auto doubling = fixed(2, {{{0, 2}, times(2)}});
  const auto matched = comparison_verdict(identity, 2, doubling, doubling);
  CHECK(matched.status == ComparisonVerdict::Status::IsoOnAbutmentGraded);
  CHECK(matched.infinity_iso);
  CHECK(matched.source_report->pieces(1) == std::vector<std::pair<int, FGModule>>{{2, FGModule::cyclic(Z, 2)}});

  // the automorphism -1 at (0,2) needs the target differential -2 to commute
  const PageMorphism flip(page, page, {{{0, 2}, times(-1)}, {{2, 3}, ModuleHom::identity(z)}});
  CHECK(comparison_verdict(flip, 2, doubling, fixed(2, {{{0, 2}, times(-2)}})).infinity_iso);
  try {
    comparison_verdict(identity, 2, doubling, fixed(2, {{{0, 2}, times(4)}}));
    FAIL("expected NONCOMMUTING_DIFFERENTIALS");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoncommutingDifferentials);
    CHECK(e.details() == std::vector<std::string>{"0,2"});
  }
}

TEST_CASE("noncommuting bidegrees and turned morphisms", "[spectral]") {
  const SpectralPage a = attach_differential(two_dots(), {0, 2}, times(2));
  const SpectralPage b = attach_differential(two_dots(), {0, 2}, times(6));
  const PageMorphism triple(a, b, {{{0, 2}, ModuleHom::identity(z)}, {{2, 3}, times(3)}});
  CHECK(noncommuting_bidegrees(triple).empty());
  const PageMorphism turned = turn_morphism(triple, turn_page_with_sections(a), turn_page_with_sections(b));
  // Z/2 -> Z/6 induced by x -> 3x
  CHECK(turned.source().entry({2, 3}) == FGModule::cyclic(Z, 2));
  CHECK(turned.target().entry({2, 3}) == FGModule::from_orders(Z, 0, {6}));
  CHECK_FALSE(turned.at({2, 3}).is_zero());
  const PageMorphism wrong(a, b, {{{0, 2}, ModuleHom::identity(z)}, {{2, 3}, ModuleHom::identity(z)}});
  CHECK(noncommuting_bidegrees(wrong) == std::vector<Bidegree>{{0, 2}});
  CHECK(code_of([&] { turn_morphism(wrong, turn_page_with_sections(a), turn_page_with_sections(b)); }) ==
        ErrorCode::NoncommutingDifferentials);
}

TEST_CASE("comparison is ISO under its hypothesis on random pages", "[spectral][property]") {
  gen::Rng rng(34);
  int nontrivial = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int max_p = std::uniform_int_distribution<int>(1, 3)(rng);
    const SpectralPage base = gen::page(rng, max_p, 6);
    const SpectralPage with_d = gen::with_random_differentials(rng, base);
    std::map<Bidegree, ModuleHom> phi;
    for (const auto& [b, m] : base.entries()) phi[b] = gen::automorphism(rng, m);
    auto phi_at = [&](Bidegree b) {
      auto it = phi.find(b);
      return it == phi.end() ? ModuleHom::identity(base.entry(b)) : it->second;
    };
    // target differentials: phi(t) d phi(b)^-1, so the square commutes
    std::map<Bidegree, ModuleHom> source_d, target_d;
    for (const auto& [b, d] : with_d.differentials()) {
      source_d[b] = d;
      target_d[b] = compose(phi_at(differential_target(b, 2)), compose(d, inverse(phi_at(b))));
    }
    nontrivial += source_d.empty() ? 0 : 1;
    const PageMorphism m(base, base, phi);
    const auto source_supplier = fixed(2, source_d), target_supplier = fixed(2, target_d);
    const auto verdict = comparison_verdict(m, max_p, source_supplier, target_supplier);
    REQUIRE(verdict.status == ComparisonVerdict::Status::IsoOnAbutmentGraded);
    REQUIRE(verdict.infinity_iso);
    // both sides computed directly
    const auto direct_source = abutment(run_to_convergence(base, max_p, source_supplier));
    const auto direct_target = abutment(run_to_convergence(base, max_p, target_supplier));
    REQUIRE(*verdict.source_report == direct_source);
    REQUIRE(*verdict.target_report == direct_target);
    REQUIRE(direct_source == direct_target);
  }
  CHECK(nontrivial >= 15);
}

TEST_CASE("parallel and serial page construction agree", "[spectral]") {
  const auto x = fixtures::torus();
  const auto s = builtin("ko-stable");
  setenv("SPECSEQ_THREADS", "1", 1);
  const SpectralPage serial = e2_page(x, s);
  setenv("SPECSEQ_THREADS", "4", 1);
  const SpectralPage parallel = e2_page(x, s);
  unsetenv("SPECSEQ_THREADS");
  CHECK(serial == parallel);
}
