#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "specseq/json_io.hpp"

namespace specseq::cli {

namespace {

using json::Json;

struct Options {
  std::string complex;
  std::string system;
  std::string stable_system = "ku-stable";
  std::string comparison;
  std::string ring = "Z";
  std::string coeff = "Z";
  std::string differentials;
  std::string stable_differentials;
  std::string tower;
  std::optional<int> degree;
  int n_max = 12;
  int stages = 6;
  int j = 0;
  bool as_json = false;
  bool ack_hspace = false;
  bool strict = false;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json load(const std::string& path) {
  try {
    return json::read_file(path);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) throw;
    throw IoError(e.what());
  }
}

SimplicialComplex load_complex(const std::string& where) {
  if (where.empty()) throw IoError("--complex is required");
  if (std::filesystem::exists(where)) return json::decode_complex(load(where));
  auto names = fixtures::names();
  if (std::find(names.begin(), names.end(), where) != names.end()) return fixtures::by_name(where);
  throw IoError("cannot open complex '" + where + "'");
}

GradedCoefficientSystem load_system(const std::string& where) {
  if (where.empty()) throw IoError("--system is required");
  if (std::filesystem::exists(where)) return json::decode_system(load(where));
  return builtin(where);
}

std::string cell(const FGModule& m) { return m.to_string(); }

void render_page(std::ostream& out, const SpectralPage& page, const std::string& title) {
  out << title << " over " << page.ring().to_string() << ", r = " << page.r() << ", 0 <= p <= " << page.max_p()
      << ", 1 <= q <= " << page.q_limit() << (page.is_final() ? " (final)" : "") << "\n";
  if (page.entries().empty()) {
    out << "all entries zero\n";
    return;
  }
  std::vector<int> rows;
  for (int q = page.q_limit(); q >= 1; --q)
    for (int p = 0; p <= page.max_p(); ++p)
      if (!page.entry({p, q}).is_zero()) {
        rows.push_back(q);
        break;
      }
  std::size_t width = 4;
  for (const auto& [b, m] : page.entries()) width = std::max(width, cell(m).size());
  const std::size_t label = std::max<std::size_t>(4, std::to_string(page.q_limit()).size() + 2);
  out << std::setw(static_cast<int>(label)) << "q";
  for (int p = page.max_p(); p >= 0; --p)
    out << " | " << std::setw(static_cast<int>(width)) << (p == 0 ? std::string("0") : "-" + std::to_string(p));
  out << "\n";
  for (int q : rows) {
    out << std::setw(static_cast<int>(label)) << q;
    for (int p = page.max_p(); p >= 0; --p) out << " | " << std::setw(static_cast<int>(width)) << cell(page.entry({p, q}));
    out << "\n";
  }
  for (const auto& [b, d] : page.differentials())
    out << "d" << page.r() << " (" << b.to_string() << ") -> (" << differential_target(b, page.r()).to_string()
        << ") = " << to_string(d.matrix()) << "\n";
}

void render_report(std::ostream& out, const AbutmentReport& report) {
  out << "abutment over " << report.ring.to_string() << ", "
      << (report.extension_status == ExtensionStatus::Split ? "split" : "associated graded only") << "\n";
  for (const auto& [n, pieces] : report.degrees) {
    out << "n=" << n << ":";
    if (pieces.empty()) out << " 0";
    for (const auto& [p, m] : pieces) out << " (" << p << ", " << m.to_string() << ")";
    out << "\n";
  }
}

PageOptions page_options(const Options& o) { return {o.n_max, o.strict}; }

ProblemSpec problem(const Options& o) {
  ProblemSpec spec;
  spec.complex = load_complex(o.complex);
  spec.system = load_system(o.system);
  spec.ring = parse_ring(o.ring);
  return spec;
}

DifferentialSupplier sidecar(const std::string& path) {
  if (path.empty()) return no_differentials();
  return json::DifferentialSidecar(load(path)).supplier();
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

int cmd_cohomology(const Options& o, std::ostream& out) {
  const SimplicialComplex x = load_complex(o.complex);
  const FGModule g = parse_coefficient(o.coeff);
  if (o.degree) {
    if (*o.degree < 0) throw Error(ErrorCode::DegreeOutOfRange, "cohomological degree must be non-negative");
    FGModule h = cohomology(x, g, *o.degree);
    if (o.as_json)
      emit(out, json::encode(h));
    else
      out << h.to_string() << "\n";
    return 0;
  }
  Json all = Json::object();
  for (int p = 0; p <= x.dimension(); ++p) {
    FGModule h = cohomology(x, g, p);
    if (o.as_json)
      all[std::to_string(p)] = json::encode(h);
    else
      out << "H^" << p << " = " << h.to_string() << "\n";
  }
  if (o.as_json) emit(out, all);
  return 0;
}

int cmd_e2(const Options& o, std::ostream& out) {
  const SpectralPage page = theorem_a_e2(problem(o), page_options(o));
  if (o.as_json)
    emit(out, json::encode(page));
  else
    render_page(out, page, "E2");
  return 0;
}

SpectralPage converged(const Options& o) {
  const ProblemSpec spec = problem(o);
  const SpectralPage e2 = theorem_a_e2(spec, page_options(o));
  return run_to_convergence(e2, spec.complex.dimension(), sidecar(o.differentials));
}

int cmd_run(const Options& o, std::ostream& out) {
  const SpectralPage page = converged(o);
  if (o.as_json)
    emit(out, json::encode(page));
  else
    render_page(out, page, "E_inf");
  return 0;
}

int cmd_abutment(const Options& o, std::ostream& out) {
  const AbutmentReport report = abutment(converged(o));
  if (o.as_json)
    emit(out, json::encode(report));
  else
    render_report(out, report);
  return 0;
}

int cmd_collapse(const Options& o, std::ostream& out) {
  const SimplicialComplex x = load_complex(o.complex);
  const GradedCoefficientSystem s = load_system(o.system);
  const CollapseTable table = collapse_rational(
      x, s, o.ack_hspace ? HSpaceHypothesis::Acknowledged : HSpaceHypothesis::NotAcknowledged, o.n_max);
  if (o.as_json) {
    emit(out, json::encode(table));
  } else {
    for (const auto& [n, d] : table.dimensions) out << "n=" << n << ": dim " << d << "\n";
  }
  return 0;
}

int cmd_compare(const Options& o, std::ostream& out) {
  ProblemSpec spec = problem(o);
  if (!o.comparison.empty()) {
    CoefficientMap m = json::decode_coefficient_map(load(o.comparison));
    spec.stabilized_system = m.target();
    spec.comparison = m;
    if (!(m.source() == spec.system))
      throw Error(ErrorCode::ShapeMismatch, "the comparison map does not start at " + spec.system.label());
  } else {
    spec = spec.with_stabilized(load_system(o.stable_system), std::max(spec.complex.dimension(), 0) + o.n_max);
  }
  const BottStableReport report =
      bott_stable_verdict(spec, sidecar(o.differentials), sidecar(o.stable_differentials), page_options(o));
  if (o.as_json) {
    emit(out, json::encode(report));
    return 0;
  }
  out << "verdict: " << to_string(report.verdict.status) << "\n";
  for (const auto& b : report.verdict.failing) out << "not an isomorphism at (" << b.to_string() << ")\n";
  out << "coefficients Bott-stable: " << (report.coefficients_bott_stable ? "yes" : "no") << "\n";
  if (report.verdict.source_report) {
    out << "-- unstable side\n";
    render_report(out, *report.verdict.source_report);
    out << "-- stable side\n";
    render_report(out, *report.verdict.target_report);
    out << "E_inf map isomorphic: " << (report.verdict.infinity_iso ? "yes" : "no") << "\n";
  }
  return 0;
}

int cmd_stabilize(const Options& o, std::ostream& out) {
  ProblemSpec spec;
  spec.complex = load_complex(o.complex);
  spec.ring = parse_ring(o.ring);
  std::optional<CoefficientTower> tower;
  if (o.stages < 1) throw Error(ErrorCode::InvalidInput, "--stages must be at least 1");
  tower = stabilization_tower(o.stages);
  spec.system = tower->stages.front();
  const SpectralPage page = theorem_b_e2(spec, page_options(o), tower);
  if (o.as_json)
    emit(out, json::encode(page));
  else
    render_page(out, page, "E2 (stabilized)");
  return 0;
}

int cmd_tower(const Options& o, std::ostream& out) {
  if (o.tower.empty()) throw IoError("--tower is required");
  const Tower t = json::decode_tower(load(o.tower));
  const TowerReport report = tower_pages(t, load_system(o.system), parse_ring(o.ring), page_options(o));
  const SpectralPage& limit = report.limit();
  if (o.as_json)
    emit(out, json::encode(report));
  else
    render_page(out, limit, "E2 limit of " + std::to_string(t.stages.size()) + " stages");
  return 0;
}

int cmd_unitization(const Options& o, std::ostream& out) {
  const SimplicialComplex x = load_complex(o.complex);
  const FGModule correction = unitization_correction(x, o.j);
  const FGModule thom = thom_homotopy(x, o.j);
  if (o.as_json) {
    emit(out, Json{{"j", o.j}, {"unitization_correction", json::encode(correction)}, {"thom", json::encode(thom)}});
  } else {
    out << "unitization correction H^" << 1 - o.j << "(X; Z) = " << correction.to_string() << "\n";
    out << "pi_" << o.j << " of maps into C - 0 = " << thom.to_string() << "\n";
  }
  return 0;
}

void error_object(std::ostream& err, const std::string& code, const std::string& message) {
  err << Json{{"error", {{"code", code}, {"message", message}, {"details", Json::array()}}}}.dump() << "\n";
}

}  // namespace

LocalizationRing parse_ring(const std::string& text) {
  if (text == "Z") return LocalizationRing::integers();
  if (text == "Q") return LocalizationRing::rationals();
  if (text.size() > 3 && text.starts_with("Z[") && text.back() == ']') {
    std::vector<long> primes;
    std::stringstream body(text.substr(2, text.size() - 3));
    std::string item;
    while (std::getline(body, item, ',')) {
      if (!item.starts_with("1/") || item.size() < 3 ||
          item.find_first_not_of("0123456789", 2) != std::string::npos)
        throw Error(ErrorCode::InvalidInput, "malformed ring '" + text + "'");
      primes.push_back(std::stol(item.substr(2)));
    }
    return LocalizationRing::inverting(std::move(primes));
  }
  throw Error(ErrorCode::InvalidInput, "ring must be Z, Q or Z[1/p,...], got '" + text + "'");
}

FGModule parse_coefficient(const std::string& text) {
  if (text.starts_with("Z/")) {
    const std::string m = text.substr(2);
    if (m.empty() || m.find_first_not_of("0123456789") != std::string::npos || m.size() > 18)
      throw Error(ErrorCode::InvalidInput, "malformed coefficient '" + text + "'");
    const long order = std::stol(m);
    if (order < 1) throw Error(ErrorCode::InvalidInput, "cyclic order must be positive");
    return FGModule::cyclic(LocalizationRing::integers(), order);
  }
  return FGModule::free(parse_ring(text), 1);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-quadrant spectral sequences for section algebras over finite complexes", "specseq"};
  app.require_subcommand(1, 1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.as_json, "Emit JSON instead of text");
    sub->add_option("--nmax", o.n_max, "Degree ceiling N_max")->check(CLI::PositiveNumber);
  };
  auto with_complex = [&](CLI::App* sub) {
    sub->add_option("--complex", o.complex, "Complex JSON file or fixture name")->required();
  };
  auto with_system = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--system", o.system, "Built-in system name or system JSON file");
    if (required) opt->required();
  };
  auto with_ring = [&](CLI::App* sub) { sub->add_option("--ring", o.ring, "Z, Q or Z[1/p,...]"); };

  auto* cohomology_cmd = app.add_subcommand("cohomology", "H^p(X; G)");
  with_complex(cohomology_cmd);
  cohomology_cmd->add_option("--coeff", o.coeff, "Z, Q, Z/m or Z[1/p,...]");
  cohomology_cmd->add_option("--degree", o.degree, "Cohomological degree p (all degrees when omitted)");
  common(cohomology_cmd);

  auto* e2_cmd = app.add_subcommand("e2", "E2 page of the section-algebra spectral sequence");
  for (auto* sub : {e2_cmd}) {
    with_complex(sub);
    with_system(sub, true);
    with_ring(sub);
    common(sub);
    sub->add_flag("--strict", o.strict, "Refuse systems that stop short of the page window");
  }

  auto* run_cmd = app.add_subcommand("run", "Turn pages to E_infinity with supplied differentials");
  auto* abutment_cmd = app.add_subcommand("abutment", "Associated graded of the abutment");
  for (auto* sub : {run_cmd, abutment_cmd}) {
    with_complex(sub);
    with_system(sub, true);
    with_ring(sub);
    common(sub);
    sub->add_flag("--strict", o.strict, "Refuse systems that stop short of the page window");
    sub->add_option("--differentials", o.differentials, "Differentials JSON keyed by page and bidegree");
  }

  auto* collapse_cmd = app.add_subcommand("collapse", "Rational collapse dimensions");
  with_complex(collapse_cmd);
  with_system(collapse_cmd, true);
  collapse_cmd->add_flag("--ack-hspace", o.ack_hspace, "Acknowledge the H-space hypothesis on the fibre");
  common(collapse_cmd);

  auto* compare_cmd = app.add_subcommand("compare", "Bott-stability comparison of the two spectral sequences");
  with_complex(compare_cmd);
  with_system(compare_cmd, true);
  with_ring(compare_cmd);
  common(compare_cmd);
  compare_cmd->add_option("--stable-system", o.stable_system, "Stabilized system (default ku-stable)");
  compare_cmd->add_option("--comparison", o.comparison, "Coefficient map JSON (default: canonical)");
  compare_cmd->add_option("--differentials", o.differentials, "Differentials for the unstable side");
  compare_cmd->add_option("--stable-differentials", o.stable_differentials, "Differentials for the stable side");

  auto* stabilize_cmd = app.add_subcommand("stabilize", "E2 page with the colimit of unitary-1 -> ... -> unitary-n");
  with_complex(stabilize_cmd);
  with_ring(stabilize_cmd);
  common(stabilize_cmd);
  stabilize_cmd->add_option("--stages", o.stages, "Number of unitary stages")->check(CLI::PositiveNumber);

  auto* tower_cmd = app.add_subcommand("tower", "E2 pages along an inverse tower of complexes");
  tower_cmd->add_option("--tower", o.tower, "Tower JSON file")->required();
  with_system(tower_cmd, true);
  with_ring(tower_cmd);
  common(tower_cmd);

  auto* unitization_cmd = app.add_subcommand("unitization", "Non-unital corrections in degree j");
  with_complex(unitization_cmd);
  unitization_cmd->add_option("--j", o.j, "Homotopy degree j")->required();
  common(unitization_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_object(err, "USAGE", e.what());
    return 1;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "cohomology") return cmd_cohomology(o, out);
    if (name == "e2") return cmd_e2(o, out);
    if (name == "run") return cmd_run(o, out);
    if (name == "abutment") return cmd_abutment(o, out);
    if (name == "collapse") return cmd_collapse(o, out);
    if (name == "compare") return cmd_compare(o, out);
    if (name == "stabilize") return cmd_stabilize(o, out);
    if (name == "tower") return cmd_tower(o, out);
    return cmd_unitization(o, out);
  } catch (const Error& e) {
    err << json::encode(e).dump() << "\n";
    return 2;
  } catch (const IoError& e) {
    error_object(err, "IO_ERROR", e.what());
    return 1;
  } catch (const nlohmann::json::exception& e) {
    error_object(err, "PARSE_ERROR", e.what());
    return 1;
  } catch (const json::SchemaError& e) {
    error_object(err, "SCHEMA_ERROR", e.what());
    return 1;
  }
}

}  // namespace specseq::cli
