#include "specseq/json_io.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace specseq::json {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw SchemaError(std::string(what) + " is out of range");
  return static_cast<int>(v);
}

int as_key(const std::string& key, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(key, &used);
    if (used == key.size()) return v;
  } catch (const std::exception&) {
  }
  throw SchemaError(std::string(what) + " key '" + key + "' is not an integer");
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be a list");
  return j;
}

Json bidegree_list(const std::vector<Bidegree>& bs) {
  Json out = Json::array();
  for (const auto& b : bs) out.push_back(b.to_string());
  return out;
}

}  // namespace

Json encode(const Integer& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(n);
  return n.str();
}

Integer decode_integer(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos) return Integer(s);
  }
  throw SchemaError("expected an integer, got " + j.dump());
}

Json encode(const IntMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(encode(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix decode_matrix(const Json& j, Index rows, Index cols) {
  array(j, "matrix");
  const std::string want = std::to_string(rows) + "x" + std::to_string(cols);
  if (j.empty()) {
    if (rows == 0 || cols == 0) return zeros(rows, cols);
    throw Error(ErrorCode::ShapeMismatch, "empty matrix where " + want + " is needed");
  }
  if (static_cast<Index>(j.size()) != rows)
    throw Error(ErrorCode::ShapeMismatch, "matrix has " + std::to_string(j.size()) + " rows, expected " + want);
  IntMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = array(j[static_cast<std::size_t>(i)], "matrix row");
    if (static_cast<Index>(row.size()) != cols)
      throw Error(ErrorCode::ShapeMismatch, "matrix row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                                                " entries, expected " + want);
    for (Index k = 0; k < cols; ++k) m(i, k) = decode_integer(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json encode(const LocalizationRing& ring) {
  if (ring.is_rationals()) return "Q";
  if (ring.is_integers()) return "Z";
  return Json{{"invert", ring.inverted_primes()}};
}

LocalizationRing decode_ring(const Json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "Z") return LocalizationRing::integers();
    if (s == "Q") return LocalizationRing::rationals();
    throw SchemaError("ring must be \"Z\", \"Q\" or {\"invert\": [...]}, got \"" + s + "\"");
  }
  std::vector<long> primes;
  for (const auto& p : array(field(j, "invert"), "invert")) primes.push_back(as_int(p, "inverted prime"));
  return LocalizationRing::inverting(std::move(primes));
}

Json encode(const FGModule& m) {
  Json torsion = Json::array();
  for (const auto& t : m.torsion_orders()) torsion.push_back(encode(t));
  return Json{{"rank", m.free_rank()}, {"torsion", std::move(torsion)}};
}

FGModule decode_module(const Json& j, const LocalizationRing& ring) {
  const int rank = as_int(field(j, "rank"), "rank");
  if (rank < 0) throw Error(ErrorCode::InvalidInput, "negative rank");
  std::vector<Integer> orders;
  if (j.contains("torsion"))
    for (const auto& t : array(j.at("torsion"), "torsion")) {
      Integer m = decode_integer(t);
      if (m < 2) throw Error(ErrorCode::InvalidInput, "torsion orders must exceed 1, got " + m.str());
      orders.push_back(std::move(m));
    }
  return FGModule::from_orders(ring, rank, orders);
}

Json encode(const SimplicialComplex& x) {
  std::set<Simplex> faces;
  for (int p = 1; p <= x.dimension(); ++p)
    for (const auto& s : x.simplices(p))
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        faces.insert(std::move(f));
      }
  Json maximal = Json::array();
  for (int p = 0; p <= x.dimension(); ++p)
    for (const auto& s : x.simplices(p))
      if (!faces.contains(s)) maximal.push_back(s);
  return Json{{"vertices", x.vertex_count()}, {"simplices", std::move(maximal)}};
}

SimplicialComplex decode_complex(const Json& j) {
  const int n = as_int(field(j, "vertices"), "vertices");
  if (n < 0) throw Error(ErrorCode::InvalidInput, "negative vertex count");
  std::vector<Simplex> maximal;
  for (const auto& s : array(field(j, "simplices"), "simplices")) {
    Simplex simplex;
    for (const auto& v : array(s, "simplex")) simplex.push_back(as_int(v, "vertex"));
    maximal.push_back(std::move(simplex));
  }
  return SimplicialComplex::from_maximal(n, maximal);
}

Json encode(const GradedCoefficientSystem& s) {
  Json groups = Json::object();
  for (const auto& [q, g] : s.groups()) groups[std::to_string(q)] = encode(g);
  Json out{{"label", s.label()}, {"ring", encode(s.ring())}, {"groups", std::move(groups)}};
  out["period"] = s.period() ? Json(*s.period()) : Json(nullptr);
  out["stable_bound"] = s.stable_bound() ? Json(*s.stable_bound()) : Json(nullptr);
  return out;
}

GradedCoefficientSystem decode_system(const Json& j) {
  const LocalizationRing ring = j.contains("ring") ? decode_ring(j.at("ring")) : LocalizationRing::integers();
  std::map<int, FGModule> groups;
  const Json& g = field(j, "groups");
  if (!g.is_object()) throw SchemaError("groups must be an object keyed by degree");
  for (const auto& [key, m] : g.items()) groups.emplace(as_key(key, "degree"), decode_module(m, ring));
  auto optional_int = [&](const char* key) -> std::optional<int> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return as_int(j.at(key), key);
  };
  std::string label = "custom";
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw SchemaError("label must be a string");
    label = j.at("label").get<std::string>();
  }
  return GradedCoefficientSystem(label, ring, std::move(groups), optional_int("period"), optional_int("stable_bound"));
}

Json encode(const CoefficientMap& m) {
  Json maps = Json::object();
  for (const auto& [q, f] : m.maps()) maps[std::to_string(q)] = encode(f.matrix());
  Json out{{"source", encode(m.source())}, {"target", encode(m.target())}, {"maps", std::move(maps)}};
  out["period"] = m.period() ? Json(*m.period()) : Json(nullptr);
  return out;
}

CoefficientMap decode_coefficient_map(const Json& j) {
  GradedCoefficientSystem source = decode_system(field(j, "source"));
  GradedCoefficientSystem target = decode_system(field(j, "target"));
  std::map<int, ModuleHom> maps;
  if (j.contains("maps")) {
    if (!j.at("maps").is_object()) throw SchemaError("maps must be an object keyed by degree");
    for (const auto& [key, matrix] : j.at("maps").items()) {
      const int q = as_key(key, "degree");
      if (!source.is_defined(q) || !target.is_defined(q))
        throw Error(ErrorCode::ShapeMismatch, "map given at q=" + key + " outside a stable range");
      FGModule a = source.at(q), b = target.at(q);
      maps.emplace(q, ModuleHom(a, b, decode_matrix(matrix, b.generator_count(), a.generator_count())));
    }
  }
  std::optional<int> period;
  if (j.contains("period") && !j.at("period").is_null()) period = as_int(j.at("period"), "period");
  return CoefficientMap(std::move(source), std::move(target), std::move(maps), period);
}

Json encode(const Tower& t) {
  Json stages = Json::array();
  for (const auto& x : t.stages) stages.push_back(encode(x));
  Json maps = Json::array();
  for (const auto& f : t.maps) maps.push_back(f.vertex_map());
  return Json{{"stages", std::move(stages)}, {"maps", std::move(maps)}};
}

Tower decode_tower(const Json& j) {
  Tower t;
  for (const auto& x : array(field(j, "stages"), "stages")) t.stages.push_back(decode_complex(x));
  const Json& maps = array(field(j, "maps"), "maps");
  if (maps.size() + 1 != t.stages.size())
    throw Error(ErrorCode::InvalidInput, "a tower of " + std::to_string(t.stages.size()) + " stages needs " +
                                             std::to_string(t.stages.size() == 0 ? 0 : t.stages.size() - 1) + " maps");
  for (std::size_t k = 0; k < maps.size(); ++k) {
    std::vector<int> images;
    for (const auto& v : array(maps[k], "vertex map")) images.push_back(as_int(v, "vertex image"));
    t.maps.emplace_back(t.stages[k + 1], t.stages[k], std::move(images));
  }
  t.validate();
  return t;
}

Json encode(const SpectralPage& page) {
  Json entries = Json::object();
  for (const auto& [b, m] : page.entries()) entries[b.to_string()] = encode(m);
  Json differentials = Json::object();
  for (const auto& [b, d] : page.differentials()) differentials[b.to_string()] = encode(d.matrix());
  return Json{{"r", page.r()},
              {"ring", encode(page.ring())},
              {"max_p", page.max_p()},
              {"q_limit", page.q_limit()},
              {"n_max", page.n_max()},
              {"final", page.is_final()},
              {"entries", std::move(entries)},
              {"differentials", std::move(differentials)}};
}

namespace {

ModuleHom differential_between(const SpectralPage& page, Bidegree from, Bidegree to, const Json& matrix) {
  if (!page.in_window(from) || !page.in_window(to))
    throw Error(ErrorCode::BidegreeViolation,
                "differential (" + from.to_string() + ") -> (" + to.to_string() + ") leaves the page window",
                {from.to_string(), to.to_string()});
  const FGModule a = page.entry(from), b = page.entry(to);
  return ModuleHom(a, b, decode_matrix(matrix, b.generator_count(), a.generator_count()));
}

}  // namespace

SpectralPage decode_page(const Json& j) {
  const LocalizationRing ring = j.contains("ring") ? decode_ring(j.at("ring")) : LocalizationRing::integers();
  const int n_max = j.contains("n_max") ? as_int(j.at("n_max"), "n_max") : 12;
  SpectralPage page(ring, as_int(field(j, "r"), "r"), as_int(field(j, "max_p"), "max_p"),
                    as_int(field(j, "q_limit"), "q_limit"), n_max);
  const Json& entries = field(j, "entries");
  if (!entries.is_object()) throw SchemaError("entries must be an object keyed by bidegree");
  for (const auto& [key, m] : entries.items()) page = page.with_entry(Bidegree::parse(key), decode_module(m, ring));
  if (j.contains("differentials")) {
    if (!j.at("differentials").is_object()) throw SchemaError("differentials must be an object keyed by bidegree");
    for (const auto& [key, matrix] : j.at("differentials").items()) {
      const Bidegree from = Bidegree::parse(key);
      const Bidegree to = differential_target(from, page.r());
      page = attach_differential(page, from, to, differential_between(page, from, to, matrix));
    }
  }
  if (j.contains("final") && j.at("final").is_boolean() && j.at("final").get<bool>()) page = page.as_final();
  return page;
}

Json encode(const AbutmentReport& report) {
  Json degrees = Json::object();
  for (const auto& [n, pieces] : report.degrees) {
    Json list = Json::array();
    for (const auto& [p, m] : pieces) list.push_back(Json{{"p", p}, {"module", encode(m)}});
    degrees[std::to_string(n)] = std::move(list);
  }
  return Json{{"ring", encode(report.ring)},
              {"max_degree", report.max_degree},
              {"extension_status",
               report.extension_status == ExtensionStatus::Split ? "SPLIT" : "ASSOCIATED_GRADED_ONLY"},
              {"degrees", std::move(degrees)}};
}

Json encode(const CollapseTable& table) {
  Json dims = Json::object();
  for (const auto& [n, d] : table.dimensions) dims[std::to_string(n)] = d;
  return Json{{"max_degree", table.max_degree}, {"dimensions", std::move(dims)}};
}

Json encode(const ComparisonVerdict& verdict) {
  Json out{{"status", to_string(verdict.status)}, {"failing", bidegree_list(verdict.failing)}};
  out["infinity_iso"] = verdict.infinity_iso;
  out["source_report"] = verdict.source_report ? encode(*verdict.source_report) : Json(nullptr);
  out["target_report"] = verdict.target_report ? encode(*verdict.target_report) : Json(nullptr);
  return out;
}

Json encode(const BottStableReport& report) {
  Json status = Json::object();
  for (const auto& [b, ok] : report.e2_status) status[b.to_string()] = ok;
  return Json{{"verdict", encode(report.verdict)},
              {"e2_status", std::move(status)},
              {"coefficients_bott_stable", report.coefficients_bott_stable},
              {"flag_consistent", report.flag_consistent}};
}

Json encode(const TowerReport& report) {
  Json pages = Json::array();
  for (const auto& p : report.pages) pages.push_back(encode(p));
  Json morphisms = Json::array();
  for (const auto& m : report.morphisms) {
    Json maps = Json::object();
    for (const auto& [b, f] : m.maps()) maps[b.to_string()] = encode(f.matrix());
    morphisms.push_back(std::move(maps));
  }
  Json out{{"pages", std::move(pages)},
           {"morphisms", std::move(morphisms)},
           {"unstable", bidegree_list(report.unstable)},
           {"stabilized", report.stabilized()}};
  out["limit"] = report.limit_page ? encode(*report.limit_page) : Json(nullptr);
  return out;
}

Json encode(const Error& error) {
  return Json{{"error", {{"code", std::string(to_string(error.code()))},
                         {"message", error.message()},
                         {"details", error.details()}}}};
}

// ---------------------------------------------------------------------------

DifferentialSidecar::DifferentialSidecar(const Json& j) {
  if (!j.is_object()) throw SchemaError("differentials file must be an object keyed by page");
  for (const auto& [page_key, by_bidegree] : j.items()) {
    const int r = as_key(page_key, "page");
    if (!by_bidegree.is_object()) throw SchemaError("page " + page_key + " must map bidegrees to matrices");
    for (const auto& [key, value] : by_bidegree.items()) by_page_[r][Bidegree::parse(key)] = value;
  }
}

SpectralPage DifferentialSidecar::operator()(const SpectralPage& page) const {
  auto it = by_page_.find(page.r());
  if (it == by_page_.end()) return page;
  SpectralPage out = page;
  for (const auto& [from, value] : it->second) {
    Bidegree to = differential_target(from, page.r());
    const Json* matrix = &value;
    if (value.is_object()) {
      const Json& named = field(value, "to");
      if (!named.is_string()) throw SchemaError("'to' must be a bidegree key");
      to = Bidegree::parse(named.get<std::string>());
      matrix = &field(value, "matrix");
    }
    if (to != differential_target(from, page.r()))
      throw Error(ErrorCode::BidegreeViolation,
                  "d" + std::to_string(page.r()) + " from (" + from.to_string() + ") must land in (" +
                      differential_target(from, page.r()).to_string() + "), not (" + to.to_string() + ")",
                  {from.to_string(), to.to_string()});
    out = attach_differential(out, from, to, differential_between(out, from, to, *matrix));
  }
  return out;
}

DifferentialSupplier DifferentialSidecar::supplier() const {
  return [sidecar = *this](const SpectralPage& page) { return sidecar(page); };
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Json::parse(buffer.str());
}

}  // namespace specseq::json
