#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "specseq/section_alg.hpp"

namespace specseq::json {

using Json = nlohmann::ordered_json;

/// A document that parses as JSON but does not follow the expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integers fitting in int64 are JSON numbers, larger ones decimal strings.
Json encode(const Integer& n);
Integer decode_integer(const Json& j);

/// List of rows.
Json encode(const IntMatrix& m);
/// Throws ShapeMismatch unless the list has shape rows x cols; an empty
/// list stands for any matrix with no entries.
IntMatrix decode_matrix(const Json& j, Index rows, Index cols);

/// "Z", "Q", or {"invert": [p, ...]}.
Json encode(const LocalizationRing& ring);
LocalizationRing decode_ring(const Json& j);

/// {"rank": n, "torsion": [m1, ...]}; torsion given in any form is
/// normalized through FGModule::from_orders.
Json encode(const FGModule& m);
FGModule decode_module(const Json& j, const LocalizationRing& ring);

/// {"vertices": n, "simplices": [maximal simplices]}; the decoder closes
/// the list under faces.
Json encode(const SimplicialComplex& x);
SimplicialComplex decode_complex(const Json& j);

/// {"label", "ring", "groups": {"q": module}, "period", "stable_bound"}.
Json encode(const GradedCoefficientSystem& s);
GradedCoefficientSystem decode_system(const Json& j);

/// {"source": system, "target": system, "maps": {"q": matrix}, "period"}.
Json encode(const CoefficientMap& m);
CoefficientMap decode_coefficient_map(const Json& j);

/// {"stages": [complex, ...], "maps": [[vertex images], ...]} with maps[j]
/// running from stage j + 1 to stage j.
Json encode(const Tower& t);
Tower decode_tower(const Json& j);

/// {"r", "ring", "max_p", "q_limit", "n_max", "final", "entries": {"-p,q":
/// module}, "differentials": {"-p,q": matrix}} in bidegree order.
Json encode(const SpectralPage& page);
SpectralPage decode_page(const Json& j);

Json encode(const AbutmentReport& report);
Json encode(const CollapseTable& table);
Json encode(const ComparisonVerdict& verdict);
Json encode(const BottStableReport& report);
Json encode(const TowerReport& report);
Json encode(const Error& error);

/// Differentials keyed by page and source bidegree:
/// {"2": {"0,2": [[2]]}, ...}. A value may also name its target explicitly,
/// {"to": "-2,3", "matrix": [[2]]}, which is then checked against the
/// bidegree law. Pages without an entry get none.
class DifferentialSidecar {
 public:
  DifferentialSidecar() = default;
  explicit DifferentialSidecar(const Json& j);

  /// Attaches the matrices recorded for page.r(); each is read between the
  /// law's source and target entries.
  SpectralPage operator()(const SpectralPage& page) const;
  DifferentialSupplier supplier() const;

 private:
  std::map<int, std::map<Bidegree, Json>> by_page_;
};

/// Reads a file; throws std::runtime_error on I/O failure and
/// nlohmann::json::exception on malformed JSON. Decoders throw SchemaError
/// on missing or mistyped fields and Error on invalid mathematical data.
Json read_file(const std::string& path);

}  // namespace specseq::json
