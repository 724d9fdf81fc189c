#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "models/model.hpp"
#include "spencer/spencer.hpp"

namespace gs {

using Json = nlohmann::ordered_json;

/// Schema-level failure: a JSON-pointer-like path into the document plus a
/// message. Distinct from ComputationError so callers can map the two onto
/// different exit codes (malformed document vs failed mathematics).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Degree-0 family request attached to a symbol document.
struct G0Spec {
  enum class Mode { none, full_derivations, metric_orthogonal, explicit_gens };
  Mode mode = Mode::none;
  Metric metric;                          // metric_orthogonal
  std::vector<Derivation> generators;     // explicit_gens
};

/// Parsed algebra document: dimensions, bracket table, optional degree-0
/// request and truncation marker. `assemble` turns it into the working
/// algebra (attaching the derived g0 when requested).
struct AlgebraDocument {
  std::string name;
  GradedDims degrees;
  std::map<std::pair<Bel, Bel>, GVec> brackets;
  G0Spec g0;
  std::optional<int> truncation;

  bool has_g0() const { return g0.mode != G0Spec::Mode::none; }
};

/// One additive gamma entry: value components carry explicit degrees.
struct GammaEntry {
  Bel left, right;
  GVec out;
};

struct ModelDocument {
  std::string name;
  bool filtered = false;

  // filtered = true: an adapted-basis bracket table for model_from_filtered.
  FilteredInput filtered_input;

  // filtered = false: a base algebra (inline, or a prolongation request)
  // plus gamma given as bracket/zero seed and additive entries.
  AlgebraDocument base;
  std::optional<int> prolong_cap;  // set: base is prolonged to this order
  bool gamma_from_bracket = true;
  std::vector<GammaEntry> gamma_entries;
};

/// Externally supplied complement choice: per-degree spanning vectors in the
/// canonical cochain coordinates.
struct ComplementDocument {
  struct At {
    int ell = 0;
    std::vector<CochainVec> w1, w2;
  };
  std::vector<At> at;
};

/// Parses bytes into JSON with a line/column diagnostic on failure.
Json parse_json(const std::string& text);

/// Reads a whole file; ComputationError("unreadable ...") when it cannot.
std::string read_file(const std::string& path);

enum class DocumentKind { algebra, model };

/// A document is a model iff it carries "gamma" or "filtered": true.
DocumentKind classify_document(const Json& doc);

/// `path_prefix` seeds diagnostics when the document is nested inside
/// another one (e.g. "base.prolong").
AlgebraDocument parse_algebra_document(const Json& doc,
                                       const std::string& path_prefix = "");
ModelDocument parse_model_document(const Json& doc);
ComplementDocument parse_complement_document(const Json& doc);

/// Builds the working algebra: the stored table, validated structurally, with
/// the requested degree-0 family attached for pure symbols. Throws
/// SchemaError for shape violations and ComputationError for mathematical
/// ones (non-derivation generators, non-symmetric metric).
GradedLieAlgebra assemble_algebra(const AlgebraDocument& doc);

/// Resolves the model's base (prolonging when requested) and builds gamma.
ConstantStructure assemble_model(const ModelDocument& doc);

/// Scalar <-> {"num", "den"} with int64 fast path and decimal-string
/// fallback for values outside the int64 range.
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j, const std::string& path);

}  // namespace gs
