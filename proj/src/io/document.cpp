#include "io/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "prolong/prolong.hpp"

namespace gs {

namespace {

/// Cursor into a JSON document that carries the path used in diagnostics.
struct Cur {
  const Json* j;
  std::string path;

  SchemaError err(const std::string& msg) const { return SchemaError(path, msg); }

  Cur key(const char* k) const {
    if (!j->is_object()) throw err("expected an object");
    auto it = j->find(k);
    if (it == j->end()) throw err(std::string("missing required field '") + k + "'");
    return Cur{&*it, path.empty() ? k : path + "." + k};
  }

  std::optional<Cur> opt(const char* k) const {
    if (!j->is_object()) throw err("expected an object");
    auto it = j->find(k);
    if (it == j->end()) return std::nullopt;
    return Cur{&*it, path.empty() ? k : path + "." + k};
  }

  Cur at(size_t i) const {
    return Cur{&(*j)[i], path + "[" + std::to_string(i) + "]"};
  }

  size_t array_size() const {
    if (!j->is_array()) throw err("expected an array");
    return j->size();
  }

  long as_int() const {
    if (!j->is_number_integer()) throw err("expected an integer");
    return j->get<long>();
  }

  std::string as_string() const {
    if (!j->is_string()) throw err("expected a string");
    return j->get<std::string>();
  }

  bool as_bool() const {
    if (!j->is_boolean()) throw err("expected a boolean");
    return j->get<bool>();
  }

  /// Rejects fields outside the allowed set so typos surface as diagnostics
  /// instead of being ignored.
  void allow_keys(std::initializer_list<const char*> keys) const {
    if (!j->is_object()) throw err("expected an object");
    for (auto it = j->begin(); it != j->end(); ++it) {
      bool ok = false;
      for (const char* k : keys) ok = ok || it.key() == k;
      if (!ok) {
        std::string allowed;
        for (const char* k : keys) {
          if (!allowed.empty()) allowed += ", ";
          allowed += k;
        }
        throw err("unknown field '" + it.key() + "'; allowed: " + allowed);
      }
    }
  }
};

Bel parse_bel(const Cur& c) {
  if (!c.j->is_array() || c.j->size() != 2) throw c.err("expected [degree, index]");
  return Bel{static_cast<int>(c.at(0).as_int()), static_cast<int>(c.at(1).as_int())};
}

/// num/den held directly as fields of an entry object.
Scalar parse_inline_rational(const Cur& entry) {
  const long num = entry.key("num").as_int();
  const long den = entry.key("den").as_int();
  if (den <= 0) throw SchemaError(entry.path + ".den", "denominator must be positive");
  return frac(num, den);
}

std::vector<std::vector<Scalar>> parse_matrix(const Cur& c) {
  std::vector<std::vector<Scalar>> m;
  const size_t rows = c.array_size();
  for (size_t r = 0; r < rows; ++r) {
    const Cur row = c.at(r);
    std::vector<Scalar> out;
    const size_t cols = row.array_size();
    for (size_t k = 0; k < cols; ++k)
      out.push_back(scalar_from_json(*row.at(k).j, row.at(k).path));
    m.push_back(std::move(out));
  }
  for (const auto& row : m)
    if (row.size() != m.size()) throw c.err("matrix must be square");
  return m;
}

GradedDims parse_degrees(const Cur& c) {
  if (!c.j->is_object()) throw c.err("expected an object mapping degree to dimension");
  std::map<int, int> dims;
  for (auto it = c.j->begin(); it != c.j->end(); ++it) {
    int deg = 0;
    try {
      size_t used = 0;
      deg = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw SchemaError(c.path, "degree key '" + it.key() + "' is not an integer");
    }
    const Cur v{&it.value(), c.path + "." + it.key()};
    const long d = v.as_int();
    if (d < 0) throw v.err("dimension must be nonnegative");
    if (d > 0) dims[deg] = static_cast<int>(d);
  }
  return GradedDims(dims);
}

void check_index(const GradedDims& dims, const Bel& b, const Cur& where) {
  if (b.i < 0 || b.i >= dims.at(b.p))
    throw where.err("index " + std::to_string(b.i) + " out of range for degree " +
                    std::to_string(b.p) + " (dimension " +
                    std::to_string(dims.at(b.p)) + ")");
}

/// Shared left/right/out scaffolding of bracket and gamma entries. `graded`
/// pins the output degree to left.p + right.p; otherwise each component
/// carries an explicit "degree" and `min_degree` is the filtration floor.
std::pair<std::pair<Bel, Bel>, GVec> parse_entry(const Cur& entry,
                                                 const GradedDims& dims,
                                                 bool graded) {
  entry.allow_keys({"left", "right", "out"});
  const Bel left = parse_bel(entry.key("left"));
  const Bel right = parse_bel(entry.key("right"));
  check_index(dims, left, entry.key("left"));
  check_index(dims, right, entry.key("right"));
  if (!(left < right))
    throw entry.err("entries must be in canonical order (left < right)");

  GVec out;
  const Cur co = entry.key("out");
  const size_t n = co.array_size();
  for (size_t t = 0; t < n; ++t) {
    const Cur comp = co.at(t);
    comp.allow_keys(graded
                        ? std::initializer_list<const char*>{"index", "num", "den"}
                        : std::initializer_list<const char*>{"degree", "index",
                                                             "num", "den"});
    const int deg = graded ? left.p + right.p
                           : static_cast<int>(comp.key("degree").as_int());
    const Bel tgt{deg, static_cast<int>(comp.key("index").as_int())};
    if (dims.at(deg) == 0)
      throw comp.err("output targets degree " + std::to_string(deg) +
                     " which has dimension 0");
    check_index(dims, tgt, comp);
    if (!graded && deg < left.p + right.p)
      throw comp.err("output degree " + std::to_string(deg) +
                     " lies below the filtration degree " +
                     std::to_string(left.p + right.p));
    const Scalar coeff = parse_inline_rational(comp);
    if (is_zero(coeff)) throw comp.err("coefficient must be nonzero");
    gvec_add(out, tgt, coeff);
  }
  return {{left, right}, std::move(out)};
}

G0Spec parse_g0(const Cur& c) {
  G0Spec spec;
  const std::string mode = c.key("mode").as_string();
  if (mode == "full-derivations") {
    c.allow_keys({"mode"});
    spec.mode = G0Spec::Mode::full_derivations;
  } else if (mode == "metric-orthogonal") {
    c.allow_keys({"mode", "metric"});
    spec.mode = G0Spec::Mode::metric_orthogonal;
    spec.metric.m = parse_matrix(c.key("metric"));
    if (!spec.metric.symmetric())
      throw SchemaError(c.path + ".metric", "metric must be symmetric");
  } else if (mode == "explicit") {
    c.allow_keys({"mode", "generators"});
    spec.mode = G0Spec::Mode::explicit_gens;
    const Cur gens = c.key("generators");
    const size_t n = gens.array_size();
    for (size_t i = 0; i < n; ++i) {
      const Cur gen = gens.at(i);
      gen.allow_keys({"blocks"});
      const Cur blocks = gen.key("blocks");
      if (!blocks.j->is_object()) throw blocks.err("expected an object");
      Derivation d;
      for (auto it = blocks.j->begin(); it != blocks.j->end(); ++it) {
        int deg = 0;
        try {
          deg = std::stoi(it.key());
        } catch (const std::exception&) {
          throw SchemaError(blocks.path, "degree key '" + it.key() + "' is not an integer");
        }
        d.blocks[deg] = parse_matrix(Cur{&it.value(), blocks.path + "." + it.key()});
      }
      spec.generators.push_back(std::move(d));
    }
  } else {
    throw SchemaError(c.path + ".mode",
                      "unknown mode '" + mode +
                          "'; allowed: full-derivations, metric-orthogonal, explicit");
  }
  return spec;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Convert the byte offset into line/column for the diagnostic.
    size_t line = 1, col = 1;
    const size_t stop = e.byte > 0 ? std::min(text.size(), e.byte - 1) : 0;
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError("", "line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ComputationError("unreadable file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw ComputationError("unreadable file: " + path);
  return buf.str();
}

DocumentKind classify_document(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("", "document root must be an object");
  if (doc.contains("gamma") || doc.contains("base") ||
      (doc.contains("filtered") && doc["filtered"].is_boolean() &&
       doc["filtered"].get<bool>()))
    return DocumentKind::model;
  return DocumentKind::algebra;
}

AlgebraDocument parse_algebra_document(const Json& doc,
                                       const std::string& path_prefix) {
  const Cur root{&doc, path_prefix};
  root.allow_keys({"name", "degrees", "brackets", "g0", "truncation"});

  AlgebraDocument out;
  if (auto n = root.opt("name")) out.name = n->as_string();
  out.degrees = parse_degrees(root.key("degrees"));
  if (auto t = root.opt("truncation"))
    out.truncation = static_cast<int>(t->as_int());

  if (auto br = root.opt("brackets")) {
    const size_t n = br->array_size();
    for (size_t i = 0; i < n; ++i) {
      auto [key, v] = parse_entry(br->at(i), out.degrees, /*graded=*/true);
      if (out.brackets.count(key))
        throw br->at(i).err("duplicate bracket entry");
      if (!v.empty()) out.brackets.emplace(key, std::move(v));
    }
  }

  if (auto g0 = root.opt("g0")) out.g0 = parse_g0(*g0);
  if (out.has_g0()) {
    if (out.degrees.top() >= 0)
      throw root.key("g0").err("g0 attachment requires a pure symbol "
                               "(negative degrees only)");
    if (out.truncation.has_value())
      throw root.key("truncation")
          .err("truncation conflicts with g0 attachment (the assembled "
               "algebra is the order-0 truncation)");
  }
  return out;
}

ModelDocument parse_model_document(const Json& doc) {
  const Cur root{&doc, ""};
  ModelDocument out;
  if (auto f = root.opt("filtered")) out.filtered = f->as_bool();

  if (out.filtered) {
    root.allow_keys({"name", "filtered", "degrees", "brackets"});
    if (auto n = root.opt("name")) out.name = n->as_string();
    out.filtered_input.name = out.name;
    out.filtered_input.dims = parse_degrees(root.key("degrees"));
    if (auto br = root.opt("brackets")) {
      const size_t n = br->array_size();
      for (size_t i = 0; i < n; ++i) {
        auto [key, v] =
            parse_entry(br->at(i), out.filtered_input.dims, /*graded=*/false);
        if (out.filtered_input.brackets.count(key))
          throw br->at(i).err("duplicate bracket entry");
        if (!v.empty()) out.filtered_input.brackets.emplace(key, std::move(v));
      }
    }
    return out;
  }

  root.allow_keys({"name", "base", "gamma"});
  if (auto n = root.opt("name")) out.name = n->as_string();

  const Cur base = root.key("base");
  if (base.opt("prolong")) {
    base.allow_keys({"prolong", "cap"});
    out.base = parse_algebra_document(*base.key("prolong").j, "base.prolong");
    const long cap = base.key("cap").as_int();
    if (cap < 1) throw SchemaError("base.cap", "prolongation cap must be >= 1");
    out.prolong_cap = static_cast<int>(cap);
  } else {
    out.base = parse_algebra_document(*base.j, "base");
  }

  if (auto gamma = root.opt("gamma")) {
    gamma->allow_keys({"from", "entries"});
    if (auto from = gamma->opt("from")) {
      const std::string f = from->as_string();
      if (f == "bracket")
        out.gamma_from_bracket = true;
      else if (f == "zero")
        out.gamma_from_bracket = false;
      else
        throw from->err("unknown seed '" + f + "'; allowed: bracket, zero");
    }
    if (auto entries = gamma->opt("entries")) {
      const size_t n = entries->array_size();
      for (size_t i = 0; i < n; ++i) {
        const Cur entry = entries->at(i);
        entry.allow_keys({"left", "right", "out"});
        GammaEntry ge;
        ge.left = parse_bel(entry.key("left"));
        ge.right = parse_bel(entry.key("right"));
        if (!(ge.left < ge.right))
          throw entry.err("entries must be in canonical order (left < right)");
        const Cur co = entry.key("out");
        const size_t m = co.array_size();
        for (size_t t = 0; t < m; ++t) {
          const Cur comp = co.at(t);
          comp.allow_keys({"degree", "index", "num", "den"});
          const Bel tgt{static_cast<int>(comp.key("degree").as_int()),
                        static_cast<int>(comp.key("index").as_int())};
          const Scalar coeff = parse_inline_rational(comp);
          if (is_zero(coeff)) throw comp.err("coefficient must be nonzero");
          gvec_add(ge.out, tgt, coeff);
        }
        out.gamma_entries.push_back(std::move(ge));
      }
    }
  }
  return out;
}

ComplementDocument parse_complement_document(const Json& doc) {
  const Cur root{&doc, ""};
  root.allow_keys({"name", "complements"});
  ComplementDocument out;
  const Cur list = root.key("complements");
  const size_t n = list.array_size();
  std::set<int> seen;
  for (size_t i = 0; i < n; ++i) {
    const Cur at = list.at(i);
    at.allow_keys({"ell", "w1", "w2"});
    ComplementDocument::At entry;
    entry.ell = static_cast<int>(at.key("ell").as_int());
    if (!seen.insert(entry.ell).second)
      throw at.err("duplicate degree " + std::to_string(entry.ell));
    auto vectors = [&](const char* k) {
      std::vector<CochainVec> vs;
      if (auto c = at.opt(k)) {
        const size_t m = c->array_size();
        for (size_t v = 0; v < m; ++v) {
          const Cur vec = c->at(v);
          CochainVec coords;
          const size_t len = vec.array_size();
          for (size_t t = 0; t < len; ++t)
            coords.push_back(scalar_from_json(*vec.at(t).j, vec.at(t).path));
          vs.push_back(std::move(coords));
        }
      }
      return vs;
    };
    entry.w1 = vectors("w1");
    entry.w2 = vectors("w2");
    out.at.push_back(std::move(entry));
  }
  return out;
}

GradedLieAlgebra assemble_algebra(const AlgebraDocument& doc) {
  GradedLieAlgebra g;
  g.name = doc.name;
  g.dims = doc.degrees;
  g.truncation = doc.truncation;
  if (doc.has_g0()) g.truncation = -1;  // symbol about to be extended
  for (const auto& [key, v] : doc.brackets) g.set_bracket(key.first, key.second, v);

  std::vector<std::string> errs = g.validate_structure();
  if (!errs.empty()) throw ComputationError(errs.front());

  if (!doc.has_g0()) return g;

  DerivationAlgebra fam;
  switch (doc.g0.mode) {
    case G0Spec::Mode::full_derivations:
      fam = derivations_degree0(g, nullptr);
      break;
    case G0Spec::Mode::metric_orthogonal: {
      const size_t n = static_cast<size_t>(g.dims.at(-1));
      if (doc.g0.metric.m.size() != n)
        throw ComputationError("metric size " + std::to_string(doc.g0.metric.m.size()) +
                               " does not match dim g_{-1} = " + std::to_string(n));
      if (!doc.g0.metric.nondegenerate())
        throw ComputationError("metric is degenerate");
      fam = derivations_degree0(g, &doc.g0.metric);
      break;
    }
    case G0Spec::Mode::explicit_gens: {
      fam.basis = doc.g0.generators;
      std::vector<std::string> famErrs = derivation_family_check(g, fam);
      if (!famErrs.empty()) throw ComputationError(famErrs.front());
      break;
    }
    case G0Spec::Mode::none:
      break;
  }
  GradedLieAlgebra out = attach_degree0(g, fam);
  out.name = doc.name;
  return out;
}

ConstantStructure assemble_model(const ModelDocument& doc) {
  if (doc.filtered) {
    FilteredModel fm = model_from_filtered(doc.filtered_input);
    fm.gamma.name = doc.name;
    return std::move(fm.gamma);
  }

  GradedLieAlgebra base = assemble_algebra(doc.base);
  if (doc.prolong_cap.has_value()) {
    if (base.complete() || base.order() < 0)
      throw ComputationError(
          "prolongation base must be a truncation with a degree-0 part");
    base = prolong_from(base, *doc.prolong_cap).algebra;
  }

  ConstantStructure gamma;
  if (doc.gamma_from_bracket) {
    gamma = ConstantStructure::from_bracket(base);
  } else {
    gamma.base = base;
  }
  gamma.name = doc.name;

  for (size_t i = 0; i < doc.gamma_entries.size(); ++i) {
    const GammaEntry& ge = doc.gamma_entries[i];
    const std::string where = "gamma.entries[" + std::to_string(i) + "]";
    auto check = [&](const Bel& b) {
      if (b.i < 0 || b.i >= base.dims.at(b.p))
        throw SchemaError(where, "index " + std::to_string(b.i) +
                                     " out of range for degree " +
                                     std::to_string(b.p) + " (dimension " +
                                     std::to_string(base.dims.at(b.p)) + ")");
    };
    check(ge.left);
    check(ge.right);
    for (const auto& [tgt, c] : ge.out) check(tgt);
    gamma.add(ge.left, ge.right, ge.out);
  }
  return gamma;
}

Json scalar_to_json(const Scalar& s) {
  Json out = Json::object();
  const mpz_class num = s.get_num();
  const mpz_class den = s.get_den();
  if (num.fits_slong_p())
    out["num"] = num.get_si();
  else
    out["num"] = num.get_str();
  if (den.fits_slong_p())
    out["den"] = den.get_si();
  else
    out["den"] = den.get_str();
  return out;
}

Scalar scalar_from_json(const Json& j, const std::string& path) {
  const Cur c{&j, path};
  if (!j.is_object()) throw c.err("expected a rational {num, den}");
  c.allow_keys({"num", "den"});
  auto piece = [&](const char* k) -> mpz_class {
    const Cur f = c.key(k);
    if (f.j->is_number_integer()) return mpz_class(f.j->get<long>());
    if (f.j->is_string()) {
      try {
        return mpz_class(f.j->get<std::string>());
      } catch (const std::invalid_argument&) {
        throw f.err("not an integer");
      }
    }
    throw f.err("expected an integer");
  };
  const mpz_class num = piece("num");
  const mpz_class den = piece("den");
  if (den <= 0) throw SchemaError(path + ".den", "denominator must be positive");
  Scalar s(num, den);
  s.canonicalize();
  return s;
}

}  // namespace gs
