#include "io/run.hpp"

#include <random>

#include "core/error.hpp"
#include "gevrey/frame.hpp"
#include "gevrey/series.hpp"
#include "prolong/prolong.hpp"

namespace gs {

namespace {

Json bel_json(const Bel& b) { return Json::array({b.p, b.i}); }

Json gvec_json(const GVec& v) {
  Json out = Json::array();
  for (const auto& [b, c] : v) {
    Json e = Json::object();
    e["degree"] = b.p;
    e["index"] = b.i;
    const Json r = scalar_to_json(c);
    e["num"] = r["num"];
    e["den"] = r["den"];
    out.push_back(std::move(e));
  }
  return out;
}

Json dims_json(const GradedDims& d) {
  Json out = Json::object();
  for (const auto& [p, n] : d.map()) out[std::to_string(p)] = n;
  return out;
}

const char* g0_mode_name(G0Spec::Mode m) {
  switch (m) {
    case G0Spec::Mode::full_derivations: return "full-derivations";
    case G0Spec::Mode::metric_orthogonal: return "metric-orthogonal";
    case G0Spec::Mode::explicit_gens: return "explicit";
    case G0Spec::Mode::none: break;
  }
  return "none";
}

/// Shared error handling: schema errors exit 3, unreadable files 66,
/// everything the mathematics rejects 2, anything else 70.
template <class F>
Report guarded(const std::string& command, const Json& args, F&& f) {
  try {
    return f();
  } catch (const SchemaError& e) {
    return error_report(command, args, 3, "schema", e.what());
  } catch (const ComputationError& e) {
    const std::string msg = e.what();
    if (msg.rfind("unreadable file", 0) == 0)
      return error_report(command, args, 66, "io", msg);
    return error_report(command, args, 2, "validation", msg);
  } catch (const std::exception& e) {
    return error_report(command, args, 70, "internal", e.what());
  }
}

struct LoadedAlgebra {
  AlgebraDocument doc;
  GradedLieAlgebra g;
};

LoadedAlgebra load_algebra(const std::string& path) {
  const Json j = parse_json(read_file(path));
  if (classify_document(j) != DocumentKind::algebra)
    throw SchemaError("", "expected an algebra document, found a model document");
  AlgebraDocument doc = parse_algebra_document(j);
  GradedLieAlgebra g = assemble_algebra(doc);
  return {std::move(doc), std::move(g)};
}

/// Cochain-level commands need value degrees beyond a truncation's order.
/// A truncated base is prolonged; if a finite-type completion appears within
/// the conservative search cap the complete algebra is used (and certified),
/// otherwise the prolonged truncation with honest completeness flags.
struct CochainBase {
  GradedLieAlgebra g;
  bool completed = false;
  bool prolonged = false;
};

CochainBase cochain_base(const GradedLieAlgebra& in) {
  if (in.complete()) return {in, true, false};
  if (in.order() < 0)
    throw ComputationError(
        "cochain-level commands need a degree-0 part; attach a g0 family");
  const int search = in.order() + 2 * in.dims.depth() + 3;
  ProlongationResult res = prolong_from(in, search);
  if (res.verdict == ProlongVerdict::finite_type) {
    GradedLieAlgebra c = res.algebra;
    c.truncation.reset();
    return {std::move(c), true, true};
  }
  return {res.algebra, false, true};
}

Json cochain_base_json(const CochainBase& cb) {
  Json out = Json::object();
  out["completed"] = cb.completed;
  out["prolonged"] = cb.prolonged;
  out["degrees"] = dims_json(cb.g.dims);
  return out;
}

/// Largest ell <= hard_cap whose C^0..C^2 spaces of homogeneity ell are all
/// representable (the C^0 space binds).
int representable_hi(const GradedLieAlgebra& g, int hard_cap) {
  int hi = 0;
  for (int ell = 1; ell <= hard_cap; ++ell) {
    if (!cochain_space_representable(g, 0, ell)) break;
    hi = ell;
  }
  return hi;
}

FormalSeries random_series(std::mt19937_64& rng, int n, int order, int max_deg) {
  FormalSeries f = FormalSeries::zero(n, order);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  for (int t = 0; t < 2 * n + 3; ++t) {
    Exponent a(n, 0);
    int budget = deg(rng);
    for (int i = 0; i < n && budget > 0; ++i) {
      std::uniform_int_distribution<int> part(0, budget);
      a[i] = part(rng);
      budget -= a[i];
    }
    int v = num(rng);
    if (v == 0) v = 1;
    f.set(a, frac(v, den(rng)));
  }
  return f;
}

}  // namespace

Report cmd_validate(const std::string& path) {
  const Json args = Json{{"file", path}};
  return guarded("validate", args, [&]() -> Report {
    const Json j = parse_json(read_file(path));
    Report r;
    r.body["command"] = "validate";
    r.body["arguments"] = args;
    Json result = Json::object();
    Json checks = Json::object();
    bool ok = true;

    if (classify_document(j) == DocumentKind::algebra) {
      const AlgebraDocument doc = parse_algebra_document(j);
      const GradedLieAlgebra g = assemble_algebra(doc);
      result["kind"] = "algebra";
      if (!g.name.empty()) result["name"] = g.name;
      result["degrees"] = dims_json(g.dims);
      result["total_dim"] = g.dims.total();
      result["depth"] = g.depth();
      result["complete"] = g.complete();
      if (!g.complete()) result["order"] = g.order();
      if (doc.has_g0())
        result["g0"] = Json{{"mode", g0_mode_name(doc.g0.mode)},
                            {"dim", g.dims.at(0)}};

      checks["structure"] = "ok";
      const auto jac = g.check_jacobi();
      if (jac) {
        ok = false;
        checks["jacobi"] = Json{{"ok", false},
                                {"witness", Json{{"x", bel_json(jac->x)},
                                                 {"y", bel_json(jac->y)},
                                                 {"z", bel_json(jac->z)},
                                                 {"residual", gvec_json(jac->residual)}}}};
      } else {
        checks["jacobi"] = Json{{"ok", true}};
      }
      const TransitivityReport tr = g.check_transitivity();
      if (tr.transitive) {
        checks["transitive"] = Json{{"ok", true}};
      } else {
        ok = false;
        checks["transitive"] =
            Json{{"ok", false}, {"failing_degree", tr.failing_degree}};
      }
      checks["fundamental"] = g.is_fundamental();
    } else {
      const ModelDocument doc = parse_model_document(j);
      const ConstantStructure gamma = assemble_model(doc);
      result["kind"] = doc.filtered ? "filtered-model" : "model";
      if (!gamma.name.empty()) result["name"] = gamma.name;
      result["degrees"] = dims_json(gamma.base.dims);
      result["total_dim"] = gamma.base.dims.total();
      result["order"] = gamma.order();

      const AdmissibilityReport adm = check_admissible(gamma);
      Json viol = Json::array();
      for (const auto& v : adm.violations)
        viol.push_back(Json{{"constraint", v.constraint},
                            {"a", v.a},
                            {"b", v.b},
                            {"c", v.c}});
      checks["admissible"] = Json{{"ok", adm.admissible}, {"violations", viol}};
      checks["normal"] = adm.normal;
      ok = ok && adm.admissible;

      const BianchiResidual bia = bianchi_residual(gamma);
      if (bia.zero()) {
        checks["jacobi"] = Json{{"ok", true}};
      } else {
        ok = false;
        const auto w = *bia.witness();
        checks["jacobi"] =
            Json{{"ok", false},
                 {"witness", Json{{"x", bel_json(w[0])},
                                  {"y", bel_json(w[1])},
                                  {"z", bel_json(w[2])},
                                  {"residual", gvec_json(bia.entries.at(w))}}}};
      }
    }

    result["checks"] = checks;
    result["ok"] = ok;
    r.body["result"] = result;
    r.body["provenance"] = provenance_block(Json());
    r.status = ok ? 0 : 2;
    return r;
  });
}

Report cmd_prolong(const std::string& path, int cap) {
  const Json args = Json{{"file", path}, {"cap", cap}};
  if (cap < 1)
    return error_report("prolong", args, 64, "usage", "cap must be >= 1");
  return guarded("prolong", args, [&]() -> Report {
    const LoadedAlgebra la = load_algebra(path);
    std::string g0_note;
    ProlongationResult res;

    // Keep the symbol/g0 pair when we have it: the finite-type reduction
    // below needs both halves.
    GradedLieAlgebra symbol;
    DerivationAlgebra fam;
    bool have_pair = false;

    if (la.g.dims.top() < 0) {
      symbol = la.g;
      symbol.truncation = -1;
      fam = derivations_degree0(symbol, nullptr);
      g0_note = "full-derivations (default)";
      have_pair = true;
    } else if (la.doc.has_g0()) {
      // Rebuild the pure symbol from the document; the assembled algebra
      // already has the g0 block attached.
      symbol.name = la.doc.name;
      symbol.dims = la.doc.degrees;
      symbol.truncation = -1;
      for (const auto& [key, v] : la.doc.brackets)
        symbol.set_bracket(key.first, key.second, v);
      switch (la.doc.g0.mode) {
        case G0Spec::Mode::full_derivations:
          fam = derivations_degree0(symbol, nullptr);
          break;
        case G0Spec::Mode::metric_orthogonal:
          fam = derivations_degree0(symbol, &la.doc.g0.metric);
          break;
        case G0Spec::Mode::explicit_gens:
          // Already validated during assembly.
          fam.basis = la.doc.g0.generators;
          break;
        case G0Spec::Mode::none:
          break;
      }
      g0_note = g0_mode_name(la.doc.g0.mode);
      have_pair = true;
    } else if (la.g.complete()) {
      throw ComputationError(
          "cannot prolong a complete algebra; declare a truncation");
    } else {
      g0_note = "explicit degrees in document";
    }

    res = have_pair ? prolong_full(symbol, fam, cap) : prolong_from(la.g, cap);

    Report r;
    r.body["command"] = "prolong";
    r.body["arguments"] = args;
    Json result = Json::object();
    if (!la.g.name.empty()) result["name"] = la.g.name;
    result["verdict"] = to_string(res.verdict);
    result["cap"] = res.cap;
    result["total_dim"] = res.total_dim;
    Json dims = Json::object();
    for (const auto& [p, n] : res.dims_by_degree) dims[std::to_string(p)] = n;
    result["dims_by_degree"] = dims;
    if (res.verdict == ProlongVerdict::finite_type) {
      result["first_zero_degree"] = res.first_zero_degree;
      if (have_pair && symbol.is_fundamental()) {
        const ReductionResult red = tanaka_finite_type_reduction(symbol, fam);
        result["reduction"] =
            Json{{"f_minus_dim", red.f_minus.dims.total()},
                 {"f0_dim", static_cast<int>(red.f0.basis.size())}};
      }
    }
    r.body["result"] = result;
    r.body["provenance"] = provenance_block(Json{{"g0", g0_note}});
    r.status = 0;
    return r;
  });
}

Report cmd_cohomology(const std::string& path, int q, int r_lo, int r_hi) {
  const Json args = Json{{"file", path}, {"q", q}, {"r", Json::array({r_lo, r_hi})}};
  if (q < 0)
    return error_report("cohomology", args, 64, "usage", "q must be >= 0");
  if (r_lo > r_hi)
    return error_report("cohomology", args, 64, "usage",
                        "empty homogeneity range");
  return guarded("cohomology", args, [&]() -> Report {
    const LoadedAlgebra la = load_algebra(path);
    const CochainBase cb = cochain_base(la.g);

    Json dims = Json::array();
    for (int r = r_lo; r <= r_hi; ++r) {
      Json entry = Json::object();
      entry["r"] = r;
      const bool rep = cochain_space_representable(cb.g, std::max(q - 1, 0), r);
      entry["representable"] = rep;
      if (rep) entry["dim"] = cohomology_dim(cb.g, q, r);
      dims.push_back(std::move(entry));
    }

    Report r;
    r.body["command"] = "cohomology";
    r.body["arguments"] = args;
    Json result = Json::object();
    if (!la.g.name.empty()) result["name"] = la.g.name;
    result["q"] = q;
    result["base"] = cochain_base_json(cb);
    result["dims"] = dims;
    r.body["result"] = result;
    r.body["provenance"] = provenance_block(Json());
    r.status = 0;
    return r;
  });
}

Report cmd_invariants(const std::string& path, int cap, const std::string& convention) {
  const Json args = Json{{"file", path}, {"cap", cap}, {"convention", convention}};
  if (convention != "intro" && convention != "section5" && convention != "both")
    return error_report("invariants", args, 64, "usage",
                        "unknown convention '" + convention +
                            "'; allowed: intro, section5, both");
  if (cap < 0)
    return error_report("invariants", args, 64, "usage", "cap must be >= 0");
  return guarded("invariants", args, [&]() -> Report {
    const LoadedAlgebra la = load_algebra(path);
    const CochainBase cb = cochain_base(la.g);
    const IndexSets sets = invariant_index_sets(cb.g, cap);

    Report r;
    r.body["command"] = "invariants";
    r.body["arguments"] = args;
    Json result = Json::object();
    if (!la.g.name.empty()) result["name"] = la.g.name;
    result["cap"] = sets.cap;
    result["base"] = cochain_base_json(cb);

    auto scan = [](const std::vector<std::pair<int, int>>& v) {
      Json out = Json::array();
      for (const auto& [rr, d] : v) out.push_back(Json{{"r", rr}, {"dim", d}});
      return out;
    };
    result["h1"] = scan(sets.h1);
    result["h2"] = scan(sets.h2);

    Json conv = Json::object();
    if (convention != "section5")
      conv["intro"] = Json{{"i1", sets.i1_intro}, {"i2", sets.i2_intro}};
    if (convention != "intro")
      conv["section5"] = Json{{"i1", sets.i1_section}, {"i2", sets.i2_section}};
    result["index_sets"] = conv;
    result["r0"] = sets.r0 ? Json(*sets.r0) : Json();
    result["scan_complete"] =
        Json{{"h1", sets.scan_complete_h1}, {"h2", sets.scan_complete_h2}};
    r.body["result"] = result;
    r.body["provenance"] = provenance_block(Json{{"index_sets", convention}});
    r.status = 0;
    return r;
  });
}

Report cmd_complements(const std::string& path, int cap, const std::string& check_path) {
  const Json args = check_path.empty()
                        ? Json{{"file", path}, {"cap", cap}}
                        : Json{{"file", path}, {"cap", cap}, {"check", check_path}};
  if (cap < 1)
    return error_report("complements", args, 64, "usage", "cap must be >= 1");
  return guarded("complements", args, [&]() -> Report {
    const LoadedAlgebra la = load_algebra(path);
    const CochainBase cb = cochain_base(la.g);
    const int hi = std::min(cap, representable_hi(cb.g, cap));
    if (hi < 1)
      throw ComputationError(
          "no fully representable cochain degree within the truncation");

    Report r;
    r.body["command"] = "complements";
    r.body["arguments"] = args;
    Json result = Json::object();
    if (!la.g.name.empty()) result["name"] = la.g.name;
    result["base"] = cochain_base_json(cb);
    result["range"] = Json::array({1, hi});
    if (hi < cap) result["clamped_to_representable"] = true;

    const ComplementChoice choice = complement_select(cb.g, 1, hi);
    Json at = Json::array();
    for (const auto& a : choice.at) {
      Json e = Json::object();
      e["ell"] = a.ell;
      e["c1_dim"] = a.c1.dim();
      e["c2_dim"] = a.c2.dim();
      e["rank_d0"] = a.rank_d0;
      e["rank_d1"] = a.rank_d1;
      e["w1_dim"] = static_cast<int>(a.w1.size());
      e["w2_dim"] = static_cast<int>(a.w2.size());
      at.push_back(std::move(e));
    }
    result["at"] = at;

    int status = 0;
    if (!check_path.empty()) {
      const ComplementDocument doc =
          parse_complement_document(parse_json(read_file(check_path)));
      ComplementChoice external;
      external.lo = doc.at.empty() ? 1 : doc.at.front().ell;
      external.hi = doc.at.empty() ? 0 : doc.at.front().ell;
      for (const auto& a : doc.at) {
        ComplementAt ca;
        ca.ell = a.ell;
        ca.w1 = a.w1;
        ca.w2 = a.w2;
        external.lo = std::min(external.lo, a.ell);
        external.hi = std::max(external.hi, a.ell);
        external.at.push_back(std::move(ca));
      }
      const auto failure = complement_verify(cb.g, external);
      Json check = Json::object();
      check["file"] = check_path;
      check["ok"] = !failure.has_value();
      if (failure) {
        check["ell"] = failure->ell;
        check["which"] = failure->which;
        check["reason"] = failure->reason;
        status = 2;
      }
      result["check"] = check;
    }

    r.body["result"] = result;
    r.body["provenance"] = provenance_block(
        Json{{"complement", "orthogonal (canonical cochain basis)"}});
    r.status = status;
    return r;
  });
}

Report cmd_condition_c(const std::string& path, int cap) {
  const Json args = cap >= 1 ? Json{{"file", path}, {"cap", cap}}
                             : Json{{"file", path}};
  return guarded("condition-c", args, [&]() -> Report {
    const LoadedAlgebra la = load_algebra(path);
    const CochainBase cb = cochain_base(la.g);

    const int structural =
        cb.completed ? std::max(cb.g.dims.top(), -cb.g.depth()) + 2 * cb.g.depth()
                     : cb.g.order() + 1;
    const int want = cap >= 1 ? cap : structural;
    const int hi = representable_hi(cb.g, want);
    if (hi < 1)
      throw ComputationError(
          "no fully representable cochain degree within the truncation");
    const bool certified = cb.completed && cap < 1 && hi == structural;

    const ComplementChoice choice = complement_select(cb.g, 1, hi);
    const ConditionCReport rep = condition_c_check(cb.g, choice);

    Report r;
    r.body["command"] = "condition-c";
    r.body["arguments"] = args;
    Json result = Json::object();
    if (!la.g.name.empty()) result["name"] = la.g.name;
    result["base"] = cochain_base_json(cb);
    result["range"] = Json::array({rep.lo, rep.hi});
    result["holds"] = rep.holds;
    result["certified_complete"] = certified;
    Json wits = Json::array();
    for (const auto& w : rep.witnesses)
      wits.push_back(Json{{"ell", w.ell},
                          {"g0_index", w.g0_index},
                          {"w_index", w.w_index}});
    result["witnesses"] = wits;
    r.body["result"] = result;
    r.body["provenance"] = provenance_block(
        Json{{"complement", "orthogonal (canonical cochain basis)"},
             {"invariance", "g0 generators only; positive-degree action unchecked"}});
    r.status = 0;
    return r;
  });
}

Report cmd_model_check(const std::string& path, bool identities,
                       bool corollaries, bool verdict) {
  Json args = Json{{"file", path}};
  if (identities) args["identities"] = true;
  if (corollaries) args["corollaries"] = true;
  if (verdict) args["verdict"] = true;
  return guarded("model-check", args, [&]() -> Report {
    const Json j = parse_json(read_file(path));
    if (classify_document(j) != DocumentKind::model)
      throw SchemaError("", "model-check expects a model document");
    const ModelDocument doc = parse_model_document(j);
    const ConstantStructure gamma = assemble_model(doc);

    Report r;
    r.body["command"] = "model-check";
    r.body["arguments"] = args;
    Json result = Json::object();
    if (!gamma.name.empty()) result["name"] = gamma.name;
    result["kind"] = doc.filtered ? "filtered-model" : "model";
    result["degrees"] = dims_json(gamma.base.dims);
    result["order"] = gamma.order();
    result["depth"] = gamma.depth();

    const AdmissibilityReport adm = check_admissible(gamma);
    Json admissibility = Json::object();
    admissibility["admissible"] = adm.admissible;
    admissibility["normal"] = adm.normal;
    Json viol = Json::array();
    for (const auto& v : adm.violations)
      viol.push_back(
          Json{{"constraint", v.constraint}, {"a", v.a}, {"b", v.b}, {"c", v.c}});
    admissibility["violations"] = viol;
    Json nviol = Json::array();
    for (const auto& v : adm.normality_violations)
      nviol.push_back(
          Json{{"constraint", v.constraint}, {"a", v.a}, {"b", v.b}, {"c", v.c}});
    admissibility["normality_violations"] = nviol;
    result["admissibility"] = admissibility;

    const BianchiResidual bia = bianchi_residual(gamma);
    Json jac = Json::object();
    jac["ok"] = bia.zero();
    if (!bia.zero()) {
      const auto w = *bia.witness();
      jac["witness"] = Json{{"x", bel_json(w[0])},
                            {"y", bel_json(w[1])},
                            {"z", bel_json(w[2])},
                            {"residual", gvec_json(bia.entries.at(w))}};
    }
    result["jacobi"] = jac;

    if (identities) {
      const IdentityScan scan = identity_scan(gamma, SumBounds::displayed);
      Json ids = Json::array();
      for (int i = 0; i < 4; ++i) {
        const auto& pi = scan.identity[static_cast<size_t>(i)];
        Json e = Json::object();
        e["identity"] = i + 1;
        e["slots"] = pi.slots;
        e["nonzero"] = pi.nonzero;
        e["truncation_shadow"] = pi.shadow;
        Json wits = Json::array();
        for (const auto& [triple, shift] : pi.witnesses)
          wits.push_back(Json{{"args", Json::array({bel_json(triple[0]),
                                                    bel_json(triple[1]),
                                                    bel_json(triple[2])})},
                              {"shift", shift}});
        e["witnesses"] = wits;
        ids.push_back(std::move(e));
      }
      result["identities"] = Json{{"bounds", "displayed"},
                                  {"per_identity", ids},
                                  {"all_zero", scan.all_zero()},
                                  {"matches_jacobi", scan.all_zero() == bia.zero()}};
    }

    if (corollaries) {
      const CorollaryReport rep = corollary_checks(gamma);
      Json rows = Json::array();
      for (const auto& row : rep.rows) {
        Json e = Json::object();
        e["name"] = row.name;
        e["hypothesis"] = row.hypothesis;
        e["holds"] = row.holds;
        if (!row.witness.empty()) e["witness"] = row.witness;
        rows.push_back(std::move(e));
      }
      result["corollaries"] = Json{{"rows", rows}, {"all_pass", rep.all_pass()}};
    }

    if (verdict) {
      const FlatnessReport fl = flatness(gamma, gamma.order());
      ConditionCReport ccr;
      bool have_cc = false;
      try {
        const CochainBase cb = cochain_base(gamma.base);
        const int structural =
            cb.completed
                ? std::max(cb.g.dims.top(), -cb.g.depth()) + 2 * cb.g.depth()
                : cb.g.order() + 1;
        const int hi = representable_hi(cb.g, structural);
        if (hi >= 1) {
          ccr = condition_c_check(cb.g, complement_select(cb.g, 1, hi));
          have_cc = true;
        }
      } catch (const ComputationError&) {
        // No usable cochain range: the verdict falls back to flatness.
      }
      const PreCartanReport pc =
          pre_cartan_verdict(gamma, have_cc ? &ccr : nullptr);
      result["verdict"] = Json{{"verdict", pc.verdict},
                               {"certified", pc.certified},
                               {"caveat", pc.caveat},
                               {"condition_c", pc.condition_c},
                               {"tau_flat", pc.tau_flat},
                               {"sigma_flat", fl.sigma_flat}};
    }

    const bool ok = adm.admissible && bia.zero();
    result["ok"] = ok;
    r.body["result"] = result;
    r.body["provenance"] = provenance_block(Json{{"bounds", "displayed"}});
    r.status = ok ? 0 : 2;
    return r;
  });
}

Report cmd_gevrey(const std::string& demo, unsigned long seed, int order, int samples) {
  const Json args =
      Json{{"demo", demo}, {"seed", seed}, {"order", order}, {"samples", samples}};
  if (demo != "lemma-a" && demo != "expansion" && demo != "profile")
    return error_report("gevrey", args, 64, "usage",
                        "unknown demo '" + demo +
                            "'; allowed: lemma-a, expansion, profile");
  return guarded("gevrey", args, [&]() -> Report {
    Report r;
    r.body["command"] = "gevrey";
    r.body["arguments"] = args;
    Json result = Json::object();
    result["demo"] = demo;
    int status = 0;

    if (demo == "lemma-a") {
      if (samples < 1) throw ComputationError("samples must be >= 1");
      const LemmaAReport rep = lemma_a_check(samples, seed);
      result["samples"] = rep.samples;
      result["layer_checks"] = rep.layer_checks;
      result["total_checks"] = rep.total_checks;
      result["derivative_checks"] = rep.derivative_checks;
      result["violations"] = rep.violations;
      result["tight_bounds"] = rep.tight;
      result["ok"] = rep.violations == 0;
      if (rep.violations != 0) status = 2;
    } else if (demo == "expansion") {
      const int k_max = order > 0 ? order : 3;
      const int series_order = k_max + 3;
      if (k_max > 6) throw ComputationError("expansion level capped at 6");
      std::mt19937_64 rng(seed);
      const int n = 2;
      std::vector<SeriesVectorField> frame;
      for (int i = 0; i < n; ++i) {
        std::vector<FormalSeries> row;
        for (int jj = 0; jj < n; ++jj) {
          if (jj < i)
            row.push_back(FormalSeries::zero(n, series_order));
          else if (jj == i)
            row.push_back(FormalSeries::constant(n, series_order, Scalar(1)));
          else
            row.push_back(random_series(rng, n, series_order, 2));
        }
        frame.emplace_back(std::move(row));
      }
      const FormalSeries u = random_series(rng, n, series_order, 3);
      Json levels = Json::array();
      bool all_zero = true;
      for (int k = 1; k <= k_max; ++k) {
        const ExpansionResidual res = expansion_verify(u, frame, k);
        levels.push_back(Json{{"k", k},
                              {"slots", res.slots},
                              {"checked_order", res.checked_order},
                              {"zero", res.zero()}});
        all_zero = all_zero && res.zero();
      }
      result["variables"] = n;
      result["series_order"] = series_order;
      result["levels"] = levels;
      result["ok"] = all_zero;
      if (!all_zero) status = 2;
    } else {
      const int l_max = order > 0 ? order : 8;
      if (l_max > 10) throw ComputationError("profile depth capped at 10");
      FormalSeries f = FormalSeries::zero(2, l_max);
      for (int m = 0; m <= l_max; ++m) {
        Exponent a{m, 0};
        f.set(a, Scalar(1));
      }
      std::vector<FormalSeries> c1{FormalSeries::constant(2, l_max, Scalar(1)),
                                   FormalSeries::zero(2, l_max)};
      std::vector<FormalSeries> c2{FormalSeries::variable(2, l_max, 0),
                                   FormalSeries::constant(2, l_max, Scalar(1))};
      std::vector<SeriesVectorField> frame;
      frame.emplace_back(std::move(c1));
      frame.emplace_back(std::move(c2));
      Json profiles = Json::array();
      for (int rho = 1; rho <= 2; ++rho) {
        const EstimateProfile p = estimate_profile(f, frame, l_max, Scalar(rho));
        Json ratios = Json::array();
        for (const Scalar& s : p.ratio) ratios.push_back(scalar_to_json(s));
        profiles.push_back(Json{{"rho", rho}, {"ratio", ratios}});
      }
      result["series"] = "truncated geometric in x1";
      result["frame"] = "unit shear";
      result["depth"] = l_max;
      result["profiles"] = profiles;
      result["ok"] = true;
    }

    r.body["result"] = result;
    r.body["provenance"] = provenance_block(Json());
    r.status = status;
    return r;
  });
}

}  // namespace gs
