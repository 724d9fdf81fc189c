#include "gstruct.h"

#include <cstring>
#include <string>

#include "core/error.hpp"
#include "io/document.hpp"
#include "io/report.hpp"
#include "io/run.hpp"

struct gs_report {
  int status = 0;
  std::string text;
  std::string json;
};

struct gs_algebra {
  gs::GradedLieAlgebra g;
};

namespace {

gs_report* wrap(const gs::Report& r) {
  auto* out = new gs_report;
  out->status = r.status;
  out->text = r.to_text();
  out->json = r.to_json();
  return out;
}

}  // namespace

extern "C" const char* gs_version(void) { return gs::kToolVersion; }

extern "C" int gs_report_status(const gs_report* r) { return r ? r->status : GS_E_INTERNAL; }

extern "C" const char* gs_report_text(const gs_report* r) {
  return r ? r->text.c_str() : "";
}

extern "C" const char* gs_report_json(const gs_report* r) {
  return r ? r->json.c_str() : "";
}

extern "C" void gs_report_free(gs_report* r) { delete r; }

extern "C" gs_report* gs_cmd_validate(const char* file) {
  return wrap(gs::cmd_validate(file ? file : ""));
}

extern "C" gs_report* gs_cmd_prolong(const char* file, int cap) {
  return wrap(gs::cmd_prolong(file ? file : "", cap));
}

extern "C" gs_report* gs_cmd_cohomology(const char* file, int q, int r_lo, int r_hi) {
  return wrap(gs::cmd_cohomology(file ? file : "", q, r_lo, r_hi));
}

extern "C" gs_report* gs_cmd_invariants(const char* file, int cap, const char* convention) {
  return wrap(gs::cmd_invariants(file ? file : "", cap,
                                 convention ? convention : "both"));
}

extern "C" gs_report* gs_cmd_complements(const char* file, int cap, const char* check_file) {
  return wrap(gs::cmd_complements(file ? file : "", cap,
                                  check_file ? check_file : ""));
}

extern "C" gs_report* gs_cmd_condition_c(const char* file, int cap) {
  return wrap(gs::cmd_condition_c(file ? file : "", cap));
}

extern "C" gs_report* gs_cmd_model_check(const char* file, int identities,
                                         int corollaries, int verdict) {
  return wrap(gs::cmd_model_check(file ? file : "", identities != 0,
                                  corollaries != 0, verdict != 0));
}

extern "C" gs_report* gs_cmd_gevrey(const char* demo, unsigned long seed,
                                    int order, int samples) {
  return wrap(gs::cmd_gevrey(demo ? demo : "", seed, order, samples));
}

extern "C" gs_algebra* gs_algebra_load(const char* file, char* errbuf, int errbuf_len) {
  auto fail = [&](const std::string& msg) -> gs_algebra* {
    if (errbuf && errbuf_len > 0) {
      std::strncpy(errbuf, msg.c_str(), static_cast<size_t>(errbuf_len) - 1);
      errbuf[errbuf_len - 1] = '\0';
    }
    return nullptr;
  };
  try {
    const gs::Json j = gs::parse_json(gs::read_file(file ? file : ""));
    if (gs::classify_document(j) != gs::DocumentKind::algebra)
      return fail("expected an algebra document");
    auto* out = new gs_algebra{gs::assemble_algebra(gs::parse_algebra_document(j))};
    if (errbuf && errbuf_len > 0) errbuf[0] = '\0';
    return out;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

extern "C" int gs_algebra_total_dim(const gs_algebra* a) {
  return a ? a->g.dims.total() : 0;
}

extern "C" int gs_algebra_dim(const gs_algebra* a, int degree) {
  return a ? a->g.dims.at(degree) : 0;
}

extern "C" int gs_algebra_depth(const gs_algebra* a) {
  return a ? a->g.depth() : 0;
}

extern "C" int gs_algebra_complete(const gs_algebra* a) {
  return a && a->g.complete() ? 1 : 0;
}

extern "C" int gs_algebra_order(const gs_algebra* a) {
  if (!a) return -2;
  return a->g.complete() ? -2 : a->g.order();
}

extern "C" void gs_algebra_free(gs_algebra* a) { delete a; }
