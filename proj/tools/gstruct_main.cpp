// Command line front end. Everything substantive lives behind the shared
// library's C interface; this file only parses flags and prints reports.
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "gstruct.h"

namespace {

int emit(gs_report* rep, bool json) {
  std::fputs(json ? gs_report_json(rep) : gs_report_text(rep), stdout);
  const int status = gs_report_status(rep);
  gs_report_free(rep);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact structure computations for graded Lie algebras"};
  app.set_version_flag("--version", gs_version());
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::string file;
  std::string check_file;
  std::string convention = "both";
  std::string demo;
  int cap = 6;
  int q = 1;
  std::pair<int, int> r_range{0, 0};
  bool identities = false;
  bool corollaries = false;
  bool verdict = false;
  unsigned long seed = 2024;
  int order = 0;
  int samples = 100;

  CLI::App* validate = app.add_subcommand("validate", "check a document");
  validate->add_option("file", file, "input document")->required();

  CLI::App* prolong = app.add_subcommand("prolong", "prolongation tower");
  prolong->add_option("file", file, "input document")->required();
  prolong->add_option("--cap", cap, "highest degree to compute")->required();

  CLI::App* cohomology =
      app.add_subcommand("cohomology", "cohomology dimensions");
  cohomology->add_option("file", file, "input document")->required();
  cohomology->add_option("--q", q, "cochain degree")->required();
  std::string r_spec;
  cohomology->add_option("--r", r_spec, "homogeneity range A..B")->required();

  CLI::App* invariants = app.add_subcommand("invariants", "invariant index sets");
  invariants->add_option("file", file, "input document")->required();
  invariants->add_option("--cap", cap, "scan cap")->required();
  invariants->add_option("--convention", convention,
                         "index convention: intro, section5, or both")
      ->capture_default_str();

  CLI::App* complements =
      app.add_subcommand("complements", "normal complement selection");
  complements->add_option("file", file, "input document")->required();
  complements->add_option("--cap", cap, "highest homogeneity")->required();
  complements->add_option("--check", check_file,
                          "verify an externally supplied choice");

  CLI::App* condc = app.add_subcommand("condition-c", "invariance of the complement");
  condc->add_option("file", file, "input document")->required();
  int condc_cap = -1;
  condc->add_option("--cap", condc_cap, "highest homogeneity (default: automatic)");

  CLI::App* model = app.add_subcommand("model-check", "structure function checks");
  model->add_option("file", file, "input document")->required();
  model->add_flag("--identities", identities, "scan the four bracket identities");
  model->add_flag("--corollaries", corollaries, "evaluate the implication rows");
  model->add_flag("--verdict", verdict, "flatness verdict with caveats");

  CLI::App* gevrey = app.add_subcommand("gevrey", "formal series demonstrations");
  gevrey->add_option("demo", demo, "one of: lemma-a, expansion, profile")->required();
  gevrey->add_option("--seed", seed, "random seed")->capture_default_str();
  gevrey->add_option("--order", order, "truncation order / depth (0: default)");
  gevrey->add_option("--samples", samples, "sample count for lemma-a")
      ->capture_default_str();

  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const bool json = format == "json";

  if (validate->parsed()) return emit(gs_cmd_validate(file.c_str()), json);
  if (prolong->parsed()) return emit(gs_cmd_prolong(file.c_str(), cap), json);
  if (cohomology->parsed()) {
    const size_t dots = r_spec.find("..");
    int lo = 0, hi = 0;
    try {
      if (dots == std::string::npos) {
        lo = hi = std::stoi(r_spec);
      } else {
        lo = std::stoi(r_spec.substr(0, dots));
        hi = std::stoi(r_spec.substr(dots + 2));
      }
    } catch (const std::exception&) {
      std::fprintf(stderr, "bad --r range '%s'; expected A..B\n", r_spec.c_str());
      return GS_E_USAGE;
    }
    return emit(gs_cmd_cohomology(file.c_str(), q, lo, hi), json);
  }
  if (invariants->parsed())
    return emit(gs_cmd_invariants(file.c_str(), cap, convention.c_str()), json);
  if (complements->parsed())
    return emit(gs_cmd_complements(file.c_str(), cap,
                                   check_file.empty() ? nullptr : check_file.c_str()),
                json);
  if (condc->parsed()) return emit(gs_cmd_condition_c(file.c_str(), condc_cap), json);
  if (model->parsed())
    return emit(gs_cmd_model_check(file.c_str(), identities ? 1 : 0,
                                   corollaries ? 1 : 0, verdict ? 1 : 0),
                json);
  if (gevrey->parsed())
    return emit(gs_cmd_gevrey(demo.c_str(), seed, order, samples), json);

  return GS_E_USAGE;
}
