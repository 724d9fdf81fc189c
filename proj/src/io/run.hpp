#pragma once

#include <string>

#include "io/report.hpp"

namespace gs {

// One function per command. Every function catches schema, validation, and
// I/O failures and returns a Report whose status carries the exit semantics;
// none of them throw.

Report cmd_validate(const std::string& path);

/// Prolongs the algebra in `path` to `cap`. Pure symbols without a g0 request
/// get the full degree-0 derivation algebra (recorded in the report).
Report cmd_prolong(const std::string& path, int cap);

/// dim H^q_r for r in [r_lo, r_hi].
Report cmd_cohomology(const std::string& path, int q, int r_lo, int r_hi);

/// convention: "intro", "section5", or "both".
Report cmd_invariants(const std::string& path, int cap, const std::string& convention);

/// Orthogonal complement selection through degree cap; when `check_path` is
/// nonempty, verifies the externally supplied choice instead of reporting
/// the computed one alone.
Report cmd_complements(const std::string& path, int cap, const std::string& check_path);

/// cap < 0 selects the full certifiable range automatically.
Report cmd_condition_c(const std::string& path, int cap);

Report cmd_model_check(const std::string& path, bool identities,
                       bool corollaries, bool verdict);

/// demo: "lemma-a", "expansion", or "profile".
Report cmd_gevrey(const std::string& demo, unsigned long seed, int order, int samples);

}  // namespace gs
