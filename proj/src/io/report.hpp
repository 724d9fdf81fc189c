#pragma once

#include <string>

#include "io/document.hpp"

namespace gs {

inline constexpr const char* kToolName = "gstruct";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportFormat = 1;

/// A finished command report. `status` carries process-exit semantics
/// (0 ok, 2 validation failure, 3 schema error, 66 unreadable input,
/// 70 internal error); `body` is the full machine-readable content and the
/// text rendering is derived from it, so both carry identical numbers.
struct Report {
  int status = 0;
  Json body;

  std::string to_json() const;
  std::string to_text() const;
};

/// Standard provenance block. `conventions` may be null; it is included
/// verbatim under "conventions" otherwise.
Json provenance_block(const Json& conventions);

/// {"kind": ..., "message": ...} body wrapper for failed commands.
Report error_report(const std::string& command, const Json& arguments,
                    int status, const std::string& kind,
                    const std::string& message);

}  // namespace gs
