#include "io/report.hpp"

#include <cstdlib>
#include <sstream>

namespace gs {

namespace {

bool is_rational(const Json& j) {
  return j.is_object() && j.size() == 2 && j.contains("num") && j.contains("den");
}

bool is_scalarish(const Json& j) {
  return j.is_primitive() || is_rational(j);
}

void render_scalar(std::ostream& os, const Json& j) {
  if (is_rational(j)) {
    const Json& num = j["num"];
    const Json& den = j["den"];
    const bool unit = den.is_number_integer() && den.get<long>() == 1;
    if (num.is_string())
      os << num.get<std::string>();
    else
      os << num;
    if (!unit) {
      os << "/";
      if (den.is_string())
        os << den.get<std::string>();
      else
        os << den;
    }
  } else if (j.is_string()) {
    os << j.get<std::string>();
  } else if (j.is_null()) {
    os << "none";
  } else {
    os << j;  // numbers, booleans
  }
}

void render(std::ostream& os, const Json& j, int indent);

void render_inline_array(std::ostream& os, const Json& j) {
  os << "[";
  bool first = true;
  for (const auto& el : j) {
    if (!first) os << ", ";
    first = false;
    render_scalar(os, el);
  }
  os << "]";
}

std::string pad(int indent) { return std::string(static_cast<size_t>(indent), ' '); }

/// Objects render as "key: value" lines, arrays of scalars inline, arrays of
/// structures as "-" items. Every leaf in the JSON body appears verbatim.
void render(std::ostream& os, const Json& j, int indent) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      os << pad(indent) << it.key() << ":";
      const Json& v = it.value();
      if (is_scalarish(v)) {
        os << " ";
        render_scalar(os, v);
        os << "\n";
      } else if (v.is_array()) {
        bool flat = true;
        for (const auto& el : v) flat = flat && is_scalarish(el);
        if (v.empty() || flat) {
          os << " ";
          render_inline_array(os, v);
          os << "\n";
        } else {
          os << "\n";
          for (const auto& el : v) {
            if (is_scalarish(el)) {
              os << pad(indent + 2) << "- ";
              render_scalar(os, el);
              os << "\n";
            } else if (el.is_array()) {
              os << pad(indent + 2) << "- ";
              render_inline_array(os, el);
              os << "\n";
            } else {
              std::ostringstream sub;
              render(sub, el, indent + 4);
              std::string block = sub.str();
              // Replace the first item line's indentation with "- ".
              os << pad(indent + 2) << "- " << block.substr(static_cast<size_t>(indent) + 4);
            }
          }
        }
      } else if (v.is_object() && v.empty()) {
        os << " {}\n";
      } else {
        os << "\n";
        render(os, v, indent + 2);
      }
    }
  } else {
    os << pad(indent);
    render_scalar(os, j);
    os << "\n";
  }
}

}  // namespace

std::string Report::to_json() const { return body.dump(2) + "\n"; }

std::string Report::to_text() const {
  std::ostringstream os;
  render(os, body, 0);
  return os.str();
}

Json provenance_block(const Json& conventions) {
  Json p = Json::object();
  p["tool"] = kToolName;
  p["version"] = kToolVersion;
  p["report_format"] = kReportFormat;
  const char* threads = std::getenv("GSTRUCT_THREADS");
  p["threads"] = threads ? Json(std::string(threads)) : Json("auto");
  if (!conventions.is_null()) p["conventions"] = conventions;
  return p;
}

Report error_report(const std::string& command, const Json& arguments,
                    int status, const std::string& kind,
                    const std::string& message) {
  Report r;
  r.status = status;
  r.body = Json::object();
  r.body["command"] = command;
  r.body["arguments"] = arguments;
  r.body["error"] = Json{{"kind", kind}, {"message", message}};
  r.body["provenance"] = provenance_block(Json());
  return r;
}

}  // namespace gs
