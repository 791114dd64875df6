#include "grasskit/report.hpp"

#include <cmath>
#include <cstdio>

namespace grasskit {

nlohmann::json CheckReport::to_json() const {
  return {{"check", check},
          {"passed", passed},
          {"samples", samples},
          {"worst_case", worst_case},
          {"parameters", parameters}};
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace grasskit
