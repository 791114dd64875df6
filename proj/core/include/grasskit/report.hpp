#pragma once

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

namespace grasskit {

// Outcome of a sampling verifier. Serialized as
// {check, passed, samples, worst_case, parameters}.
struct CheckReport {
  std::string check;
  bool passed = false;
  std::size_t samples = 0;
  nlohmann::json worst_case = nlohmann::json::object();
  nlohmann::json parameters = nlohmann::json::object();

  nlohmann::json to_json() const;
};

// Fixed 17-significant-digit rendering used for every CSV cell.
std::string format_double(double value);

// Pretty-printed JSON with a trailing newline. Keys are sorted, so equal
// documents always produce equal bytes.
std::string dump_json(const nlohmann::json& doc);

}  // namespace grasskit
