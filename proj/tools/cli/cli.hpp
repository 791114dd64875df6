#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

namespace grasskit::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitCheckFailed = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// One of algebra, grassmann, regions, flow, gauss, all. Result shape:
// {suite, passed, checks: [{name, passed, detail}]}. Throws
// std::invalid_argument for an unknown suite.
nlohmann::json verify_suite(const std::string& suite);

}  // namespace grasskit::cli
