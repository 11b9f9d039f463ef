#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "isothermic/profile.hpp"

namespace isothermic {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitVerification = 2,
  kExitIo = 3,
};

// args excludes the program name. Never throws; every failure maps to an
// exit code and a message on err (a single JSON line when --json is given).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parsers shared with the tests. All throw ValidationError.
double parse_number(const std::string& text);
ParamRect parse_window(const std::string& u1, const std::string& u2);
std::pair<int, int> parse_resolution(const std::string& text);
CoeffSpec parse_coeffs(const std::string& text);

}  // namespace isothermic
