#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rht {

// rht <command> [options] ...; returns the exit code
// 0 pass, 1 a check failed, 2 inconclusive, 3 usage or parse error
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rht
