#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mbl {

/// Exit codes: 0 success, 1 verification failure, 2 usage or input error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace mbl
