#ifndef JETKT_TOOLS_CLI_HPP
#define JETKT_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace jetkt::cli {

enum Exit { Success = 0, Usage = 1, Parse = 2, Validation = 3, Rejected = 4 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace jetkt::cli

#endif
