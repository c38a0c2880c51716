#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "posepipe/error.hpp"

namespace posepipe {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,  // bad flags, config, or missing input paths
  kExitData = 3,   // malformed input, out-of-vocabulary word, missing phone
  kExitIo = 4,
};

int exit_code_for(ErrorKind kind);

/// Entry point of the `posepipe` tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Directory holding the bundled lexicon and pinyin table.
std::string default_data_dir();

}  // namespace posepipe
