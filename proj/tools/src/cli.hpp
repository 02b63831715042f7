#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wwqe::cli {

// Runs one wwqe subcommand (ingest-wiki, ingest-wordnet, expand, index,
// search, eval, sweep). args excludes the program name. Results go to out,
// diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wwqe::cli
