#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qnlp::cli {

// args excludes the program name. Returns 0 on success, 1 on input errors and
// 2 on domain errors (no parse, unknown word, ...).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnlp::cli
