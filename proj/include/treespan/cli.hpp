#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treespan {

// Command-line front end.  `args` are the words after the program name;
// results go to `out`, diagnostics to `err`.  Returns the process exit code:
//   0  success
//   1  usage or input error (bad flags, unreadable file, parse failure,
//      unavailable separator bound, reference-check budget exceeded)
//   2  well-posed but negative answer (impossible evidence, inconsistent
//      constraint network)
//   3  the computed answer disagrees with the exhaustive reference check
//      requested via --oracle
//
// Subcommands:
//   analyze <file>          decomposition levels and time/space exponents
//   infer belief <file>     posterior of --query under --evidence
//   infer mpe <file>        most probable explanation under --evidence
//   solve <file>            constraint consistency / solution / --count
//   optimize <file>         maximize an additive criterion under constraints
//   meu <file>              maximum expected utility of an influence diagram
//   bench <file>            cost-meter readings per level and strategy
//
// Every subcommand accepts --format human|records.  The records format
// emits one `record=<type> key=value ...` line per fact and is byte-stable
// across reruns on the same input.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace treespan
