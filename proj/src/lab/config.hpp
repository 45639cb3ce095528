#pragma once

#include <string>
#include <vector>

#include "harness/limit.hpp"
#include "harness/run.hpp"

namespace bpl {

struct OutputConfig {
  std::string dir = "bpl_out";
  bool snapshots = true;  // write the final state as a binary snapshot
  bool plots = true;      // write gnuplot data files
};

/// Everything a lab invocation needs. Every field has a default, so the empty
/// document is a valid configuration.
struct LabConfig {
  RunConfig run;
  SweepConfig sweep;
  OutputConfig output;
  std::vector<std::string> sections;  // sections present in the parsed text
};

/// INI-style document:
///
///   # comment            ; comment
///   [section]
///   key = value
///
/// Sections: grid, patch, theta0, kappa, solver, sweep, output. Lists are
/// comma separated; booleans accept true/false/yes/no/on/off/1/0; "inf" is a
/// valid exponent. Unknown sections or keys, duplicate keys, malformed values
/// and sections named in `required` but absent all raise Config errors that
/// carry the line number. The result is validated.
LabConfig parse_config(const std::string& text, const std::vector<std::string>& required = {});
LabConfig load_config(const std::string& path, const std::vector<std::string>& required = {});

/// Fully resolved document (δ made explicit, every key written) that parses
/// back to the same configuration.
std::string config_to_text(const LabConfig& cfg);

}  // namespace bpl
