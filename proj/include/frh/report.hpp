#pragma once

#include <optional>
#include <string>
#include <vector>

namespace frh::report {

enum class Suite { All, Specfun, K22, K33, Fkdv };

Suite suite_from_name(const std::string& name);

struct Entry {
  std::string id;          // e.g. "k22.t-beta[0.90]"
  int criterion = 0;       // acceptance criterion number, 1..13
  std::string module_tag;  // specfun | k22 | k33 | fkdv
  std::optional<double> reference;  // published value; empty for identities
  double computed = 0.0;
  double tolerance = 0.0;  // interpretation depends on the check; 0 = exact
  bool pass = false;
  double seconds = 0.0;
};

// Runs every check of the selected suite. `fast` halves grid densities and
// doubles the documented tolerances.
std::vector<Entry> run(Suite suite, bool fast = false);

// One PASS/FAIL line per criterion number present in the entries.
// Returns true when everything passed.
bool print_criterion_summary(const std::vector<Entry>& entries,
                             std::ostream& os);

}  // namespace frh::report
