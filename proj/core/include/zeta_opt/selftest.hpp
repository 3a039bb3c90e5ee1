#pragma once

#include <ostream>

namespace zeta_opt::harness {

/// Quick invariant checks over every module; prints one PASS/FAIL line per
/// check and returns true if all pass.
bool run_selftest(std::ostream& out);

}  // namespace zeta_opt::harness
