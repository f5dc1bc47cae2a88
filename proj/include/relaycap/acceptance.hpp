#ifndef RELAYCAP_ACCEPTANCE_HPP
#define RELAYCAP_ACCEPTANCE_HPP

#include <ostream>

namespace relaycap::acceptance {

/// Runs the full verification suite, one pass/fail line per criterion.
/// Returns the number of failed criteria.
int run_all(std::ostream& out, int workers = 0);

}  // namespace relaycap::acceptance

#endif
