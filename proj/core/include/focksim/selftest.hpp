#pragma once

#include <iosfwd>

namespace focksim {

/// Run the built-in invariant suite (operator identities, channel properties,
/// measurement completeness, marginal normalization), printing one line per
/// check. Returns the number of failed checks.
int run_selftest(std::ostream& out);

} // namespace focksim
