#pragma once

#include <iosfwd>

namespace lfract::selftest {

// Runs the full acceptance suite, printing one pass/fail line per criterion.
// Returns the number of failed criteria (0 = all green).
int run_all(std::ostream& out);

} // namespace lfract::selftest
