// Acceptance gate: runs every criterion and prints one pass/fail line each.
#include <iostream>

#include "lfract/selftest.hpp"

int main() {
    const int failures = lfract::selftest::run_all(std::cout);
    return failures == 0 ? 0 : 1;
}
