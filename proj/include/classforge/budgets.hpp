#ifndef CLASSFORGE_BUDGETS_HPP
#define CLASSFORGE_BUDGETS_HPP

#include <cstdint>

namespace classforge {

// Enumeration limits.  CLASSFORGE_BUDGET=<N> rescales the whole set
// proportionally (class budget N, brute-force bound 100*N, discriminant
// bound 200000*N).
struct Budgets {
    long max_classes = 1000000;              // class-group size cap
    int64_t max_abs_disc = 200000000000LL;   // |D| cap for form enumeration
    int64_t max_r3 = 100000000LL;            // N cap for the brute-force counter

    static const Budgets& from_env();
};

} // namespace classforge

#endif
