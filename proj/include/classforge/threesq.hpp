#ifndef CLASSFORGE_THREESQ_HPP
#define CLASSFORGE_THREESQ_HPP

#include <optional>
#include <string>

#include "classforge/arith.hpp"
#include "classforge/budgets.hpp"

namespace classforge {
namespace threesq {

// Exact multiple of 1/12; Hurwitz-Kronecker class numbers land in (1/12)Z.
struct Twelfths {
    Int numerator12;

    bool is_integer() const { return arith::mod_floor(numerator12, 12) == 0; }
    Int integer_value() const {
        if (!is_integer()) throw Error("value is not an integer");
        return numerator12 / 12;
    }
    std::string str() const;

    friend bool operator==(const Twelfths& x, const Twelfths& y) {
        return x.numerator12 == y.numerator12;
    }
};

// Number of ordered signed triples (x, y, z) with x^2 + y^2 + z^2 = N,
// counted directly.  N is capped by the brute-force budget.
Int r3_bruteforce(const Int& N, const Budgets& budgets = Budgets::from_env());

// Hurwitz-Kronecker class number H(N).  Writes -N = c^2 D with D the
// fundamental discriminant and evaluates
//   H(N) = (2 h(D)/w(D)) * sum_{i | c} mu(i) (D|i) sigma1(c/i),
// w(-3) = 6, w(-4) = 4, w = 2 otherwise.  H(N) = 0 for N ≡ 1, 2 (mod 4).
Twelfths hurwitz(const Int& N, const Budgets& budgets = Budgets::from_env());

// The classical four-case count:
//   12 H(4N) for N ≡ 1, 2 (mod 4);  24 H(N) for N ≡ 3 (mod 8);
//   r(N/4)   for N ≡ 0 (mod 4);     0 for N ≡ 7 (mod 8).
Int r3_gauss(const Int& N, const Budgets& budgets = Budgets::from_env());

struct DivisibilityReport {
    Int N;
    Int n;
    Int r;                       // Gauss-route value
    std::optional<Int> r_brute;  // present when N is within the brute budget
    bool routes_agree = false;   // meaningful only when r_brute is present
    Int gcd_N_r;
    bool n_divides_gcd = false;
    bool claim_24n_applicable = false; // N ≡ 3 (mod 8)
    bool claim_24n = false;            // then 24n | r(N)
    bool claim_12n_applicable = false; // N ≡ 1, 2 (mod 4)
    bool claim_12n = false;            // then 12n | r(N)
};

DivisibilityReport divisibility_report(const Int& N, const Int& n,
                                       const Budgets& budgets = Budgets::from_env());

} // namespace threesq
} // namespace classforge

#endif
