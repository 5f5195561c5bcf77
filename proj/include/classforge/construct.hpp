#ifndef CLASSFORGE_CONSTRUCT_HPP
#define CLASSFORGE_CONSTRUCT_HPP

#include <optional>
#include <vector>

#include "classforge/arith.hpp"
#include "classforge/klcert.hpp"

namespace classforge {
namespace construct {

using klcert::CaseTag;
using klcert::KLCertificate;

struct GeneratorParams {
    Int n;                               // squarefree odd > 1
    CaseTag case_tag = CaseTag::FiveMod8; // FiveMod8, TwoMod4 or ThreeMod4
    long extra_primes = 0;               // auxiliary primes beyond the p_i
    long a_index = 0;
    long b_index = 0;
};

struct PrimeEntry {
    Int l;        // odd prime
    Int root;     // 4 * root^n ≡ a^2 (mod l)
    bool is_base; // l | n
};

struct PrimeSet {
    std::vector<PrimeEntry> entries;
};

// Smallest qualifying a (a ≡ 2 mod n, a ≢ 2 mod p_i^2 for every prime
// p_i | n, plus the case constraint: gcd(a, 2n) = 1 / a ≡ 2 mod 4 /
// a ≡ 0 mod 4), advanced a_index steps through the full qualifying
// sequence in increasing order.
Int choose_a(const GeneratorParams& params);

// Root x0 of 4 X^n ≡ a^2 (mod l) when one exists and gcd(l, 2an) = 1;
// nullopt otherwise.  Base primes l | n are not admissible here — the
// prime-set builder seeds them with root 1 directly.
std::optional<Int> is_admissible_prime(const Int& l, const Int& a, const Int& n);

// All primes dividing n (root 1), then the first extra_primes admissible
// auxiliary primes in increasing order.  Scanning stops at 10^7.
PrimeSet build_prime_set(const Int& a, const GeneratorParams& params);

// Smallest b > max(1, ceil((a^2/4)^(1/n))) in the CRT class that forces
//   4b^n ≡ a^2 (mod l), ≢ (mod l^2) for every l in T,
//   gcd(a, b) = 1 (via b ≡ 1 mod each odd prime of a), and the case's
//   parity constraint; advanced b_index steps of the combined modulus.
Int choose_b(const Int& a, const PrimeSet& T, const GeneratorParams& params);

// choose_a → build_prime_set → choose_b → evaluate_triple.  The result is
// a valid certificate with n | d, d squarefree, d in the requested
// congruence class and gcd(n, c) = 1.
KLCertificate generate(const GeneratorParams& params);

// Exhaustive scan of 2 <= a <= a_max, 2 <= b <= b_max emitting every valid
// certificate with n | d and d in the requested class, ordered by
// (|d|, a, b).
std::vector<KLCertificate> search_small(const Int& n, CaseTag case_tag,
                                        const Int& a_max, const Int& b_max);

} // namespace construct
} // namespace classforge

#endif
