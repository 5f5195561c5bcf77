#ifndef CLASSFORGE_ARITH_HPP
#define CLASSFORGE_ARITH_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "classforge/errors.hpp"

namespace classforge {

// Exact signed integer; all arithmetic in the library goes through this type.
using Int = mpz_class;

namespace arith {

// One constraint x ≡ residue (mod modulus), modulus >= 1.
struct Congruence {
    Int residue;
    Int modulus;
};

struct CongruenceSystem {
    std::vector<Congruence> constraints;
};

// sign * prod p_i^e_i with the p_i strictly increasing primes.
struct Factorization {
    int sign = 1;
    std::vector<std::pair<Int, unsigned>> factors;

    Int reassemble() const;
    bool is_squarefree() const;
};

// ---- small helpers -------------------------------------------------------

// Least non-negative residue of a mod m (m > 0).
Int mod_floor(const Int& a, const Int& m);

Int powmod(const Int& base, const Int& exp, const Int& mod);

Int isqrt(const Int& n);
bool is_perfect_square(const Int& n);

// floor(n^(1/k)) for n >= 0, k >= 1.
Int nth_root_floor(const Int& n, unsigned long k);

// Primes below 10^6 (shared sieve).
const std::vector<uint32_t>& small_primes();

// ---- operations ----------------------------------------------------------

// Solve the whole system; returns (residue, modulus) with modulus the lcm of
// all constraint moduli and 0 <= residue < modulus.  Moduli need not be
// pairwise coprime.  Throws IncompatibleCongruence if two constraints
// conflict modulo their gcd.
std::pair<Int, Int> crt_combine(const CongruenceSystem& system);

// Solve alpha*x ≡ beta (mod m), m >= 1.  Returns the solution class
// (x0, m/g) with g = gcd(alpha, m); throws IncompatibleCongruence when
// g does not divide beta.
std::pair<Int, Int> solve_linear_congruence(const Int& alpha, const Int& beta,
                                            const Int& m);

// Full Kronecker extension of the Jacobi/Legendre symbol (a/m); defined for
// every m including m <= 0 and m even.
int kronecker_symbol(const Int& a, const Int& m);

// Strong probable-prime test: deterministic witness set below 2^64,
// 64 rounds above (error < 2^-128).
bool is_prime(const Int& n);

// Trial division below 10^6, then Brent-cycle Pollard rho with a fixed
// parameter sequence, so identical inputs always factor identically.
Factorization factor(const Int& m);

// m = c^2 * d with d squarefree and sign(d) = sign(m); c > 0.
std::pair<Int, Int> squarefree_decompose(const Int& m);

// Some X with X^n ≡ t (mod l) for odd prime l with gcd(t, l) = 1, or
// nullopt when no solution exists.  Solvability is decided by
// t^((l-1)/g) ≡ 1 (mod l), g = gcd(n, l-1); roots are located by direct
// search, so l is restricted to l < 10^6 (BudgetExceeded beyond).
std::optional<Int> nth_root_mod_p(const Int& n, const Int& t, const Int& l);

int mobius(const Int& m);

Int sigma1(const Int& m);

// Squarefree divisors of the integer described by f (positive part only),
// in increasing order.  Convenience for Möbius sums.
std::vector<Int> squarefree_divisors(const Factorization& f);

} // namespace arith
} // namespace classforge

#endif
