#include "classforge/arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <numeric>

namespace classforge {
namespace arith {

Int Factorization::reassemble() const {
    Int out = sign;
    for (const auto& [p, e] : factors) {
        Int pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        out *= pe;
    }
    return out;
}

bool Factorization::is_squarefree() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const auto& pe) { return pe.second == 1; });
}

Int mod_floor(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int powmod(const Int& base, const Int& exp, const Int& mod) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Int nth_root_floor(const Int& n, unsigned long k) {
    Int r;
    mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

const std::vector<uint32_t>& small_primes() {
    static std::vector<uint32_t> primes;
    static std::once_flag once;
    std::call_once(once, [] {
        constexpr uint32_t limit = 1000000;
        std::vector<bool> composite(limit, false);
        for (uint32_t p = 2; p < limit; ++p) {
            if (composite[p]) continue;
            primes.push_back(p);
            for (uint64_t q = uint64_t(p) * p; q < limit; q += p)
                composite[q] = true;
        }
    });
    return primes;
}

// ---- congruences ----------------------------------------------------------

std::pair<Int, Int> solve_linear_congruence(const Int& alpha, const Int& beta,
                                            const Int& m) {
    if (m < 1) throw BadModulus("modulus must be >= 1");
    Int a = mod_floor(alpha, m);
    Int b = mod_floor(beta, m);
    Int g = gcd(a, m); // gcd(0, m) = m covers alpha ≡ 0
    if (mod_floor(b, g) != 0)
        throw IncompatibleCongruence("no solution: gcd(alpha, m) does not divide beta");
    Int m1 = m / g;
    if (m1 == 1) return {Int(0), Int(1)};
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), Int(a / g).get_mpz_t(), m1.get_mpz_t()) == 0)
        throw IncompatibleCongruence("no inverse while solving linear congruence");
    return {mod_floor((b / g) * inv, m1), m1};
}

static std::pair<Int, Int> merge(const std::pair<Int, Int>& lhs,
                                 const Int& r2, const Int& m2) {
    const auto& [r1, m1] = lhs;
    Int g = gcd(m1, m2);
    Int diff = r2 - r1;
    if (mod_floor(diff, g) != 0)
        throw IncompatibleCongruence("constraints conflict modulo " + g.get_str());
    Int l = lcm(m1, m2);
    if (m1 == 1) return {mod_floor(r2, m2), m2};
    auto [k, km] = solve_linear_congruence(m1, diff, m2);
    return {mod_floor(r1 + m1 * k, l), l};
}

std::pair<Int, Int> crt_combine(const CongruenceSystem& system) {
    std::pair<Int, Int> acc{Int(0), Int(1)};
    for (const auto& c : system.constraints) {
        if (c.modulus < 1) throw BadModulus("modulus must be >= 1");
        acc = merge(acc, c.residue, c.modulus);
    }
    return acc;
}

// ---- Kronecker symbol ------------------------------------------------------

int kronecker_symbol(const Int& a_in, const Int& m_in) {
    if (m_in == 0) return (a_in == 1 || a_in == -1) ? 1 : 0;
    Int a = a_in, m = m_in;
    int result = 1;
    if (m < 0) {
        m = -m;
        if (a < 0) result = -result;
    }
    if (mpz_even_p(m.get_mpz_t())) {
        if (mpz_even_p(a.get_mpz_t())) return 0;
        unsigned long v = mpz_scan1(m.get_mpz_t(), 0);
        mpz_tdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), v);
        if (v & 1) {
            unsigned long r8 = mod_floor(a, 8).get_ui();
            if (r8 == 3 || r8 == 5) result = -result;
        }
    }
    // Jacobi part: m odd >= 1
    a = mod_floor(a, m);
    while (a != 0) {
        unsigned long v = mpz_scan1(a.get_mpz_t(), 0);
        mpz_tdiv_q_2exp(a.get_mpz_t(), a.get_mpz_t(), v);
        unsigned long m8 = mod_floor(m, 8).get_ui();
        if ((v & 1) && (m8 == 3 || m8 == 5)) result = -result;
        if (mod_floor(a, 4) == 3 && mod_floor(m, 4) == 3) result = -result;
        std::swap(a, m);
        a = mod_floor(a, m);
    }
    return m == 1 ? result : 0;
}

// ---- primality -------------------------------------------------------------

// x composite if the witness proves it; true means "no information".
static bool passes_witness(const Int& n, const Int& a, const Int& d, unsigned long s) {
    Int x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = mod_floor(x * x, n);
        if (x == n - 1) return true;
    }
    return false;
}

static uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    static const unsigned long gates[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                          23, 29, 31, 37, 41, 43, 47};
    for (unsigned long p : gates) {
        if (mpz_cmp_ui(n.get_mpz_t(), p) == 0) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

    // Deterministic for n < 2^64 with this witness set.
    static const unsigned long witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (unsigned long w : witnesses)
        if (!passes_witness(n, Int(w), d, s)) return false;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) return true;

    // 52 further rounds with bases derived deterministically from n,
    // for 64 strong rounds in total.
    uint64_t state = splitmix64(mpz_get_ui(n.get_mpz_t()) ^
                                (uint64_t(mpz_sizeinbase(n.get_mpz_t(), 2)) << 32));
    gmp_randstate_t rng;
    gmp_randinit_mt(rng);
    gmp_randseed_ui(rng, state);
    Int span = n - 3;
    bool ok = true;
    for (int i = 0; i < 52 && ok; ++i) {
        Int a;
        mpz_urandomm(a.get_mpz_t(), rng, span.get_mpz_t());
        a += 2;
        ok = passes_witness(n, a, d, s);
    }
    gmp_randclear(rng);
    return ok;
}

// ---- factoring -------------------------------------------------------------

static uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((unsigned __int128)a * b % m);
}

static uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

// Brent-cycle rho on machine words; n odd composite with no tiny factors.
// The smallest factor is below 2^31 here, so the cap is structural safety only.
static uint64_t brent_u64(uint64_t n) {
    uint64_t spent = 0;
    for (uint64_t c = 1;; ++c) {
        uint64_t y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            for (uint64_t k = 0; k < r && g == 1; k += 128) {
                ys = y;
                uint64_t lim = std::min<uint64_t>(128, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
                spent += lim;
            }
            r <<= 1;
            if (spent > (uint64_t(1) << 30))
                throw BudgetExceeded("factoring budget exhausted");
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
}

// Rho reaches prime factors up to roughly budget^2 iterations' worth
// (~3*10^15 at 2^26); larger semiprime cofactors fail cleanly instead of
// spinning.
static Int brent_mpz(const Int& n) {
    unsigned long spent = 0;
    for (unsigned long c = 1;; ++c) {
        Int y = 2, q = 1, g = 1, x, ys;
        unsigned long r = 1;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = mod_floor(y * y + c, n);
            for (unsigned long k = 0; k < r && g == 1; k += 128) {
                ys = y;
                unsigned long lim = std::min<unsigned long>(128, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = mod_floor(y * y + c, n);
                    q = mod_floor(q * abs(x - y), n);
                }
                g = gcd(q, n);
                spent += lim;
            }
            r <<= 1;
            if (spent > (1UL << 26))
                throw BudgetExceeded("factoring budget exhausted for a " +
                                     std::to_string(mpz_sizeinbase(n.get_mpz_t(), 10)) +
                                     "-digit cofactor");
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = mod_floor(ys * ys + c, n);
                g = gcd(abs(x - ys), n);
            }
        }
        if (g != n) return g;
    }
}

static Int rho_split(const Int& n) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 62)
        return Int(brent_u64(mpz_get_ui(n.get_mpz_t())));
    return brent_mpz(n);
}

static void split_cofactor(const Int& n, unsigned mult, std::map<Int, unsigned>& acc) {
    if (n == 1) return;
    if (is_prime(n)) {
        acc[n] += mult;
        return;
    }
    // rho stalls on perfect powers; peel them off first
    unsigned long bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (unsigned long k = 2; k <= bits; ++k) {
        Int root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
            split_cofactor(root, mult * unsigned(k), acc);
            return;
        }
    }
    Int d = rho_split(n);
    split_cofactor(d, mult, acc);
    split_cofactor(n / d, mult, acc);
}

Factorization factor(const Int& m) {
    if (m == 0) throw ZeroInput();
    Factorization out;
    out.sign = sgn(m) < 0 ? -1 : 1;
    Int n = abs(m);
    std::map<Int, unsigned> acc;
    for (uint32_t p : small_primes()) {
        if (mpz_cmp_ui(n.get_mpz_t(), uint64_t(p) * p) < 0) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n /= p;
            acc[Int(p)]++;
        }
    }
    split_cofactor(n, 1, acc);
    out.factors.assign(acc.begin(), acc.end());
    return out;
}

std::pair<Int, Int> squarefree_decompose(const Int& m) {
    if (m == 0) throw ZeroInput();
    Factorization f = factor(m);
    Int c = 1, d = f.sign;
    for (const auto& [p, e] : f.factors) {
        if (e / 2 > 0) {
            Int pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e / 2);
            c *= pe;
        }
        if (e % 2) d *= p;
    }
    return {c, d};
}

// ---- modular n-th roots ----------------------------------------------------

static uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

std::optional<Int> nth_root_mod_p(const Int& n, const Int& t, const Int& l) {
    if (n < 1) throw Error("n must be >= 1");
    if (l <= 2 || mpz_even_p(l.get_mpz_t()) || !is_prime(l))
        throw BadModulus("modulus must be an odd prime");
    Int tt = mod_floor(t, l);
    if (tt == 0) return Int(0);
    Int lm1 = l - 1;
    Int g = gcd(n, lm1);
    if (powmod(tt, lm1 / g, l) != 1) return std::nullopt;
    if (g == 1) {
        Int inv;
        mpz_invert(inv.get_mpz_t(), Int(mod_floor(n, lm1)).get_mpz_t(), lm1.get_mpz_t());
        return powmod(tt, inv, l);
    }
    if (l >= 1000000) throw BudgetExceeded("root search limited to primes below 10^6");
    uint64_t lp = mpz_get_ui(l.get_mpz_t());
    uint64_t e = mpz_get_ui(Int(mod_floor(n, lm1)).get_mpz_t());
    uint64_t target = mpz_get_ui(tt.get_mpz_t());
    if (e == 0) return target == 1 ? std::optional<Int>(Int(1)) : std::nullopt;
    for (uint64_t x = 1; x < lp; ++x)
        if (powmod_u64(x, e, lp) == target) return Int(x);
    return std::nullopt; // unreachable: solvability already established
}

// ---- multiplicative helpers ------------------------------------------------

int mobius(const Int& m) {
    if (m < 1) throw Error("mobius needs m >= 1");
    Factorization f = factor(m);
    if (!f.is_squarefree()) return 0;
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

Int sigma1(const Int& m) {
    if (m < 1) throw Error("sigma1 needs m >= 1");
    Factorization f = factor(m);
    Int out = 1;
    for (const auto& [p, e] : f.factors) {
        Int pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e + 1);
        out *= (pe - 1) / (p - 1);
    }
    return out;
}

std::vector<Int> squarefree_divisors(const Factorization& f) {
    std::vector<Int> out{Int(1)};
    for (const auto& [p, e] : f.factors) {
        size_t sz = out.size();
        for (size_t i = 0; i < sz; ++i) out.push_back(out[i] * p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace arith
} // namespace classforge
