#include "classforge/threesq.hpp"

#include <cmath>

#include "classforge/formclass.hpp"

namespace classforge {
namespace threesq {

using arith::mod_floor;

std::string Twelfths::str() const {
    Int g = gcd(numerator12, Int(12));
    Int num = numerator12 / g;
    Int den = 12 / g;
    if (den == 1) return num.get_str();
    return num.get_str() + "/" + den.get_str();
}

static uint64_t isqrt_u64(uint64_t v) {
    if (v == 0) return 0;
    uint64_t r = uint64_t(std::sqrt(double(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

Int r3_bruteforce(const Int& N, const Budgets& budgets) {
    if (N < 1) throw Error("r3 needs N >= 1");
    if (N > budgets.max_r3)
        throw BudgetExceeded("N exceeds the brute-force budget");
    const uint64_t n = mpz_get_ui(N.get_mpz_t());
    uint64_t count = 0;
    for (uint64_t x = 0; x * x <= n; ++x) {
        const uint64_t rem1 = n - x * x;
        uint64_t z = isqrt_u64(rem1);
        const uint64_t xm = x ? 2 : 1;
        for (uint64_t y = 0; y * y <= rem1; ++y) {
            const uint64_t rem = rem1 - y * y;
            while (z * z > rem) --z;
            if (z * z == rem)
                count += xm * (y ? 2 : 1) * (z ? 2 : 1);
        }
    }
    return Int(count);
}

Twelfths hurwitz(const Int& N, const Budgets& budgets) {
    if (N < 1) throw Error("hurwitz needs N >= 1");
    Int r4 = mod_floor(N, 4);
    if (r4 == 1 || r4 == 2) return Twelfths{Int(0)};

    auto fac = arith::factor(N); // -N = c0^2 d, d squarefree < 0
    Int c0 = 1, d = -1;
    for (const auto& [p, e] : fac.factors) {
        if (e / 2 > 0) {
            Int pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e / 2);
            c0 *= pe;
        }
        if (e % 2) d *= p;
    }
    Int D, c;
    if (mod_floor(d, 4) == 1) {
        D = d;
        c = c0;
    } else {
        // N ≡ 0 (mod 4) forces c0 even here
        D = 4 * d;
        if (mpz_odd_p(c0.get_mpz_t())) throw Error("decomposition invariant violated");
        c = c0 / 2;
    }
    Int h = formclass::enumerate_class_group(D, budgets).h();
    long w = D == -3 ? 6 : (D == -4 ? 4 : 2);

    Int sum = 0;
    auto cfac = arith::factor(c);
    for (const Int& i : arith::squarefree_divisors(cfac))
        sum += Int(arith::mobius(i)) * arith::kronecker_symbol(D, i) *
               arith::sigma1(c / i);
    return Twelfths{(24 / w) * h * sum};
}

Int r3_gauss(const Int& N, const Budgets& budgets) {
    if (N < 1) throw Error("r3 needs N >= 1");
    Int M = N;
    while (mod_floor(M, 4) == 0) M /= 4;
    Int r8 = mod_floor(M, 8);
    if (r8 == 7) return Int(0);
    if (r8 == 3) return hurwitz(M, budgets).numerator12 * 2; // 24 H(M)
    return hurwitz(4 * M, budgets).numerator12;              // 12 H(4M)
}

DivisibilityReport divisibility_report(const Int& N, const Int& n,
                                       const Budgets& budgets) {
    if (N < 1) throw Error("divisibility report needs N >= 1");
    if (n <= 1 || mpz_even_p(n.get_mpz_t()) || !arith::factor(n).is_squarefree())
        throw BadN("n must be squarefree, odd, and > 1");

    DivisibilityReport rep;
    rep.N = N;
    rep.n = n;
    rep.r = r3_gauss(N, budgets);
    if (N <= budgets.max_r3) {
        rep.r_brute = r3_bruteforce(N, budgets);
        rep.routes_agree = *rep.r_brute == rep.r;
    }
    rep.gcd_N_r = gcd(N, rep.r);
    rep.n_divides_gcd = mod_floor(rep.gcd_N_r, n) == 0;
    rep.claim_24n_applicable = mod_floor(N, 8) == 3;
    Int r4 = mod_floor(N, 4);
    rep.claim_12n_applicable = r4 == 1 || r4 == 2;
    if (rep.claim_24n_applicable) rep.claim_24n = mod_floor(rep.r, 24 * n) == 0;
    if (rep.claim_12n_applicable) rep.claim_12n = mod_floor(rep.r, 12 * n) == 0;
    return rep;
}

} // namespace threesq
} // namespace classforge
