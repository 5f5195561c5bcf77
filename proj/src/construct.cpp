#include "classforge/construct.hpp"

#include <algorithm>

namespace classforge {
namespace construct {

using arith::mod_floor;

static std::vector<Int> base_primes(const Int& n) {
    auto fac = arith::factor(n);
    std::vector<Int> out;
    for (const auto& [p, e] : fac.factors) out.push_back(p);
    return out;
}

static void validate(const GeneratorParams& params) {
    if (params.n <= 1 || mpz_even_p(params.n.get_mpz_t()) ||
        !arith::factor(params.n).is_squarefree())
        throw BadN("n must be squarefree, odd, and > 1");
    if (params.case_tag == CaseTag::Other)
        throw Error("generator needs one of the 5mod8 / 2mod4 / 3mod4 cases");
    if (params.extra_primes < 0 || params.a_index < 0 || params.b_index < 0)
        throw Error("indices must be non-negative");
}

static bool a_qualifies(const Int& a, const GeneratorParams& params,
                        const std::vector<Int>& ps) {
    if (mod_floor(a - 2, params.n) != 0) return false;
    for (const Int& p : ps)
        if (mod_floor(a - 2, p * p) == 0) return false;
    switch (params.case_tag) {
        case CaseTag::FiveMod8: return gcd(a, 2 * params.n) == 1;
        case CaseTag::TwoMod4: return mod_floor(a, 4) == 2;
        case CaseTag::ThreeMod4: return mod_floor(a, 4) == 0;
        default: return false;
    }
}

Int choose_a(const GeneratorParams& params) {
    validate(params);
    auto ps = base_primes(params.n);
    long remaining = params.a_index;
    for (Int a = 3;; ++a) {
        if (!a_qualifies(a, params, ps)) continue;
        if (remaining == 0) return a;
        --remaining;
    }
}

std::optional<Int> is_admissible_prime(const Int& l, const Int& a, const Int& n) {
    if (l <= 2 || mpz_even_p(l.get_mpz_t()) || !arith::is_prime(l))
        throw BadModulus("l must be an odd prime");
    if (gcd(l, 2 * a * n) != 1) return std::nullopt;
    Int inv4;
    mpz_invert(inv4.get_mpz_t(), Int(4).get_mpz_t(), l.get_mpz_t());
    Int t = mod_floor(a * a * inv4, l);
    return arith::nth_root_mod_p(n, t, l);
}

PrimeSet build_prime_set(const Int& a, const GeneratorParams& params) {
    validate(params);
    PrimeSet T;
    for (const Int& p : base_primes(params.n)) {
        // a ≡ 2 (mod p) makes X = 1 a root of 4X^n - a^2
        if (mod_floor(4 - a * a, p) != 0)
            throw Error("base prime does not admit root 1; choose_a contract broken");
        T.entries.push_back({p, Int(1), true});
    }
    long need = params.extra_primes;
    if (need == 0) return T;

    constexpr long scan_bound = 10000000;
    for (const uint32_t lp : arith::small_primes()) {
        if (lp < 3) continue;
        Int l(lp);
        if (mod_floor(params.n, l) == 0) continue;
        if (auto root = is_admissible_prime(l, a, params.n)) {
            T.entries.push_back({l, *root, false});
            if (--need == 0) return T;
        }
    }
    for (long lc = 1000001; lc < scan_bound; lc += 2) {
        Int l(lc);
        if (!arith::is_prime(l)) continue;
        if (mod_floor(params.n, l) == 0) continue;
        if (auto root = is_admissible_prime(l, a, params.n)) {
            T.entries.push_back({l, *root, false});
            if (--need == 0) return T;
        }
    }
    throw ScanExhausted("no admissible auxiliary prime below 10^7");
}

// Residue class mod l^2 that hits the root mod l but dodges the unique
// lift with 4 x^n ≡ a^2 (mod l^2).  The lift t* exists and is unique
// because F'(x0) = 4n x0^(n-1) is invertible mod l.
static arith::Congruence avoid_hensel_lift(const PrimeEntry& aux, const Int& a,
                                           const Int& n) {
    const Int& l = aux.l;
    Int l2 = l * l;
    Int fx0 = mod_floor(4 * arith::powmod(aux.root, n, l2) - a * a, l2);
    if (mod_floor(fx0, l) != 0) throw Error("stored root is not a root");
    Int u = mod_floor(fx0 / l, l);
    Int fprime = mod_floor(4 * n * arith::powmod(aux.root, n - 1, l), l);
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), fprime.get_mpz_t(), l.get_mpz_t()) == 0)
        throw Error("derivative not invertible; prime set contract broken");
    Int tstar = mod_floor(-u * inv, l);
    Int s = mod_floor(tstar + 1, l);
    return {mod_floor(aux.root + s * l, l2), l2};
}

Int choose_b(const Int& a, const PrimeSet& T, const GeneratorParams& params) {
    validate(params);
    arith::CongruenceSystem sys;
    for (const PrimeEntry& entry : T.entries) {
        if (entry.is_base)
            sys.constraints.push_back({Int(1), entry.l});
        else
            sys.constraints.push_back(avoid_hensel_lift(entry, a, params.n));
    }
    for (const auto& [q, e] : arith::factor(a).factors)
        if (q > 2) sys.constraints.push_back({Int(1), q});
    switch (params.case_tag) {
        case CaseTag::FiveMod8: sys.constraints.push_back({Int(1), Int(2)}); break;
        case CaseTag::TwoMod4: sys.constraints.push_back({Int(3), Int(4)}); break;
        default: sys.constraints.push_back({Int(1), Int(4)}); break;
    }
    auto [r, modulus] = arith::crt_combine(sys);

    // smallest x with 4 x^n >= a^2, i.e. ceil((a^2/4)^(1/n))
    Int x = arith::nth_root_floor(a * a / 4, params.n.get_ui());
    Int xn;
    mpz_pow_ui(xn.get_mpz_t(), x.get_mpz_t(), params.n.get_ui());
    while (4 * xn < a * a) {
        ++x;
        mpz_pow_ui(xn.get_mpz_t(), x.get_mpz_t(), params.n.get_ui());
    }
    Int threshold = std::max(Int(1), x);
    Int b = r;
    while (b <= threshold) b += modulus;
    b += params.b_index * modulus;
    return b;
}

KLCertificate generate(const GeneratorParams& params) {
    validate(params);
    Int a = choose_a(params);
    PrimeSet T = build_prime_set(a, params);
    Int b = choose_b(a, T, params);
    KLCertificate cert = klcert::evaluate_triple(a, b, params.n);
    if (!cert.valid() || mod_floor(cert.field.d, params.n) != 0 ||
        cert.field.case_tag != params.case_tag || gcd(params.n, cert.c) != 1)
        throw Error("generator postcondition failed");
    return cert;
}

std::vector<KLCertificate> search_small(const Int& n, CaseTag case_tag,
                                        const Int& a_max, const Int& b_max) {
    if (a_max < 2 || b_max < 2) throw Error("search bounds must be >= 2");
    GeneratorParams probe{n, case_tag, 0, 0, 0};
    validate(probe);

    std::vector<KLCertificate> out;
    const unsigned long ne = n.get_ui();
    for (Int a = 2; a <= a_max; ++a) {
        for (Int b = 2; b <= b_max; ++b) {
            Int bn;
            mpz_pow_ui(bn.get_mpz_t(), b.get_mpz_t(), ne);
            if (a * a - 4 * bn >= 0) continue;
            KLCertificate cert = klcert::evaluate_triple(a, b, n);
            if (!cert.valid()) continue;
            if (mod_floor(cert.field.d, n) != 0) continue;
            if (cert.field.case_tag != case_tag) continue;
            out.push_back(std::move(cert));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const KLCertificate& x, const KLCertificate& y) {
                  Int ax = abs(x.field.d), ay = abs(y.field.d);
                  if (ax != ay) return ax < ay;
                  if (x.a != y.a) return x.a < y.a;
                  return x.b < y.b;
              });
    return out;
}

} // namespace construct
} // namespace classforge
