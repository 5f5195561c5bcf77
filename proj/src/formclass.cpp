#include "classforge/formclass.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

namespace classforge {
namespace formclass {

using arith::mod_floor;

std::ostream& operator<<(std::ostream& os, const BQF& f) {
    return os << "(" << f.a << ", " << f.b << ", " << f.c << ")";
}

BQF principal_form(const Int& D) {
    Int b = mod_floor(D, 2);
    return BQF{Int(1), b, (b * b - D) / 4};
}

// Bring b into (-a, a], adjusting c to keep the discriminant.
static void normalize(Int& a, Int& b, Int& c) {
    Int r = mod_floor(b, 2 * a);
    if (r > a) r -= 2 * a;
    c += (r * r - b * b) / (4 * a);
    b = r;
}

BQF reduce(BQF f) {
    if (f.a <= 0 || f.discriminant() >= 0)
        throw NotImaginary("reduce expects a positive definite form");
    if (!f.is_primitive()) throw Error("form must be primitive");
    normalize(f.a, f.b, f.c);
    while (f.a > f.c) {
        std::swap(f.a, f.c); // rho step: (a, b, c) -> (c, -b, a), renormalized
        f.b = -f.b;
        normalize(f.a, f.b, f.c);
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

// Classical composition.  With d1 = gcd(a1, a2) and d = gcd(d1, (b1+b2)/2),
// the product class has leading coefficient a1*a2/d^2 and middle coefficient
// determined mod 2*a3 by the usual congruence system; (D - b1^2)/2 = -2*a1*c1.
static void compose_raw(const Int& a1, const Int& b1, const Int& c1,
                        const Int& a2, const Int& b2, const Int& D,
                        Int& a3, Int& b3, Int& c3) {
    Int d1, v, w;
    mpz_gcdext(d1.get_mpz_t(), v.get_mpz_t(), w.get_mpz_t(), a1.get_mpz_t(),
               a2.get_mpz_t());
    b3 = v * a1 * (b2 - b1);
    a3 = a1 * a2;
    if (d1 != 1) {
        Int s = (b1 + b2) / 2;
        Int d, v2, w2;
        mpz_gcdext(d.get_mpz_t(), v2.get_mpz_t(), w2.get_mpz_t(), d1.get_mpz_t(),
                   s.get_mpz_t());
        Int num = b3 * v2 + w2 * (-2 * a1 * c1);
        if (!mpz_divisible_p(num.get_mpz_t(), d.get_mpz_t()))
            throw Error("composition invariant violated");
        b3 = num / d;
        a3 /= d * d;
    }
    b3 = mod_floor(b3 + b1, 2 * a3);
    Int num = b3 * b3 - D;
    if (!mpz_divisible_p(num.get_mpz_t(), Int(4 * a3).get_mpz_t()))
        throw Error("composition invariant violated");
    c3 = num / (4 * a3);
}

BQF compose(const BQF& f, const BQF& g) {
    Int D = f.discriminant();
    if (D != g.discriminant())
        throw MismatchedDiscriminant("forms have different discriminants");
    if (!f.is_primitive() || !g.is_primitive())
        throw Error("composition needs primitive forms");
    BQF out;
    compose_raw(f.a, f.b, f.c, g.a, g.b, D, out.a, out.b, out.c);
    return reduce(out);
}

BQF inverse(const BQF& f) {
    return reduce(BQF{f.a, -f.b, f.c});
}

BQF power(const BQF& f, const Int& e) {
    Int D = f.discriminant();
    if (e < 0) return power(inverse(f), -e);
    BQF acc = principal_form(D);
    BQF base = reduce(f);
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = compose(acc, base);
        k >>= 1;
        if (k > 0) base = compose(base, base);
    }
    return acc;
}

Enumeration enumerate_class_group(const Int& D, const Budgets& budgets) {
    if (D >= 0) throw BadDiscriminant("discriminant must be negative");
    Int r4 = mod_floor(D, 4);
    if (r4 != 0 && r4 != 1)
        throw BadDiscriminant("discriminant must be 0 or 1 mod 4");
    if (-D > budgets.max_abs_disc)
        throw BudgetExceeded("|D| exceeds the enumeration budget");

    const int64_t absD = Int(-D).get_si();
    const int parity = int(absD & 1);
    Enumeration out;
    out.D = D;
    for (int64_t a = 1; 3 * a * a <= absD; ++a) {
        int64_t b = -a;
        if ((b % 2 != 0) != (parity != 0)) ++b;
        for (; b <= a; b += 2) {
            const int64_t num = b * b + absD;
            if (num % (4 * a)) continue;
            const int64_t c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && (-b == a || a == c)) continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
            out.forms.push_back(BQF{Int(long(a)), Int(long(b)), Int(long(c))});
            if (long(out.forms.size()) > budgets.max_classes)
                throw BudgetExceeded("class count exceeds the budget");
        }
    }
    return out;
}

// ---- generic structure machinery -------------------------------------------

namespace {

struct GroupView {
    long h = 1;
    long identity = 0;
    std::function<long(long, long)> op;

    long pow(long i, const Int& e) const {
        long acc = identity;
        long base = i;
        Int k = e;
        while (k > 0) {
            if (mpz_odd_p(k.get_mpz_t())) acc = op(acc, base);
            k >>= 1;
            if (k > 0) base = op(base, base);
        }
        return acc;
    }
};

Int order_in(const GroupView& G, long i, const Int& lambda,
             const arith::Factorization& lambda_fac) {
    Int m = lambda;
    for (const auto& [p, e] : lambda_fac.factors) {
        for (unsigned k = 0; k < e; ++k) {
            if (!mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) break;
            if (G.pow(i, m / p) != G.identity) break;
            m /= p;
        }
    }
    return m;
}

// Elementary divisors d1 | d2 | ... from torsion counts, plus class ids of
// elements realizing each divisor as an order.
void structure_of(const GroupView& G, std::vector<Int>& divisors,
                  std::vector<long>& generator_ids) {
    divisors.clear();
    generator_ids.clear();
    if (G.h == 1) {
        divisors.push_back(Int(1));
        generator_ids.push_back(G.identity);
        return;
    }
    auto hfac = arith::factor(Int(G.h));
    std::vector<Int> primes;
    std::vector<std::vector<unsigned>> exponents; // descending per prime
    for (const auto& [p, e] : hfac.factors) {
        std::vector<long> torsion{1};
        Int pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            long cnt = 0;
            for (long i = 0; i < G.h; ++i)
                if (G.pow(i, pk) == G.identity) ++cnt;
            torsion.push_back(cnt);
        }
        std::vector<int> ranks; // #cyclic p-factors of order >= p^k
        for (unsigned k = 1; k <= e; ++k) {
            Int ratio = Int(torsion[k]) / Int(torsion[k - 1]);
            int rk = 0;
            while (ratio > 1) {
                ratio /= p;
                ++rk;
            }
            ranks.push_back(rk);
        }
        std::vector<unsigned> exps;
        for (int j = 1; j <= ranks[0]; ++j) {
            unsigned ej = 0;
            for (unsigned k = 0; k < ranks.size(); ++k)
                if (ranks[k] >= j) ej = k + 1;
            exps.push_back(ej);
        }
        primes.push_back(p);
        exponents.push_back(std::move(exps));
    }
    size_t width = 0;
    for (const auto& ex : exponents) width = std::max(width, ex.size());
    std::vector<Int> descending;
    for (size_t i = 0; i < width; ++i) {
        Int dv = 1;
        for (size_t t = 0; t < primes.size(); ++t) {
            if (i < exponents[t].size()) {
                Int pe;
                mpz_pow_ui(pe.get_mpz_t(), primes[t].get_mpz_t(), exponents[t][i]);
                dv *= pe;
            }
        }
        descending.push_back(dv);
    }
    Int product = 1;
    for (const auto& dv : descending) product *= dv;
    if (product != G.h) throw Error("elementary divisor bookkeeping failed");

    const Int lambda = descending.front(); // group exponent
    auto lambda_fac = arith::factor(lambda);
    long gmax = -1;
    for (long i = 0; i < G.h; ++i) {
        if (order_in(G, i, lambda, lambda_fac) == lambda) {
            gmax = i;
            break;
        }
    }
    if (gmax < 0) throw Error("no element of maximal order found");

    divisors.assign(descending.rbegin(), descending.rend());
    for (const Int& dv : divisors)
        generator_ids.push_back(G.pow(gmax, lambda / dv));
}

} // namespace

ClassGroupStructure group_structure(const Int& D, const Budgets& budgets) {
    if (D >= 0)
        throw BadDiscriminant("group_structure expects D < 0; use narrow_class_group");
    Enumeration en = enumerate_class_group(D, budgets);
    std::map<BQF, long> index;
    for (long i = 0; i < en.h(); ++i) index.emplace(en.forms[i], i);
    GroupView G;
    G.h = en.h();
    G.identity = index.at(principal_form(D));
    G.op = [&](long i, long j) {
        return index.at(compose(en.forms[i], en.forms[j]));
    };
    ClassGroupStructure out;
    out.D = D;
    out.h = G.h;
    std::vector<long> gen_ids;
    structure_of(G, out.elementary_divisors, gen_ids);
    for (long id : gen_ids) out.generators.push_back(en.forms[id]);
    return out;
}

// ---- indefinite forms and rho-cycles ---------------------------------------

namespace {

struct IForm {
    int64_t a, b, c;
    friend auto operator<=>(const IForm&, const IForm&) = default;
};

// Reduced indefinite form over integers: 0 < b <= m and
// m - b < 2|a| <= m + b, where m = floor(sqrt(D)).
bool indef_reduced(const Int& a, const Int& b, const Int& m) {
    if (b <= 0 || b > m) return false;
    Int twoa = 2 * abs(a);
    return m - b < twoa && twoa <= m + b;
}

// rho: (a, b, c) -> (c, r, (r^2 - D)/(4c)) with r ≡ -b (mod 2|c|) in the
// reduction window.
void indef_rho(Int& a, Int& b, Int& c, const Int& D, const Int& m) {
    Int ac = abs(c);
    Int twoc = 2 * ac;
    Int r;
    if (ac > m) {
        r = mod_floor(-b, twoc);
        if (r > ac) r -= twoc;
    } else {
        r = m - mod_floor(m + b, twoc); // unique residue in (m - 2|c|, m]
    }
    Int cn = (r * r - D) / (4 * c);
    a = c;
    b = r;
    c = cn;
}

void indef_reduce(Int& a, Int& b, Int& c, const Int& D, const Int& m) {
    for (int guard = 0; guard < 100000; ++guard) {
        if (indef_reduced(a, b, m)) return;
        indef_rho(a, b, c, D, m);
    }
    throw Error("indefinite reduction did not terminate");
}

struct CycleGroup {
    Int D;
    Int m;
    std::vector<IForm> forms;
    std::map<IForm, long> form_index;
    std::vector<long> cycle_of; // per form
    std::vector<IForm> reps;    // a > 0 representative per cycle
    long cycles = 0;

    long class_of(Int a, Int b, Int c) const {
        indef_reduce(a, b, c, D, m);
        IForm f{a.get_si(), b.get_si(), c.get_si()};
        auto it = form_index.find(f);
        if (it == form_index.end()) throw Error("reduced form missing from cycle table");
        return cycle_of[it->second];
    }

    long op(long i, long j) const {
        const IForm& f1 = reps[i];
        const IForm& f2 = reps[j];
        Int a3, b3, c3;
        compose_raw(Int(long(f1.a)), Int(long(f1.b)), Int(long(f1.c)),
                    Int(long(f2.a)), Int(long(f2.b)), D, a3, b3, c3);
        return class_of(a3, b3, c3);
    }
};

IForm indef_principal(int64_t D, int64_t m) {
    int64_t b0 = (m % 2 == (((D % 2) + 2) % 2)) ? m : m - 1;
    return IForm{1, b0, (b0 * b0 - D) / 4};
}

CycleGroup build_cycles(const Int& D, const Budgets& budgets) {
    if (D <= 0) throw BadDiscriminant("narrow class groups need D > 0");
    Int r4 = mod_floor(D, 4);
    if (r4 != 0 && r4 != 1)
        throw BadDiscriminant("discriminant must be 0 or 1 mod 4");
    if (mpz_perfect_square_p(D.get_mpz_t()))
        throw SquareDiscriminant("discriminant must not be a square");
    if (D > budgets.max_abs_disc)
        throw BudgetExceeded("D exceeds the enumeration budget");

    CycleGroup G;
    G.D = D;
    G.m = arith::isqrt(D);
    const int64_t Dl = D.get_si();
    const int64_t m = G.m.get_si();

    for (int64_t b = (Dl % 2 == 0) ? 2 : 1; b <= m; b += 2) {
        const int64_t P = (Dl - b * b) / 4;
        for (int64_t A = 1; A * A <= P; ++A) {
            if (P % A) continue;
            for (int64_t av : {A, P / A}) {
                if (!(m - b < 2 * av && 2 * av <= m + b)) continue;
                const int64_t cv = P / av;
                if (std::gcd(std::gcd(av, b), cv) != 1) continue;
                G.forms.push_back(IForm{av, b, -cv});
                G.forms.push_back(IForm{-av, b, cv});
                if (long(G.forms.size()) > 4 * budgets.max_classes)
                    throw BudgetExceeded("reduced form count exceeds the budget");
            }
        }
    }
    std::sort(G.forms.begin(), G.forms.end());
    G.forms.erase(std::unique(G.forms.begin(), G.forms.end()), G.forms.end());
    for (long i = 0; i < long(G.forms.size()); ++i) G.form_index.emplace(G.forms[i], i);

    G.cycle_of.assign(G.forms.size(), -1);
    for (long i = 0; i < long(G.forms.size()); ++i) {
        if (G.cycle_of[i] >= 0) continue;
        long id = G.cycles++;
        IForm rep{0, 0, 0};
        long cur = i;
        while (G.cycle_of[cur] < 0) {
            G.cycle_of[cur] = id;
            const IForm& f = G.forms[cur];
            if (rep.a == 0 && f.a > 0) rep = f;
            Int a(long(f.a)), b(long(f.b)), c(long(f.c));
            indef_rho(a, b, c, G.D, G.m);
            IForm next{a.get_si(), b.get_si(), c.get_si()};
            auto it = G.form_index.find(next);
            if (it == G.form_index.end())
                throw Error("rho left the reduced-form table");
            cur = it->second;
        }
        if (rep.a == 0) throw Error("cycle without positive-lead representative");
        G.reps.push_back(rep);
        if (G.cycles > budgets.max_classes)
            throw BudgetExceeded("class count exceeds the budget");
    }
    return G;
}

GroupView view_of(const CycleGroup& G) {
    GroupView V;
    V.h = G.cycles;
    IForm e = indef_principal(G.D.get_si(), G.m.get_si());
    auto it = G.form_index.find(e);
    if (it == G.form_index.end()) throw Error("principal form missing");
    V.identity = G.cycle_of[it->second];
    V.op = [&G](long i, long j) { return G.op(i, j); };
    return V;
}

} // namespace

ClassGroupStructure narrow_class_group(const Int& D, const Budgets& budgets) {
    CycleGroup G = build_cycles(D, budgets);
    GroupView V = view_of(G);
    ClassGroupStructure out;
    out.D = D;
    out.h = V.h;
    std::vector<long> gen_ids;
    structure_of(V, out.elementary_divisors, gen_ids);
    for (long id : gen_ids) {
        const IForm& f = G.reps[id];
        out.generators.push_back(BQF{Int(long(f.a)), Int(long(f.b)), Int(long(f.c))});
    }
    return out;
}

long torsion_count(const Int& D, const Int& n, const Budgets& budgets) {
    if (n < 1) throw Error("torsion_count needs n >= 1");
    if (D < 0) {
        Enumeration en = enumerate_class_group(D, budgets);
        std::map<BQF, long> index;
        for (long i = 0; i < en.h(); ++i) index.emplace(en.forms[i], i);
        GroupView G;
        G.h = en.h();
        G.identity = index.at(principal_form(D));
        G.op = [&](long i, long j) {
            return index.at(compose(en.forms[i], en.forms[j]));
        };
        long cnt = 0;
        for (long i = 0; i < G.h; ++i)
            if (G.pow(i, n) == G.identity) ++cnt;
        return cnt;
    }
    CycleGroup G = build_cycles(D, budgets);
    GroupView V = view_of(G);
    long cnt = 0;
    for (long i = 0; i < V.h; ++i)
        if (V.pow(i, n) == V.identity) ++cnt;
    return cnt;
}

int p_rank(const Int& D, const Int& p, const Budgets& budgets) {
    if (p <= 2 || !arith::is_prime(p))
        throw Error("p_rank needs an odd prime p");
    long cnt = torsion_count(D, p, budgets);
    int rank = 0;
    Int c(cnt);
    while (c > 1) {
        if (!mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t()))
            throw Error("p-torsion count is not a power of p");
        c /= p;
        ++rank;
    }
    return rank;
}

bool has_element_of_order(const Int& D, const Int& n, const Budgets& budgets) {
    if (n < 1) throw Error("order must be positive");
    if (n == 1) return true;
    auto fac = arith::factor(n);
    for (const auto& [p, e] : fac.factors)
        if (torsion_count(D, p, budgets) <= 1) return false;
    return true;
}

static Int fundamental_disc(const Int& d) {
    return mod_floor(d, 4) == 1 ? d : Int(4 * d);
}

ScholzReport scholz_check(const Int& dprime, const Budgets& budgets) {
    if (dprime >= 0) throw BadDiscriminant("d' must be negative");
    if (mod_floor(dprime, 3) != 0) throw BadDiscriminant("3 must divide d'");
    if (arith::squarefree_decompose(dprime).first != 1)
        throw BadDiscriminant("d' must be squarefree");

    ScholzReport rep;
    rep.dprime = dprime;
    rep.d = -dprime / 3;
    rep.disc_imaginary = fundamental_disc(dprime);
    rep.disc_real = fundamental_disc(rep.d);
    rep.congruence_case = mod_floor(dprime, 8) == 5;
    rep.congruence_holds = rep.congruence_case ? mod_floor(rep.d, 8) == 1 : false;
    try {
        rep.h_imaginary = enumerate_class_group(rep.disc_imaginary, budgets).h();
        rep.hypothesis_holds = mpz_divisible_ui_p(rep.h_imaginary.get_mpz_t(), 3);
        if (!rep.hypothesis_holds) {
            rep.verdict = "HYPOTHESIS_NOT_MET";
            return rep;
        }
        rep.rank3_real = p_rank(rep.disc_real, Int(3), budgets);
        rep.verdict = rep.rank3_real >= rep.claimed_rank ? "CONFIRMED" : "REFUTED";
    } catch (const BudgetExceeded&) {
        rep.verdict = "BUDGET_EXCEEDED";
    }
    return rep;
}

} // namespace formclass
} // namespace classforge
