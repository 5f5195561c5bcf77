#include "doctest.h"

#include <set>

#include "classforge/construct.hpp"
#include "classforge/formclass.hpp"

using namespace classforge;
using namespace classforge::construct;
using arith::mod_floor;
using arith::powmod;

namespace {

GeneratorParams make(long n, CaseTag tag, long extra = 0, long ai = 0, long bi = 0) {
    return GeneratorParams{Int(n), tag, extra, ai, bi};
}

Int pow_int(const Int& b, unsigned long n) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), n);
    return r;
}

void check_construct_invariants(const klcert::KLCertificate& cert, const Int& n,
                                CaseTag tag) {
    CHECK(cert.valid());
    CHECK(mod_floor(cert.field.d, n) == 0);
    CHECK(cert.field.case_tag == tag);
    CHECK(gcd(n, cert.c) == 1);
    CHECK(arith::squarefree_decompose(cert.field.d).first == 1);
    CHECK(klcert::verify_certificate(cert).all_pass);

    Int lhs = 4 * pow_int(cert.b, n.get_ui()) - cert.a * cert.a;
    switch (tag) {
        case CaseTag::FiveMod8:
            CHECK(mpz_odd_p(cert.a.get_mpz_t()));
            CHECK(mpz_odd_p(cert.b.get_mpz_t()));
            CHECK(mpz_odd_p(cert.c.get_mpz_t()));
            CHECK(mod_floor(cert.field.d, 8) == 5);
            break;
        case CaseTag::TwoMod4:
            CHECK(mod_floor(lhs, 16) == 8);
            break;
        case CaseTag::ThreeMod4:
            CHECK(mod_floor(lhs, 8) == 4);
            CHECK(mod_floor(cert.field.d, 4) != 1);
            break;
        default: FAIL("unexpected case");
    }
    // every base prime divides d exactly once
    for (const auto& [p, e] : arith::factor(n).factors) {
        CHECK(mod_floor(cert.field.d, p) == 0);
        CHECK(mod_floor(cert.field.d, p * p) != 0);
    }
}

} // namespace

TEST_SUITE_BEGIN("construct");

TEST_CASE("choose_a pinned values and enumeration order") {
    CHECK(choose_a(make(3, CaseTag::FiveMod8)) == 5);
    CHECK(choose_a(make(3, CaseTag::TwoMod4)) == 14);
    CHECK(choose_a(make(3, CaseTag::ThreeMod4)) == 8);
    CHECK(choose_a(make(15, CaseTag::FiveMod8)) == 17);

    Int prev = 0;
    for (long idx = 0; idx < 8; ++idx) {
        Int a = choose_a(make(15, CaseTag::FiveMod8, 0, idx));
        CHECK(a > prev);
        prev = a;
        CHECK(mod_floor(a - 2, 15) == 0);
        CHECK(gcd(a, Int(30)) == 1);
        CHECK(mod_floor(a - 2, 9) != 0);
        CHECK(mod_floor(a - 2, 25) != 0);
    }
}

TEST_CASE("is_admissible_prime") {
    auto root = is_admissible_prime(Int(7), Int(5), Int(3));
    REQUIRE(root.has_value());
    CHECK(mod_floor(4 * pow_int(*root, 3) - 25, 7) == 0);

    // base prime: gcd(l, 2an) != 1, the prime-set builder owns this case
    CHECK(!is_admissible_prime(Int(3), Int(5), Int(3)).has_value());
    // l | a
    CHECK(!is_admissible_prime(Int(5), Int(5), Int(3)).has_value());
    // 3 is not a cube mod 13 (t = a^2/4 ≡ 3, g = 3, 3^4 ≡ 3 ≠ 1)
    CHECK(!is_admissible_prime(Int(13), Int(5), Int(3)).has_value());

    CHECK_THROWS_AS(is_admissible_prime(Int(9), Int(5), Int(3)), BadModulus);
}

TEST_CASE("build_prime_set") {
    auto T0 = build_prime_set(Int(5), make(3, CaseTag::FiveMod8));
    REQUIRE(T0.entries.size() == 1);
    CHECK(T0.entries[0].l == 3);
    CHECK(T0.entries[0].root == 1);
    CHECK(T0.entries[0].is_base);

    auto T1 = build_prime_set(Int(5), make(3, CaseTag::FiveMod8, 1));
    REQUIRE(T1.entries.size() == 2);
    CHECK(T1.entries[1].l == 7); // smallest admissible auxiliary prime
    CHECK(!T1.entries[1].is_base);
    CHECK(mod_floor(4 * pow_int(T1.entries[1].root, 3) - 25, 7) == 0);

    auto T8 = build_prime_set(Int(8), make(3, CaseTag::ThreeMod4));
    REQUIRE(T8.entries.size() == 1);
    CHECK(T8.entries[0].l == 3);

    auto T15 = build_prime_set(Int(17), make(15, CaseTag::FiveMod8));
    REQUIRE(T15.entries.size() == 2);
    CHECK(T15.entries[0].l == 3);
    CHECK(T15.entries[1].l == 5);
    CHECK(T15.entries[1].is_base);
}

TEST_CASE("choose_b pinned values and conditions") {
    auto params = make(3, CaseTag::FiveMod8);
    Int a = 5;
    auto T = build_prime_set(a, params);
    Int b = choose_b(a, T, params);
    CHECK(b == 31);
    CHECK(mod_floor(b, 3) == 1);
    CHECK(mpz_odd_p(b.get_mpz_t()));
    CHECK(mod_floor(b, 5) == 1); // the stronger gcd guard
    CHECK(b > 1);
    CHECK(4 * pow_int(b, 3) > 25);

    // b_index advances by the combined modulus (2*3*5 = 30 here)
    auto shifted = make(3, CaseTag::FiveMod8, 0, 0, 2);
    CHECK(choose_b(a, T, shifted) == 31 + 2 * 30);
}

TEST_CASE("auxiliary primes get the mod-l^2 avoidance") {
    auto params = make(3, CaseTag::FiveMod8, 1);
    Int a = choose_a(params);
    auto T = build_prime_set(a, params);
    Int b = choose_b(a, T, params);
    Int lhs = 4 * pow_int(b, 3) - a * a;
    for (const auto& entry : T.entries) {
        CHECK(mod_floor(lhs, entry.l) == 0);
        CHECK(mod_floor(lhs, entry.l * entry.l) != 0);
    }
    auto cert = generate(params);
    check_construct_invariants(cert, params.n, params.case_tag);
    // the auxiliary prime 7 must appear in d exactly once
    CHECK(mod_floor(cert.field.d, 7) == 0);
    CHECK(mod_floor(cert.field.d, 49) != 0);
}

TEST_CASE("generate pinned certificates for n = 3") {
    auto c1 = generate(make(3, CaseTag::FiveMod8));
    CHECK(c1.a == 5);
    CHECK(c1.b == 31);
    CHECK(c1.field.d == -119139);
    check_construct_invariants(c1, Int(3), CaseTag::FiveMod8);

    auto c2 = generate(make(3, CaseTag::TwoMod4));
    CHECK(c2.a == 14);
    CHECK(c2.b == 43);
    CHECK(c2.field.d == -79458);
    check_construct_invariants(c2, Int(3), CaseTag::TwoMod4);

    auto c3 = generate(make(3, CaseTag::ThreeMod4));
    CHECK(c3.a == 8);
    CHECK(c3.b == 13);
    CHECK(c3.field.d == -2181);
    check_construct_invariants(c3, Int(3), CaseTag::ThreeMod4);
}

TEST_CASE("generate covers n = 5 in all cases") {
    for (CaseTag tag : {CaseTag::FiveMod8, CaseTag::TwoMod4, CaseTag::ThreeMod4}) {
        auto cert = generate(make(5, tag));
        check_construct_invariants(cert, Int(5), tag);
    }
}

TEST_CASE("generate pinned outputs for n = 5, 7, 15") {
    struct Pin {
        long n;
        CaseTag tag;
        long a;
        long b;
        const char* d;
    };
    const Pin pins[] = {
        {5, CaseTag::FiveMod8, 7, 71, "-7216917355"},
        {5, CaseTag::TwoMod4, 22, 111, "-16850581430"},
        {5, CaseTag::ThreeMod4, 12, 61, "-844596265"},
        {7, CaseTag::FiveMod8, 9, 43, "-1087274444347"},
        {7, CaseTag::TwoMod4, 30, 211, "-18619893262512346"},
        {7, CaseTag::ThreeMod4, 16, 29, "-17249876245"},
        {15, CaseTag::FiveMod8, 17, 511,
         "-169189533651581753032305633561890429892315"},
        {15, CaseTag::TwoMod4, 62, 931,
         "-342172588122574332925584379157388983769812490"},
        {15, CaseTag::ThreeMod4, 32, 61, "-602486784535040403801858645"},
    };
    for (const Pin& pin : pins) {
        auto cert = generate(make(pin.n, pin.tag));
        CHECK(cert.a == pin.a);
        CHECK(cert.b == pin.b);
        CHECK(cert.field.d == Int(pin.d));
        check_construct_invariants(cert, Int(pin.n), pin.tag);
    }
}

TEST_CASE("generated certificates really have order-n classes") {
    for (CaseTag tag : {CaseTag::FiveMod8, CaseTag::TwoMod4, CaseTag::ThreeMod4}) {
        auto cert = generate(make(3, tag));
        CHECK(!cert.degenerate);
        CHECK(formclass::has_element_of_order(cert.field.D, Int(3)));
    }
}

TEST_CASE("generate handles composite squarefree n beyond the worked set") {
    for (CaseTag tag : {CaseTag::FiveMod8, CaseTag::TwoMod4, CaseTag::ThreeMod4}) {
        auto cert = generate(make(11, tag));
        check_construct_invariants(cert, Int(11), tag);
    }
    auto cert33 = generate(make(33, CaseTag::ThreeMod4));
    check_construct_invariants(cert33, Int(33), CaseTag::ThreeMod4);
}

TEST_CASE("generate is deterministic") {
    auto a = generate(make(3, CaseTag::FiveMod8, 1, 1, 1));
    auto b = generate(make(3, CaseTag::FiveMod8, 1, 1, 1));
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
    CHECK(a.field.d == b.field.d);
}

TEST_CASE("generate rejects bad parameters") {
    CHECK_THROWS_AS(generate(make(9, CaseTag::FiveMod8)), BadN);
    CHECK_THROWS_AS(generate(make(4, CaseTag::FiveMod8)), BadN);
    CHECK_THROWS_AS(generate(make(1, CaseTag::FiveMod8)), BadN);
    CHECK_THROWS_AS(generate(make(3, CaseTag::Other)), Error);
}

TEST_CASE("search_small recovers the classical witnesses") {
    auto s1 = search_small(Int(3), CaseTag::FiveMod8, Int(20), Int(50));
    bool found = false;
    for (const auto& cert : s1)
        if (cert.a == 5 && cert.b == 7) {
            found = true;
            CHECK(cert.field.d == -1347);
        }
    CHECK(found);

    auto s2 = search_small(Int(3), CaseTag::TwoMod4, Int(20), Int(60));
    found = false;
    for (const auto& cert : s2)
        if (cert.a == 14 && cert.b == 55) {
            found = true;
            CHECK(cert.field.d == -166326);
            CHECK(cert.field.D == -665304);
        }
    CHECK(found);

    auto s3 = search_small(Int(5), CaseTag::ThreeMod4, Int(20), Int(30));
    found = false;
    for (const auto& cert : s3)
        if (cert.a == 16 && cert.b == 29) {
            found = true;
            CHECK(cert.field.d == -20511085);
        }
    CHECK(found);

    CHECK_THROWS_AS(search_small(Int(3), CaseTag::FiveMod8, Int(1), Int(50)), Error);
}

TEST_CASE("search_small output is ordered and satisfies the invariants") {
    long degenerate_count = 0;
    for (CaseTag tag : {CaseTag::FiveMod8, CaseTag::TwoMod4, CaseTag::ThreeMod4}) {
        auto certs = search_small(Int(3), tag, Int(40), Int(40));
        Int prev_abs = 0;
        for (const auto& cert : certs) {
            CHECK(cert.valid());
            CHECK(mod_floor(cert.field.d, 3) == 0);
            CHECK(cert.field.case_tag == tag);
            CHECK(abs(cert.field.d) >= prev_abs);
            prev_abs = abs(cert.field.d);
            CHECK(klcert::verify_certificate(cert).all_pass);
            if (cert.degenerate) {
                ++degenerate_count;
                CHECK(cert.field.d == -3);
            }
        }
    }
    // (17,7), (19,13), (19,31), ... land on d = -3; they must carry the flag
    CHECK(degenerate_count > 0);
}

TEST_CASE("frozen search_small counts") {
    CHECK(search_small(Int(3), CaseTag::FiveMod8, Int(40), Int(40)).size() == 48);
    CHECK(search_small(Int(3), CaseTag::TwoMod4, Int(40), Int(40)).size() == 13);
    CHECK(search_small(Int(3), CaseTag::ThreeMod4, Int(40), Int(40)).size() == 19);
}

TEST_SUITE_END();
