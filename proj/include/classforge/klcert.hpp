#ifndef CLASSFORGE_KLCERT_HPP
#define CLASSFORGE_KLCERT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "classforge/arith.hpp"

namespace classforge {
namespace klcert {

// Congruence class of the squarefree d < 0.
enum class CaseTag { FiveMod8, TwoMod4, ThreeMod4, Other };

const char* case_name(CaseTag tag);
std::optional<CaseTag> case_from_name(std::string_view name);
CaseTag classify(const Int& d);

// D = d for d ≡ 1 (mod 4), otherwise 4d.
Int fundamental_discriminant(const Int& d);

struct QuadField {
    Int d;
    Int D;
    CaseTag case_tag = CaseTag::Other;
};

struct KLChecks {
    bool coprime_ab = false;
    bool coprime_cn = false;
    bool b_not_unit = false;
    bool identity_holds = false;
    bool n_divides_D = false;
    bool D_negative = false;
    bool n_odd = false;

    bool all() const {
        return coprime_ab && coprime_cn && b_not_unit && identity_holds &&
               n_divides_D && D_negative && n_odd;
    }
};

// Witness triple (a, b, n) together with the derived c, field data and the
// full condition checklist.  A certificate is VALID iff every checklist
// entry holds.  The `degenerate` flag marks d ∈ {-1, -3}, where the unit
// group of Q(sqrt(d)) exceeds {±1} and the order-n conclusion is NOT
// implied even for a valid checklist (such certificates do occur, e.g.
// (a, b, n) = (17, 7, 3) lands on d = -3 with trivial class group).
struct KLCertificate {
    Int a;
    Int b;
    Int n;
    Int c;
    QuadField field;
    KLChecks checks;
    bool degenerate = false;
    bool n_squarefree = false;

    bool valid() const { return checks.all(); }
};

// Derive the certificate for (a, b, n): computes v = a^2 - 4b^n, writes
// v = c^2 D with D the fundamental discriminant of the squarefree part,
// and fills the checklist.  Throws NotImaginary when v >= 0 and BadN when
// n is even, not squarefree, or <= 1.
KLCertificate evaluate_triple(const Int& a, const Int& b, const Int& n);

struct ConditionLine {
    std::string name;
    bool pass = false;
};

struct Report {
    std::vector<ConditionLine> conditions;
    bool all_pass = false;
    bool degenerate = false;
    bool n_squarefree = false;
    bool consistent_with_stored = false;
    std::string conclusion; // set only when every condition passes
    std::string note;
};

// Recomputes every checklist item from (a, b, n) alone and compares with the
// stored certificate.  Any odd n > 1 dividing D is accepted here; whether n
// is squarefree is reported separately.  Failures are data, not errors.
Report verify_certificate(const KLCertificate& cert);

nlohmann::json to_json(const KLCertificate& cert);
KLCertificate certificate_from_json(const nlohmann::json& j);

} // namespace klcert
} // namespace classforge

#endif
