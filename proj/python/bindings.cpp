#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "classforge/construct.hpp"
#include "classforge/formclass.hpp"
#include "classforge/klcert.hpp"
#include "classforge/threesq.hpp"

namespace py = pybind11;
using namespace classforge;

namespace {

py::int_ to_py(const Int& z) {
    PyObject* obj = PyLong_FromString(z.get_str().c_str(), nullptr, 10);
    if (!obj) throw py::error_already_set();
    return py::reinterpret_steal<py::int_>(obj);
}

Int from_py(const py::int_& v) {
    return Int(py::str(v).cast<std::string>());
}

klcert::CaseTag case_of(const std::string& name) {
    auto tag = klcert::case_from_name(name);
    if (!tag) throw Error("unknown congruence case: " + name);
    return *tag;
}

py::dict cert_dict(const klcert::KLCertificate& c) {
    py::dict d;
    d["a"] = to_py(c.a);
    d["b"] = to_py(c.b);
    d["n"] = to_py(c.n);
    d["c"] = to_py(c.c);
    d["d"] = to_py(c.field.d);
    d["D"] = to_py(c.field.D);
    d["case"] = klcert::case_name(c.field.case_tag);
    d["valid"] = c.valid();
    d["degenerate"] = c.degenerate;
    py::dict checks;
    checks["coprime_ab"] = c.checks.coprime_ab;
    checks["coprime_cn"] = c.checks.coprime_cn;
    checks["b_not_unit"] = c.checks.b_not_unit;
    checks["identity_holds"] = c.checks.identity_holds;
    checks["n_divides_D"] = c.checks.n_divides_D;
    checks["D_negative"] = c.checks.D_negative;
    checks["n_odd"] = c.checks.n_odd;
    d["checks"] = checks;
    return d;
}

py::dict structure_dict(const formclass::ClassGroupStructure& s) {
    py::dict d;
    d["D"] = to_py(s.D);
    d["h"] = to_py(s.h);
    py::list divisors;
    for (const auto& dv : s.elementary_divisors) divisors.append(to_py(dv));
    d["elementary_divisors"] = divisors;
    py::list gens;
    for (const auto& g : s.generators)
        gens.append(py::make_tuple(to_py(g.a), to_py(g.b), to_py(g.c)));
    d["generators"] = gens;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "imaginary quadratic fields with prescribed class-group divisibility";

    py::register_exception<Error>(m, "ClassforgeError");

    m.def(
        "verify",
        [](const py::int_& a, const py::int_& b, const py::int_& n) {
            auto cert = klcert::evaluate_triple(from_py(a), from_py(b), from_py(n));
            auto rep = klcert::verify_certificate(cert);
            py::dict d = cert_dict(cert);
            d["conclusion"] = rep.conclusion;
            d["note"] = rep.note;
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("n"),
        "Evaluate the certificate for (a, b, n) and re-verify every condition.");

    m.def(
        "generate",
        [](const py::int_& n, const std::string& case_name, long extra_primes,
           long a_index, long b_index) {
            construct::GeneratorParams params{from_py(n), case_of(case_name),
                                              extra_primes, a_index, b_index};
            return cert_dict(construct::generate(params));
        },
        py::arg("n"), py::arg("case"), py::arg("extra_primes") = 0,
        py::arg("a_index") = 0, py::arg("b_index") = 0,
        "Construct a valid certificate with n | d in the requested class.");

    m.def(
        "search_small",
        [](const py::int_& n, const std::string& case_name, const py::int_& a_max,
           const py::int_& b_max) {
            py::list out;
            for (const auto& cert : construct::search_small(
                     from_py(n), case_of(case_name), from_py(a_max), from_py(b_max)))
                out.append(cert_dict(cert));
            return out;
        },
        py::arg("n"), py::arg("case"), py::arg("a_max"), py::arg("b_max"));

    m.def(
        "class_group",
        [](const py::int_& D) {
            Int disc = from_py(D);
            return structure_dict(disc < 0 ? formclass::group_structure(disc)
                                           : formclass::narrow_class_group(disc));
        },
        py::arg("D"),
        "Class-group structure: imaginary for D < 0, narrow for D > 0.");

    m.def(
        "p_rank",
        [](const py::int_& D, const py::int_& p) {
            return formclass::p_rank(from_py(D), from_py(p));
        },
        py::arg("D"), py::arg("p"));

    m.def(
        "torsion_count",
        [](const py::int_& D, const py::int_& n) {
            return formclass::torsion_count(from_py(D), from_py(n));
        },
        py::arg("D"), py::arg("n"));

    m.def(
        "scholz",
        [](const py::int_& dprime) {
            auto s = formclass::scholz_check(from_py(dprime));
            py::dict d;
            d["dprime"] = to_py(s.dprime);
            d["d"] = to_py(s.d);
            d["h_imaginary"] = to_py(s.h_imaginary);
            d["hypothesis_holds"] = s.hypothesis_holds;
            d["rank3_real"] = s.rank3_real;
            d["verdict"] = s.verdict;
            return d;
        },
        py::arg("dprime"));

    m.def(
        "r3_gauss",
        [](const py::int_& N) { return to_py(threesq::r3_gauss(from_py(N))); },
        py::arg("N"));

    m.def(
        "r3_bruteforce",
        [](const py::int_& N) { return to_py(threesq::r3_bruteforce(from_py(N))); },
        py::arg("N"));

    m.def(
        "hurwitz_numerator12",
        [](const py::int_& N) {
            return to_py(threesq::hurwitz(from_py(N)).numerator12);
        },
        py::arg("N"), "12 * H(N) as an exact integer.");

    m.def(
        "divisibility",
        [](const py::int_& N, const py::int_& n) {
            auto rep = threesq::divisibility_report(from_py(N), from_py(n));
            py::dict d;
            d["N"] = to_py(rep.N);
            d["n"] = to_py(rep.n);
            d["r"] = to_py(rep.r);
            d["r_brute"] = rep.r_brute ? py::object(to_py(*rep.r_brute))
                                       : py::object(py::none());
            d["routes_agree"] = rep.routes_agree;
            d["gcd_N_r"] = to_py(rep.gcd_N_r);
            d["n_divides_gcd"] = rep.n_divides_gcd;
            d["claim_24n"] = rep.claim_24n;
            d["claim_24n_applicable"] = rep.claim_24n_applicable;
            d["claim_12n"] = rep.claim_12n;
            d["claim_12n_applicable"] = rep.claim_12n_applicable;
            return d;
        },
        py::arg("N"), py::arg("n"));

    m.def(
        "kronecker",
        [](const py::int_& a, const py::int_& m) {
            return arith::kronecker_symbol(from_py(a), from_py(m));
        },
        py::arg("a"), py::arg("m"));

    m.def(
        "is_prime",
        [](const py::int_& n) { return arith::is_prime(from_py(n)); },
        py::arg("n"));

    m.def(
        "factor",
        [](const py::int_& m) {
            auto f = arith::factor(from_py(m));
            py::list factors;
            for (const auto& [p, e] : f.factors)
                factors.append(py::make_tuple(to_py(p), e));
            return py::make_tuple(f.sign, factors);
        },
        py::arg("m"), "(sign, [(prime, exponent), ...])");

    m.def(
        "squarefree_decompose",
        [](const py::int_& m) {
            auto [c, d] = arith::squarefree_decompose(from_py(m));
            return py::make_tuple(to_py(c), to_py(d));
        },
        py::arg("m"));

    m.def(
        "crt",
        [](const std::vector<std::pair<py::int_, py::int_>>& constraints) {
            arith::CongruenceSystem sys;
            for (const auto& [r, mod] : constraints)
                sys.constraints.push_back({from_py(r), from_py(mod)});
            auto [r, mod] = arith::crt_combine(sys);
            return py::make_tuple(to_py(r), to_py(mod));
        },
        py::arg("constraints"),
        "Solve x ≡ r_i (mod m_i); returns (residue, lcm of moduli).");
}
