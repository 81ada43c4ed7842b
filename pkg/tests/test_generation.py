import json
import math

import pytest

from frobgen.diffop import DiffOp, witness_generators
from frobgen.errors import (
    InvalidInput,
    UnsupportedPrime,
    ZeroInput,
)
from frobgen.frobdecomp import decompose, ideal_J
from frobgen.generation import (
    LocalizationElement,
    apply_to_localization,
    example_quadric_witness,
    frobenius_descent,
    generator_witness,
    inverse_p_power,
    inverse_power,
    load_certificate,
    one_over,
    power_witness,
    verify_certificate,
)
from frobgen.groebner import membership
from frobgen.poly import PolyRing

from .conftest import rand_poly


def ring(p, d):
    return PolyRing(p, d)


# --- localization elements ---------------------------------------------------


def test_localization_equality_and_lift():
    R = ring(3, 1)
    x = R.gen(0)
    u = one_over(x)
    assert u == LocalizationElement(x, R.parse("x1^2"), 1)  # x^2/x^3 = 1/x
    assert u.lift(2) == u
    assert u != inverse_p_power(x, 1)
    with pytest.raises(InvalidInput):
        LocalizationElement(x, R.one(), 2).lift(1)
    with pytest.raises(ZeroInput):
        LocalizationElement(R.zero(), R.one(), 0)


def test_inverse_power_representations():
    R = ring(3, 1)
    x = R.gen(0)
    assert inverse_power(x, 1) == one_over(x)
    assert inverse_power(x, 3) == inverse_p_power(x, 1)
    assert inverse_power(x, 9) == inverse_p_power(x, 2)
    # 1/x^2 = x^7/x^9
    assert inverse_power(x, 2) == LocalizationElement(x, R.parse("x1^7"), 2)


# --- the f = x anchors ---------------------------------------------------------


def test_divided_power_maps_one_over_x_down():
    # D_(p-1) sends 1/x to 1/x^p; the one-equation case
    for p in (2, 3, 5, 7):
        R = ring(p, 1)
        x = R.gen(0)
        D = DiffOp.divided_power(R, (p - 1,))
        assert apply_to_localization(D, one_over(x)) == inverse_p_power(x, 1)


def test_descent_certificate_for_x_p3():
    R = ring(3, 1)
    cert = frobenius_descent(R.gen(0))
    assert cert.s == 2 and cert.verified
    assert len(cert.operator.parts) == 1
    alpha, h, op = cert.operator.parts[0]
    assert alpha == (8,)
    assert h == R.parse("x1^6")
    assert op == DiffOp.divided_power(R, (8,))
    # Q(x^8) = x^6
    assert cert.operator.apply(R.parse("x1^8")) == R.parse("x1^6")


def test_descent_certificate_for_x_all_primes():
    for p in (2, 3, 5, 7):
        R = ring(p, 1)
        cert = frobenius_descent(R.gen(0))
        assert cert.verified
        got = apply_to_localization(cert.operator, one_over(R.gen(0)))
        assert got == inverse_p_power(R.gen(0), 1)


def test_descent_constant_short_circuit():
    R = ring(5, 2)
    cert = frobenius_descent(R.constant(3))
    assert cert.verified and cert.s == 1
    assert cert.operator.apply(R.one()) == R.one()
    # 1/3 = 2 in F_5 and the action fixes it
    u = one_over(R.constant(3))
    assert apply_to_localization(cert.operator, u) == u


def test_descent_quadric_p2():
    R = ring(2, 4)
    f = R.parse("x1^2+x2^2+x3^2+x4^2")
    cert = frobenius_descent(f)
    assert cert.s == 2 and cert.verified
    q = 2**2
    # independent expansion: apply the operator the slow way
    fbig = f ** (q - 1)
    expect = f ** (q - 2)
    acc = R.zero()
    for _, h, op in cert.operator.parts:
        acc = acc + h * op.apply(fbig)
    assert acc == expect
    assert cert.operator.expand().apply(fbig) == expect


def test_descent_zero_rejected():
    with pytest.raises(ZeroInput):
        frobenius_descent(ring(3, 1).zero())


def test_expanded_certificate():
    R = ring(3, 2)
    f = R.parse("x1*x2")
    cert = frobenius_descent(f, expand=True)
    assert isinstance(cert.operator, DiffOp)
    assert cert.verified
    names = [e["check"] for e in cert.transcript]
    assert "witness_actions" not in names
    ok, _ = verify_certificate(cert.to_json())
    assert ok


# --- well-definedness of the action ---------------------------------------------


def test_action_independent_of_lift_level():
    R = ring(3, 2)
    f = R.parse("x1^2+x2^3")
    cert = frobenius_descent(f)
    Q = cert.operator
    u = one_over(f)
    base = apply_to_localization(Q, u)
    for extra in (1, 2):
        lifted = u.lift(max(u.level, Q.level()) + extra)
        assert apply_to_localization(Q, lifted) == base


def test_action_of_identity_and_multiplication():
    R = ring(3, 1)
    x = R.gen(0)
    u = one_over(x)
    assert apply_to_localization(DiffOp.identity(R), u) == u
    M = DiffOp.multiplication(R, x)
    # x * (1/x) = 1
    got = apply_to_localization(M, u)
    assert got == LocalizationElement(x, x.frobenius(got.level), got.level)


# --- iterated and general powers -------------------------------------------------


def test_power_witness_x_p2():
    R = ring(2, 1)
    x = R.gen(0)
    P = power_witness(x, 2)
    assert apply_to_localization(P, one_over(x)) == inverse_p_power(x, 2)
    # direct: P = D_3 acts on x^3/x^4
    assert P.apply(R.parse("x1^3")) == R.one()


def test_power_witness_matches_stepwise():
    for p in (2, 3):
        R = ring(p, 2)
        f = R.parse("x1^2+x2^3")
        P = power_witness(f, 2)
        step1 = frobenius_descent(f).operator
        step2 = frobenius_descent(f.frobenius(1)).operator
        u1 = apply_to_localization(step1, one_over(f))
        u2 = apply_to_localization(step2, u1)
        assert apply_to_localization(P, one_over(f)) == u2
        assert u2 == inverse_p_power(f, 2)


def test_power_witness_validation():
    R = ring(3, 1)
    with pytest.raises(InvalidInput):
        power_witness(R.gen(0), 0)
    with pytest.raises(ZeroInput):
        power_witness(R.zero(), 1)


def test_generator_witness_basics():
    R = ring(3, 1)
    x = R.gen(0)
    assert generator_witness(x, 1) == DiffOp.identity(R)
    # k = p reduces to a single descent step
    P1 = generator_witness(x, 3)
    assert apply_to_localization(P1, one_over(x)) == inverse_p_power(x, 1)
    P2 = generator_witness(x, 2)
    assert apply_to_localization(P2, one_over(x)) == inverse_power(x, 2)


def test_generator_witness_sweep():
    R = ring(2, 2)
    f = R.parse("x1*x2")
    for k in range(1, 9):
        op = generator_witness(f, k)
        assert apply_to_localization(op, one_over(f)) == inverse_power(f, k)


# --- the quadric shortcut ---------------------------------------------------------


def test_example_quadric_p3():
    R = ring(3, 4)
    alpha, a, Q = example_quadric_witness(R)
    assert alpha == (2, 2, 0, 0)
    assert a == 2
    assert Q == DiffOp.divided_power(R, (2, 2, 0, 0), 2)  # 1/2 = 2 mod 3
    f = R.parse("x1^2+x2^2+x3^2+x4^2")
    assert Q.apply(f**2) == R.one()
    assert apply_to_localization(Q, one_over(f)) == inverse_p_power(f, 1)


def test_example_quadric_p5():
    R = ring(5, 4)
    alpha, a, Q = example_quadric_witness(R)
    assert alpha == (2, 2, 2, 2)
    assert a == math.factorial(4) % 5 == 4
    f = R.parse("x1^2+x2^2+x3^2+x4^2")
    assert apply_to_localization(Q, one_over(f)) == inverse_p_power(f, 1)


def test_example_quadric_p13():
    R = ring(13, 4)
    alpha, a, Q = example_quadric_witness(R)
    assert alpha == (6, 6, 6, 6)
    oracle = (math.factorial(12) // math.factorial(3) ** 4) % 13
    assert a == oracle
    f = R.parse("x1^2+x2^2+x3^2+x4^2")
    assert Q.apply(f**12) == R.one()


def test_example_quadric_rejects_p2_and_bad_dims():
    with pytest.raises(UnsupportedPrime):
        example_quadric_witness(ring(2, 4))
    with pytest.raises(InvalidInput):
        example_quadric_witness(ring(3, 3))


# --- both directions of the digit-span identity ------------------------------------


def test_witnesses_hit_every_digit_and_derivatives_stay_inside(rng):
    for p in (2, 3):
        R = ring(p, 2)
        for _ in range(6):
            f = rand_poly(rng, R, max_degree=4, nonzero=True)
            dec = decompose(f, 1)
            ops = witness_generators(f, 1)
            J = ideal_J(f, 1)
            # constructive direction: operators produce exactly the J generators
            for alpha in dec.parts:
                assert ops[alpha].apply(f) == dec.parts[alpha].frobenius(1)
            # membership direction: any small divided power lands inside J
            for beta in [(i, j) for i in range(p) for j in range(p)]:
                img = DiffOp.divided_power(R, beta).apply(f)
                if img.is_zero():
                    continue
                assert membership(img, J) is not None


# --- certificate serialization -----------------------------------------------------


def test_certificate_round_trip_and_verify():
    R = ring(3, 2)
    f = R.parse("x1^2+x2^3")
    cert = frobenius_descent(f)
    data = json.loads(json.dumps(cert.to_json()))
    ok, transcript = verify_certificate(data)
    assert ok
    assert {e["check"] for e in transcript} >= {
        "cofactor_identity",
        "operator_level",
        "Q_on_f_power",
        "localization_action",
    }
    loaded = load_certificate(data)
    assert loaded.f == f
    assert loaded.s == cert.s


def test_verify_rejects_tampering():
    R = ring(3, 1)
    cert = frobenius_descent(R.gen(0))
    data = cert.to_json()

    bad = json.loads(json.dumps(data))
    bad["operator"]["factored"][0]["h"]["terms"][0]["c"] = 2
    ok, transcript = verify_certificate(bad)
    assert not ok
    assert any(not e["ok"] for e in transcript)

    # dropping a core check from the transcript must also fail
    bad2 = json.loads(json.dumps(data))
    bad2["transcript"] = [e for e in bad2["transcript"] if e["check"] != "Q_on_f_power"]
    ok2, transcript2 = verify_certificate(bad2)
    assert not ok2
    assert any(e["check"] == "transcript_complete" and not e["ok"] for e in transcript2)

    # stored booleans are ignored: flipping them does not help a bad cert
    bad3 = json.loads(json.dumps(bad))
    for e in bad3["transcript"]:
        e["ok"] = True
    bad3["verified"] = True
    ok3, _ = verify_certificate(bad3)
    assert not ok3


def test_descent_on_monomial_powers_with_deep_chains():
    # x^a with p < a <= p^2 stabilizes at s = 3, exercising the deeper path
    for p, a in ((2, 3), (2, 4), (3, 5), (3, 9)):
        R = ring(p, 1)
        f = R.parse(f"x1^{a}")
        cert = frobenius_descent(f, max_level=6)
        assert cert.verified
        q = p**cert.s
        assert cert.operator.apply(f ** (q - 1)) == f ** (q - p)
        assert apply_to_localization(cert.operator, one_over(f)) == inverse_p_power(f, 1)
        if p < a <= p * p:
            assert cert.s == 3


def test_descent_with_nontrivial_cofactors():
    # polynomials whose digit ideal is not the unit ideal force real
    # Groebner cofactors into the assembly
    from frobgen.frobdecomp import ideal_J as digit_ideal
    from frobgen.groebner import groebner_basis

    for p, d, text in ((2, 2, "x1^2+x2^2"), (3, 2, "x1^3+x2^3"), (2, 1, "x1^3")):
        R = ring(p, d)
        f = R.parse(text)
        cert = frobenius_descent(f)
        q = p**cert.s
        J = digit_ideal(f ** (q - 1), cert.s)
        assert not groebner_basis(J).contains_one()
        assert cert.verified
        assert apply_to_localization(cert.operator, one_over(f)) == inverse_p_power(f, 1)


def test_descent_under_lex_order():
    # the monomial order changes division and cofactors but never the identity
    from frobgen.poly import LEX, PolyRing

    for p, d, text in ((2, 2, "x1^2+x2^2"), (3, 2, "x1^2+x2^3")):
        R = PolyRing(p, d, order=LEX)
        f = R.parse(text)
        cert = frobenius_descent(f)
        assert cert.verified
        q = p**cert.s
        assert cert.operator.apply(f ** (q - 1)) == f ** (q - p)


def test_quadric_more_primes_against_multinomial_oracle():
    # p = 7 (4 does not divide 6) and p = 17 (4 divides 16)
    for p, ks in ((7, (2, 2, 1, 1)), (17, (4, 4, 4, 4))):
        R = ring(p, 4)
        alpha, a, Q = example_quadric_witness(R)
        m = math.factorial(p - 1)
        for k in ks:
            m //= math.factorial(k)
        assert a == m % p
        assert alpha == tuple(2 * k for k in ks)
        f = R.parse("x1^2+x2^2+x3^2+x4^2")
        assert Q.apply(f ** (p - 1)) == R.one()


def test_certificates_safe_under_concurrency():
    # pure pipeline: concurrent runs must agree with sequential ones
    from concurrent.futures import ThreadPoolExecutor

    jobs = [(2, 2, "x1^2+x2^2"), (3, 2, "x1^2+x2^3"), (5, 1, "x1"),
            (2, 1, "x1^3"), (3, 2, "x1*x2"), (2, 3, "x1^3+x2^3+x3^3")]

    def run(job):
        p, d, text = job
        R = ring(p, d)
        return frobenius_descent(R.parse(text)).to_json()

    sequential = [run(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=6) as pool:
        concurrent = list(pool.map(run, jobs))
    assert sequential == concurrent


def test_verifier_tamper_sweep():
    # every load-bearing certificate field, when corrupted, must flip the
    # verdict (or raise a structured input error); auxiliary data may not
    R = ring(3, 2)
    cert = frobenius_descent(R.parse("x1^2+x2^3"))
    pristine = json.dumps(cert.to_json())

    def mutated(fn):
        data = json.loads(pristine)
        fn(data)
        return data

    ok, _ = verify_certificate(json.loads(pristine))
    assert ok

    tampers = [
        lambda d: d.update(s=d["s"] + 1),
        lambda d: d["f"]["terms"][0].update(c=2),
        lambda d: d["f"]["terms"].pop(),
        lambda d: d["cofactors"][0].update(alpha=[0, 0]),
        lambda d: d["cofactors"][0]["h"]["terms"][0].update(c=2),
        lambda d: d["operator"]["factored"][0].update(alpha=[0, 0]),
        lambda d: d["operator"]["factored"][0]["op"]["terms"][0].update(c=2),
        lambda d: d["operator"]["factored"][0]["op"]["terms"][0].update(d=[5, 5]),
        lambda d: d["operator"]["factored"][0]["h"]["terms"][0].update(e=[1, 1]),
        lambda d: d.update(transcript=[]),
    ]
    for i, fn in enumerate(tampers):
        ok, transcript = verify_certificate(mutated(fn))
        assert not ok, (i, transcript)


def test_emitted_json_reparses_to_equal_values():
    # decomposition and chain payloads re-parse to the polynomials they
    # were serialized from
    from frobgen.chain import stabilization
    from frobgen.frobdecomp import decompose

    R = ring(3, 2)
    f = R.parse("x1^2+x2^3")
    dec = decompose(f ** 2, 1)
    data = json.loads(json.dumps(dec.to_json()))
    for entry in data["parts"]:
        alpha = tuple(entry["alpha"])
        assert R.from_json(entry["root"]) == dec.parts[alpha]

    result = stabilization(f)
    data = json.loads(json.dumps(result.to_json()))
    for lv_json, lv in zip(data["levels"], result.levels):
        gens = [R.from_json(g) for g in lv_json["generators"]]
        assert gens == list(lv.ideal.generators)


def test_descent_on_random_polynomials(rng):
    # the pipeline end to end on polynomials the fixed corpus never sees
    ran = 0
    for p in (2, 3):
        for d in (1, 2, 3):
            R = ring(p, d)
            for _ in range(5):
                f = rand_poly(rng, R, max_degree=4, max_terms=4, nonzero=True)
                cert = frobenius_descent(f, max_level=6)
                assert cert.verified
                q = p**cert.s
                assert cert.operator.apply(f ** (q - 1)) == f ** (q - p)
                ok, _ = verify_certificate(json.loads(json.dumps(cert.to_json())))
                assert ok
                ran += 1
    assert ran >= 30
