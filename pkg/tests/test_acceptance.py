"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from corpus import CORPUS, FIBONACCI, INTERLEAVED  # noqa: E402
from orbitlab.dynamics import RationalSelfMap, orbit_sequence, vanishing_ideal  # noqa: E402
from orbitlab.exact import height_int, prime_support  # noqa: E402
from orbitlab.heights import growth_classify, height_sequence  # noqa: E402
from orbitlab.holonomic import (  # noqa: E402
    CFiniteRecurrence,
    IntegerMonicRecurrence,
    NoneFound,
    QuasilinearOnly,
    expand,
    fatou_normalize,
    min_cfinite_annihilator,
    recurrence_to_dynsys,
)
from orbitlab.multgroup import build_group, height_lower_constant  # noqa: E402
from orbitlab.parse import parse_expression  # noqa: E402
from orbitlab.poly import MultiPoly  # noqa: E402
from orbitlab.structure import (  # noqa: E402
    CertificateFailure,
    DependenceRelation,
    RationalClosedForm,
    Verified,
    ap_decompose,
    banach_density,
    build_torus_model,
    certify_rational,
    exponent_trajectories,
    find_dependence,
    fit_affine_exponent_model,
    geometric_form,
    membership_set,
    relation_holds,
    verify_torus_model,
)

RESULTS: list[str] = []
TIME_LIMIT = 10.0


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                fn(*args, **kwargs)
                elapsed = time.perf_counter() - t0
                assert elapsed < TIME_LIMIT, f"took {elapsed:.1f}s"
            except BaseException as exc:
                line = f"FAIL  criterion {number:2d}: {title} ({type(exc).__name__}: {exc})"
                RESULTS.append(line)
                print(line)
                raise
            line = f"PASS  criterion {number:2d}: {title} [{time.perf_counter() - t0:.2f}s]"
            RESULTS.append(line)
            print(line)
        return run
    return wrap


def x_(dim, *exprs):
    names = [f"x{i + 1}" for i in range(dim)]
    return [parse_expression(e, names) for e in exprs]


@criterion(1, "intro example x -> x+1, G = <2>, N = 4095")
def test_criterion_01_intro_example():
    phi = RationalSelfMap(tuple(x_(1, "x1+1")))
    out = orbit_sequence(phi, x_(1, "x1")[0], [1], 4095)
    S = membership_set(out.values, build_group([2]))
    assert S.members() == [2**k - 1 for k in range(13)]
    d = [banach_density(S, w) for w in (64, 256, 1024)]
    assert d[0] > d[1] > d[2]
    ap = ap_decompose(S, 8)
    assert all(c.kind == "sparse" for c in ap.labels)
    assert list(ap.exceptional) == S.members()


@criterion(2, "torus closure (2x, 3xy), f = xy, G = <2,3>, N = 200")
def test_criterion_02_torus_closure():
    phi = RationalSelfMap(tuple(x_(2, "2*x1", "3*x1*x2")))
    out = orbit_sequence(phi, x_(2, "x1*x2")[0], [1, 1], 200)
    G = build_group([2, 3])
    S = membership_set(out.values, G)
    assert all(S.bits) and S.n_max == 200
    traj = exponent_trajectories(out.values, G)
    fit = fit_affine_exponent_model(traj.rows)
    assert fit.A == ((1, 1), (0, 1)) and fit.p == (1, 1)
    model = build_torus_model(fit.A, fit.p, traj.rows[0], None, 1, G)
    assert verify_torus_model(model, out.values, 200) == Verified(200)


def _oracle_has_relation(vals, w):
    return any(any(i) and relation_holds(vals, i)
               for i in itertools.product(range(-3, 4), repeat=w))


@criterion(3, "dependence detection agrees with the brute-force oracle (20 sequences)")
def test_criterion_03_dependence_oracle():
    rng = random.Random(20240611)
    gens = [(2, 3), (2, 5), (3, 7), (F(1, 2), 3), (6, 5)]
    for _ in range(20):
        g1, g2 = rng.choice(gens)
        s, a, b, c, e = (rng.randint(-3, 3) for _ in range(5))
        s = s or 1
        vals = [s * F(g1) ** (a * n + b) * F(g2) ** (c * n + e) for n in range(16)]
        primes = sorted({p for v in vals for p in prime_support(v)})
        for w in (1, 2, 3):
            found = find_dependence(vals, w, primes)
            assert isinstance(found, DependenceRelation) == _oracle_has_relation(vals, w), (vals, w)
            if isinstance(found, DependenceRelation):
                assert relation_holds(vals, found.exponents)
                assert all(
                    math.prod(vals[n + j] ** k for j, k in enumerate(found.exponents)) == found.constant
                    for n in range(len(vals) - w + 1)
                )


@criterion(4, "Fatou fixture: 1/2^n quasilinear only, Fibonacci monic")
def test_criterion_04_fatou():
    halves = [F(1, 2**n) for n in range(21)]
    rec = min_cfinite_annihilator(halves)
    assert isinstance(rec, CFiniteRecurrence) and rec.order == 1
    assert rec.primitive_polynomial() == (2, -1)
    assert fatou_normalize(rec, halves) == QuasilinearOnly((2, -1))
    fib = FIBONACCI.terms(30)
    out = fatou_normalize(min_cfinite_annihilator(fib), fib)
    assert out == IntegerMonicRecurrence((1, 1), (0, 1))


@criterion(5, "dynamical encoding reproduces expand on 10 corpus recurrences, 100 terms")
def test_criterion_05_encoding_identity():
    assert len(CORPUS) == 10
    for name, rec in CORPUS.items():
        enc = recurrence_to_dynsys(rec)
        out = orbit_sequence(enc.map, enc.observable, enc.start, 99)
        assert out.completed, name
        assert out.values == expand(rec, 99), name


@criterion(6, "rationality certificate for the interleaved geometric sequence")
def test_criterion_06_certificate():
    out = certify_rational(INTERLEAVED.to_precurrence(), build_group([2, 3, 5]), 200, 24)
    assert isinstance(out, RationalClosedForm)
    # 3/(1-4x^2) + 5x/(1-9x^2) over the common denominator, reduced
    assert out.numerator == (3, 5, -27, -20)
    assert out.denominator == (1, 0, -13, 0, 36)
    assert out.series(200) == expand(INTERLEAVED, 199)
    fail = certify_rational(FIBONACCI.to_precurrence(), build_group([2]), 200, 24)
    assert isinstance(fail, CertificateFailure) and fail.stage == "membership" and fail.index == 4


def _nonzero_tail(vals):
    last_zero = max((i for i, v in enumerate(vals) if v == 0), default=-1)
    return vals[last_zero + 1:]


@criterion(7, "geometric form implies Bounded/Linear growth; 2^(n^2) is QuadraticOrMore")
def test_criterion_07_growth_shape():
    extra = {
        "sixes": [F(6) ** n for n in range(100)],
        "two_thirds": [F(2, 3) ** n for n in range(100)],
        "constant": [F(5)] * 100,
        "alternating": [F(-3)] * 100,
    }
    seqs = {name: expand(rec, 99) for name, rec in CORPUS.items()} | extra
    succeeded = 0
    for name, vals in seqs.items():
        vals = _nonzero_tail(vals)
        if isinstance(geometric_form(vals, 8), NoneFound):
            continue
        succeeded += 1
        label = growth_classify(height_sequence(vals)).label
        assert label in ("Bounded", "Linear"), (name, label)
    assert succeeded >= 5
    squares = [F(2) ** (n * n) for n in range(40)]
    assert growth_classify(height_sequence(squares)).label == "QuadraticOrMore"
    assert geometric_form(squares, 8) == NoneFound(8)


@criterion(8, "height lower bound constant, 1681 exponent pairs for <2,3> and <4,6>")
def test_criterion_08_height_constant():
    for gens in ([2, 3], [4, 6]):
        G = build_group(gens)
        C = height_lower_constant(G)
        cases = 0
        for k1, k2 in itertools.product(range(-20, 21), repeat=2):
            a = G.element((k1, k2))
            for x in (a, -a):
                assert C.holds(x, (k1, k2))
                H = height_int(x)
                K = max(abs(k1), abs(k2))
                # exact form of log H >= factor * log 2 * K
                assert H ** C.factor.denominator >= 2 ** (C.factor.numerator * K)
            cases += 1
        assert cases == 1681


@criterion(9, "degree-2 vanishing ideals of (2^k, 4^k) and (2^k, 3^k)")
def test_criterion_09_vanishing_ideal():
    x, y = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)
    basis = vanishing_ideal([(F(2) ** k, F(4) ** k) for k in range(10)], 2)
    assert x * x - y in basis
    assert vanishing_ideal([(F(2) ** k, F(3) ** k) for k in range(21)], 2) == []


CLI_RUNS = [
    ("member", {"dim": 1, "map": ["x1+1"], "observable": "x1", "start": ["1"], "generators": ["2"]},
     ["--n", "4095"], 0),
    ("certify", {"generators": ["2", "3", "5"],
                 "recurrence": {"order": 3, "coeffs": ["0", "13", "0", "-36"], "shift": 0,
                                "init": ["3", "5", "12", "45"]}}, [], 0),
    ("orbit", {"dim": 1, "map": ["x1^2"], "observable": "x1", "start": ["2"]},
     ["--n", "50", "--budget", "1000"], 1),
    ("torus", {"dim": 2, "map": ["2*x1", "3*x1*x2"], "observable": "x1*x2", "start": ["1", "1"],
               "generators": ["2", "3"]}, ["--n", "200"], 0),
    ("heights", {"dim": 2, "map": ["2*x1", "3*x1*x2"], "observable": "x1*x2", "start": ["1", "1"]},
     ["--n", "100"], 0),
]


@criterion(10, "CLI reports are byte-identical across repeated runs")
def test_criterion_10_cli_determinism(tmp_path):
    for command, doc, extra, expected in CLI_RUNS:
        src = tmp_path / f"{command}.json"
        src.write_text(json.dumps(doc))
        outputs = []
        for rep in range(2):
            out = tmp_path / f"{command}-{rep}.json"
            proc = subprocess.run([sys.executable, "-m", "orbitlab", command, "--input", str(src),
                                   "--out", str(out), *extra], capture_output=True)
            assert proc.returncode == expected, (command, proc.stderr)
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1], command
        assert json.loads(outputs[0])["schema"] == 1


if __name__ == "__main__":
    import inspect
    import tempfile

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                if "tmp_path" in inspect.signature(fn).parameters:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except BaseException:
                failures += 1
    sys.exit(1 if failures else 0)
