"""Lattice signals, stencils, autocorrelation, and the association search.

Derived expectations are computed by independent brute-force oracles defined
here, then frozen as literals where the suite relies on them.
"""

import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaseforge import lattice
from phaseforge.lattice import (
    AssociationWitness,
    LatticeSignal,
    Stencil,
    apply_adjoint,
    apply_stencil,
    autocorrelation,
    compare_fourier_magnitude,
    compare_pointwise_modulus,
    delta,
    dft_eval,
    equal_fourier_magnitude,
    find_association,
    is_self_conj_associated,
    sampled_magnitude_deviation,
)
from phaseforge.scalars import GaussianRational as GR

TWO_PI = 2.0 * math.pi


# --- independent oracles -----------------------------------------------------

def oracle_apply(taps: dict, sig: dict) -> dict:
    """Brute-force expansion of f(x) = sum_y a_y w(x+y) over plain complex."""
    out = {}
    for y, a in taps.items():
        for x, v in sig.items():
            pos = tuple(xc - yc for xc, yc in zip(x, y))
            out[pos] = out.get(pos, 0j) + complex(a) * complex(v)
    return {k: v for k, v in out.items() if abs(v) > 1e-12}


def oracle_adjoint(taps: dict, sig: dict) -> dict:
    conj_taps = {tuple(-c for c in y): complex(a).conjugate() for y, a in taps.items()}
    return oracle_apply(conj_taps, sig)


def oracle_autocorr(sig: dict) -> dict:
    out = {}
    for x1, v1 in sig.items():
        for x2, v2 in sig.items():
            k = tuple(a - b for a, b in zip(x1, x2))
            out[k] = out.get(k, 0j) + complex(v1) * complex(v2).conjugate()
    return {k: v for k, v in out.items() if abs(v) > 1e-12}


def oracle_association_absent(f: LatticeSignal, g: LatticeSignal) -> bool:
    """Exhaustive search over every support-compatible shift and both kinds."""
    fs, gs = f.support, g.support
    lo = tuple(min(p[j] for p in gs) - max(p[j] for p in fs) for j in range(f.dim))
    hi = tuple(max(p[j] for p in gs) + max(p[j] for p in fs) + 1 for j in range(f.dim))
    import itertools

    for y in itertools.product(*(range(a, b) for a, b in zip(lo, hi))):
        for kind in ("shift", "conj-reflect"):
            for alpha_num in range(64):
                phase = cmath.exp(2j * math.pi * alpha_num / 64)
                w = AssociationWitness(kind, phase, y)
                cand = w.apply(f)
                if set(cand.entries) != set(g.entries):
                    continue
                dev = max(
                    abs(complex(cand.entries[x]) - complex(g.entries[x]))
                    for x in cand.entries
                )
                if dev < 1e-6:
                    return False
    return True


def as_plain(sig: LatticeSignal) -> dict:
    return {x: complex(v) for x, v in sig.entries.items()}


# --- signals and stencils ------------------------------------------------------

def test_signal_drops_zeros_and_merges():
    s = LatticeSignal(1, [((0,), 1), ((0,), -1), ((2,), GR(3))])
    assert s.support == ((2,),)
    assert s.exact


def test_signal_mixed_values_demote():
    s = LatticeSignal(1, {(0,): GR(1), (1,): 0.5})
    assert not s.exact
    assert isinstance(s.entries[(0,)], complex)


def test_signal_rejects_fractional_points():
    with pytest.raises(ValueError):
        LatticeSignal(1, {(0.5,): 1})


def test_stencil_rejects_zero_tap():
    with pytest.raises(ValueError):
        Stencil(1, {(0,): 0})
    with pytest.raises(ValueError):
        Stencil(1, {})


def test_identity_stencil_is_identity():
    psi = delta(1) + delta(1, 2, 3)
    assert apply_stencil(Stencil(1, {(0,): 1}), psi) == psi


def test_apply_stencil_matches_direct_expansion():
    # taps (1, 2) at offsets 0, 1 against psi = d0 + 3*d2
    st = Stencil(1, {(0,): 1, (1,): 2})
    psi = delta(1) + delta(1, 2, 3)
    f = apply_stencil(st, psi)
    assert as_plain(f) == {(-1,): 2, (0,): 1, (1,): 6, (2,): 3}
    assert as_plain(f) == oracle_apply({(0,): 1, (1,): 2}, as_plain(psi))


def test_apply_stencil_cancellation_is_pruned():
    st = Stencil(1, {(0,): 1, (1,): -1})
    psi = delta(1) + delta(1, 1)
    f = apply_stencil(st, psi)
    assert as_plain(f) == oracle_apply({(0,): 1, (1,): -1}, as_plain(psi))
    assert f.support == ((-1,), (1,))
    assert f.value((-1,)) == GR(-1) and f.value((1,)) == GR(1)


def test_apply_adjoint_matches_direct_expansion():
    st = Stencil(1, {(0,): 1, (1,): 2})
    psi = delta(1) + delta(1, 2, 3)
    g = apply_adjoint(st, psi)
    assert as_plain(g) == {(0,): 1, (1,): 2, (2,): 3, (3,): 6}
    assert as_plain(g) == oracle_adjoint({(0,): 1, (1,): 2}, as_plain(psi))


def test_adjoint_conjugates_single_tap():
    st = Stencil(1, {(0,): GR(0, 1)})
    assert apply_adjoint(st, delta(1)) == delta(1, value=GR(0, -1))


def test_adjoint_via_reflected_conjugated_stencil():
    st = Stencil(2, {(0, 0): GR(1, 2), (1, -2): GR("-1/3", 1)})
    psi = LatticeSignal(2, {(0, 0): GR(1), (2, 1): GR(0, 3), (-1, 1): GR("1/2")})
    assert apply_adjoint(st, psi) == apply_stencil(st.adjoint(), psi)


def _random_exact_signal(rng, dim, count):
    pts = set()
    while len(pts) < count:
        pts.add(tuple(rng.randint(-3, 3) for _ in range(dim)))
    return LatticeSignal(dim, {
        p: GR(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
              Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        for p in pts
    })


def _inner(a: LatticeSignal, b: LatticeSignal):
    total = GR(0)
    for x in set(a.entries) | set(b.entries):
        va = a.entries.get(x, GR(0))
        vb = b.entries.get(x, GR(0))
        total = total + va * vb.conjugate()
    return total


def test_adjoint_identity_exact():
    # <A psi, chi> == <psi, A* chi> with exact arithmetic
    rng = random.Random(11)
    for _ in range(25):
        dim = rng.randint(1, 3)
        st = Stencil(dim, {
            tuple(rng.randint(-2, 2) for _ in range(dim)): GR(rng.randint(1, 3), rng.randint(-2, 2))
            for _ in range(rng.randint(1, 3))
        })
        psi = _random_exact_signal(rng, dim, rng.randint(1, 4))
        chi = _random_exact_signal(rng, dim, rng.randint(1, 4))
        if psi.is_zero or chi.is_zero:
            continue
        lhs = _inner(apply_stencil(st, psi), chi)
        rhs = _inner(psi, apply_adjoint(st, chi))
        assert lhs == rhs


# --- transforms ------------------------------------------------------------------

def test_dft_unit_impulse():
    for dim in (1, 2, 3):
        w = delta(dim)
        p = [0.3 * (j + 1) for j in range(dim)]
        assert abs(dft_eval(w, p) - 1.0 / TWO_PI ** dim) < 1e-15


def test_dft_shift_modulation():
    w = delta(2, (3, -1))
    p = [0.7, -0.2]
    expect = cmath.exp(1j * (0.7 * 3 + 0.2)) / TWO_PI ** 2
    assert abs(dft_eval(w, p) - expect) < 1e-15


def test_dft_parseval_grid():
    rng = random.Random(5)
    w = LatticeSignal(1, {(k,): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                          for k in range(-3, 4)})
    n = 4096
    total = 0.0
    for j in range(n):
        p = [-math.pi + TWO_PI * j / n]
        total += abs(dft_eval(w, p)) ** 2
    approx = TWO_PI ** 1 * total * (TWO_PI / n)
    exact = float(w.energy())
    assert abs(approx - exact) <= 1e-6 * exact


def test_symbol_two_tap_null():
    st = Stencil(1, {(0,): 1, (1,): 1})
    assert abs(st.symbol([math.pi])) < 1e-15
    assert Stencil(1, {(0,): GR(5)}).symbol([0.37]) == 5


def test_symbol_identity_random():
    # transform of (A psi) equals symbol * transform of psi, and the adjoint
    # sees the conjugated symbol
    rng = random.Random(23)
    for _ in range(8):
        dim = rng.randint(1, 2)
        st = Stencil(dim, {
            tuple(rng.randint(-2, 2) for _ in range(dim)):
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) or 1.0
            for _ in range(rng.randint(1, 4))
        })
        psi = LatticeSignal(dim, {
            tuple(rng.randint(-3, 3) for _ in range(dim)):
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            for _ in range(4)
        })
        f = apply_stencil(st, psi)
        g = apply_adjoint(st, psi)
        for _ in range(16):
            p = [rng.uniform(-math.pi, math.pi) for _ in range(dim)]
            base = dft_eval(psi, p)
            scale = max(abs(base), 1e-6)
            assert abs(dft_eval(f, p) - st.symbol(p) * base) <= 1e-12 * max(1.0, abs(st.symbol(p)) * scale)
            assert abs(dft_eval(g, p) - st.symbol(p).conjugate() * base) <= 1e-12 * max(1.0, abs(st.symbol(p)) * scale)


def test_stencil_signature_transform_matches_symbol():
    st = Stencil(1, {(0,): GR(1, 1), (2,): GR(-2)})
    for p in ([0.0], [0.9], [-2.2]):
        lhs = dft_eval(st.signature(), p) * TWO_PI
        assert abs(lhs - st.symbol(p)) < 1e-14


# --- autocorrelation ---------------------------------------------------------------

def test_autocorrelation_impulse():
    r = autocorrelation(delta(1))
    assert r.lags == {(0,): GR(1)}


def test_autocorrelation_minimal_pair_table():
    # frozen from the brute-force oracle: lags 0..3 are 50, 26, 15, 6
    f = LatticeSignal(1, {(-1,): 2, (0,): 1, (1,): 6, (2,): 3})
    g = LatticeSignal(1, {(0,): 1, (1,): 2, (2,): 3, (3,): 6})
    rf, rg = autocorrelation(f), autocorrelation(g)
    expected = {(0,): 50, (1,): 26, (2,): 15, (3,): 6,
                (-1,): 26, (-2,): 15, (-3,): 6}
    assert {k: complex(v) for k, v in rf.lags.items()} == {
        k: complex(v) for k, v in expected.items()
    }
    assert rf == rg
    oracle = oracle_autocorr(as_plain(f))
    assert {k: complex(v) for k, v in rf.lags.items()} == pytest.approx(oracle)


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(
    st.integers(min_value=-4, max_value=4).map(lambda k: (k,)),
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
    min_size=1, max_size=5,
))
def test_autocorrelation_hermitian_symmetry(entries):
    w = LatticeSignal(1, entries)
    r = autocorrelation(w)
    for k, v in r.lags.items():
        mirror = tuple(-c for c in k)
        assert r.value(mirror) == complex(v).conjugate() or (
            abs(complex(r.value(mirror)) - complex(v).conjugate()) == 0.0
        )
    assert complex(r.value((0,))).imag == 0.0
    assert complex(r.value((0,))).real == pytest.approx(float(w.energy()))


# --- magnitude comparison ------------------------------------------------------------

def test_equal_fourier_magnitude_on_pair():
    f = LatticeSignal(1, {(-1,): 2, (0,): 1, (1,): 6, (2,): 3})
    g = LatticeSignal(1, {(0,): 1, (1,): 2, (2,): 3, (3,): 6})
    assert equal_fourier_magnitude(f, g)
    assert not equal_fourier_magnitude(f, f.scaled(2))
    cmp = compare_fourier_magnitude(f, f.scaled(2))
    assert cmp.worst_lag is not None
    assert equal_fourier_magnitude(f, f.conj_reflected())


def test_zero_pair_flagged_trivially_zero():
    z = LatticeSignal(1, {})
    cmp = compare_fourier_magnitude(z, z)
    assert not cmp.equal
    assert cmp.trivially_zero


def test_exact_and_sampled_magnitude_verdicts_agree():
    rng = random.Random(31)
    for _ in range(6):
        st_ = Stencil(1, {(0,): GR(rng.randint(1, 3), 1), (2,): GR(rng.randint(1, 2))})
        psi = _random_exact_signal(rng, 1, 3)
        if psi.is_zero:
            continue
        f = apply_stencil(st_, psi)
        g = apply_adjoint(st_, psi)
        exact_eq = equal_fourier_magnitude(f, g)
        dev, peak = sampled_magnitude_deviation(f, g, 4096)
        sampled_eq = peak > 0 and dev <= 1e-10 * peak
        assert exact_eq == sampled_eq
        # and a scaled copy must disagree both ways
        dev2, peak2 = sampled_magnitude_deviation(f, f.scaled(2), 512)
        assert not equal_fourier_magnitude(f, f.scaled(2))
        assert dev2 > 1e-10 * peak2


# --- association -----------------------------------------------------------------------

def test_association_identity_witness():
    f = LatticeSignal(1, {(0,): 1, (1,): GR(2, 1)})
    w = find_association(f, f)
    assert w is not None and w.kind == "shift"
    assert w.shift == (0,)
    assert complex(w.phase) == 1


def test_association_constructed_shift_witness():
    rng = random.Random(3)
    f = LatticeSignal(2, {(rng.randint(-3, 3), rng.randint(-3, 3)):
                          complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                          for _ in range(4)})
    phase = cmath.exp(1j * math.pi / 3)
    g = f.shifted((2, 5)).scaled(phase)
    w = find_association(f, g)
    assert w is not None
    assert w.kind == "shift" and w.shift == (2, 5)
    assert abs(w.alpha - math.pi / 3) < 1e-9
    assert lattice.signals_close(w.apply(f), g)


def test_association_conj_reflect_witness():
    f = LatticeSignal(1, {(0,): GR(1, 1), (3,): GR(-2)})
    g = f.conj_reflected()
    w = find_association(f, g)
    assert w is not None and w.kind == "conj-reflect"
    assert w.shift == (0,)
    assert complex(w.phase) == 1


def test_association_exact_unit_phase():
    f = LatticeSignal(1, {(0,): GR(1), (1,): GR(2, 1)})
    u = GR(Fraction(3, 5), Fraction(4, 5))
    g = f.shifted((4,)).scaled(u)
    w = find_association(f, g)
    assert w is not None and w.kind == "shift" and w.shift == (4,)
    assert w.phase == u  # exact, no transcendental comparison


def test_association_absent_for_minimal_pair():
    f = LatticeSignal(1, {(-1,): 2, (0,): 1, (1,): 6, (2,): 3})
    g = LatticeSignal(1, {(0,): 1, (1,): 2, (2,): 3, (3,): 6})
    assert find_association(f, g) is None
    assert oracle_association_absent(f, g)


def test_association_requires_nonzero():
    with pytest.raises(ValueError):
        find_association(LatticeSignal(1, {}), delta(1))


def test_self_conj_association():
    assert is_self_conj_associated(delta(1))
    assert not is_self_conj_associated(delta(1) + delta(1, 1, 3))
    # two-tap signature with unequal moduli can never self-reflect
    sig = Stencil(1, {(0,): 1, (1,): 2}).signature()
    assert not is_self_conj_associated(sig)
    # but symmetric moduli with the right phases can
    w = LatticeSignal(1, {(0,): GR(1, 2), (2,): GR(1, -2)})
    assert is_self_conj_associated(w)


def test_pointwise_modulus_compare():
    f = LatticeSignal(1, {(0,): GR(0, 1), (1,): GR(3)})
    g = LatticeSignal(1, {(0,): GR(0, -1), (1,): GR(-3)})
    assert compare_pointwise_modulus(f, g).equal
    assert not compare_pointwise_modulus(f, f.scaled(2)).equal


# --- serialization -----------------------------------------------------------------------

def test_signal_json_roundtrip_exact_and_float():
    s = LatticeSignal(2, {(0, 1): GR("1/2", "-2/3"), (3, -4): GR(5)})
    assert LatticeSignal.from_json(s.to_json()) == s
    t = LatticeSignal(1, {(0,): 0.5 + 0.25j})
    assert LatticeSignal.from_json(t.to_json()) == t
    st_ = Stencil(1, {(0,): GR(0, 1), (2,): GR(1)})
    assert Stencil.from_json(st_.to_json()) == st_
