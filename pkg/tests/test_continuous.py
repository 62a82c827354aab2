"""Box-atom signals: closed-form transforms, merging, and the lattice bridge."""

import cmath
import math
import random
from fractions import Fraction

import pytest

from phaseforge import continuous as cont
from phaseforge import lattice
from phaseforge.continuous import (
    BoxAtom,
    ContinuousSignal,
    ContinuousStencil,
    DeltaTrain,
    apply_continuous,
    apply_continuous_adjoint,
    as_delta_train,
    ft_eval,
    lattice_reduce,
    pointwise_modulus_equal,
    sampled_magnitude_equal,
)
from phaseforge.lattice import LatticeSignal, delta
from phaseforge.scalars import GaussianRational as GR

TWO_PI = 2.0 * math.pi


def box_signal(pairs, dim=1, **kw):
    return ContinuousSignal(dim, [(c, BoxAtom(ctr, hw)) for c, ctr, hw in pairs], **kw)


# --- atoms and construction ---------------------------------------------------

def test_atom_requires_positive_halfwidth():
    with pytest.raises(ValueError):
        BoxAtom((0,), (0,))


def test_identical_atoms_merge_and_zero_prunes():
    s = box_signal([(1, (0,), (1,)), (GR(-1), (0,), (1,)), (2, (3,), (1,))])
    assert len(s.atoms) == 1
    assert s.atoms[0][1].center == (Fraction(3),)


def test_overlap_requires_declaration():
    with pytest.raises(ValueError):
        box_signal([(1, (0,), (1,)), (1, (1,), (1,))])
    s = box_signal([(1, (0,), (1,)), (1, (1,), (1,))], declare_overlaps=True)
    assert s.has_overlaps


def test_touching_closures_are_not_overlap():
    s = box_signal([(1, (0,), (1,)), (1, (2,), (1,))])
    assert not s.has_overlaps


# --- transforms ------------------------------------------------------------------

def test_ft_unit_box_at_zero():
    s = box_signal([(1, (0,), (Fraction(1, 2),))])
    assert abs(ft_eval(s, [0.0]) - 1.0 / TWO_PI) < 1e-15


def test_ft_unit_box_sinc_zero():
    s = box_signal([(1, (0,), (Fraction(1, 2),))])
    assert abs(ft_eval(s, [TWO_PI])) < 1e-15


def test_ft_shift_modulation():
    rng = random.Random(9)
    base = box_signal([(GR(1, 2), (0,), (Fraction(1, 3),))])
    moved = base.shifted((Fraction(5, 2),))
    for _ in range(64):
        p = [rng.uniform(-8.0, 8.0)]
        lhs = ft_eval(moved, p)
        rhs = cmath.exp(1j * p[0] * 2.5) * ft_eval(base, p)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_continuous_symbol_identity():
    rng = random.Random(17)
    st = ContinuousStencil(1, {(Fraction(0),): GR(1, 1), (Fraction(3, 2),): GR(-2)})
    psi = box_signal([(GR(1), (0,), (Fraction(1, 4),)), (GR(3), (1,), (Fraction(1, 4),))])
    f = apply_continuous(st, psi)
    g = apply_continuous_adjoint(st, psi)
    for _ in range(128):
        p = [rng.uniform(-12.0, 12.0)]
        base = ft_eval(psi, p)
        sym = st.symbol(p)
        assert abs(ft_eval(f, p) - sym * base) <= 1e-12 * max(1.0, abs(sym * base))
        assert abs(ft_eval(g, p) - sym.conjugate() * base) <= 1e-12 * max(1.0, abs(sym * base))


def test_apply_identity_stencil():
    psi = box_signal([(1, (0,), (1,)), (2, (3,), (1,))])
    st = ContinuousStencil(1, {(0,): 1})
    assert apply_continuous(st, psi) == psi


def test_apply_merges_central_coefficient():
    # z = y makes the middle atoms coincide: coefficient a1*b1 + a2*b2
    a1, a2, b1, b2 = GR(1), GR(2, 1), GR(1), GR(3)
    y = (Fraction(1),)
    psi = box_signal([(b1, (0,), (Fraction(2, 5),)), (b2, (1,), (Fraction(2, 5),))])
    st = ContinuousStencil(1, {(Fraction(0),): a1, y: a2})
    f = apply_continuous(st, psi)
    mid = [c for c, atom in f.atoms if atom.center == (Fraction(0),)]
    assert mid == [a1 * b1 + a2 * b2]
    assert len(f.atoms) == 3


def test_apply_antisymmetric_specialization():
    # b1 = a2, b2 = -a1 with z = y leaves two atoms: a2^2 and -a1^2
    a1, a2 = GR(1), GR(0, 2)
    psi = box_signal([(a2, (0,), (Fraction(1, 4),)), (-a1, (1,), (Fraction(1, 4),))])
    st = ContinuousStencil(1, {(Fraction(0),): a1, (Fraction(1),): a2})
    f = apply_continuous(st, psi)
    coefs = {atom.center[0]: c for c, atom in f.atoms}
    assert set(coefs) == {Fraction(-1), Fraction(1)}
    assert coefs[Fraction(-1)] == a2 * a2
    assert coefs[Fraction(1)] == -(a1 * a1)


# --- delta trains -------------------------------------------------------------------

def test_lattice_reduce_identity_and_train():
    v = delta(1) + delta(1, 2, 3)
    train = as_delta_train(v)
    assert lattice_reduce(train) == v
    assert lattice_reduce(v) == v
    with pytest.raises(ValueError):
        lattice_reduce(box_signal([(1, (0,), (1,))]))


def test_empty_train_reduces_to_empty():
    t = as_delta_train(LatticeSignal(1, {}))
    assert lattice_reduce(t).is_zero


def test_train_transform_matches_lattice_transform():
    rng = random.Random(101)
    v = LatticeSignal(2, {(rng.randint(-3, 3), rng.randint(-3, 3)):
                          GR(rng.randint(-3, 3), rng.randint(-3, 3)) or GR(1)
                          for _ in range(5)})
    train = as_delta_train(v)
    for _ in range(64):
        p = [rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi)]
        assert abs(ft_eval(train, p) - lattice.dft_eval(v, p)) <= 1e-12


def test_train_json_roundtrip():
    v = delta(1) + delta(1, 2, GR(0, 3))
    t = as_delta_train(v)
    from phaseforge.bundle import signal_from_json

    back = signal_from_json(t.to_json())
    assert isinstance(back, DeltaTrain)
    assert back == t


# --- sampled magnitude and pointwise modulus ---------------------------------------------

def test_sampled_magnitude_equal_shift_invariance():
    f = box_signal([(GR(1), (0,), (Fraction(1, 2),)), (GR(2, 1), (2,), (Fraction(1, 2),))])
    g = f.shifted((Fraction(7, 3),))
    cmp = sampled_magnitude_equal(f, g, grid=512)
    assert cmp.equal
    cmp2 = sampled_magnitude_equal(f, f.scaled(2), grid=512)
    assert not cmp2.equal
    assert cmp2.max_deviation > 0


def test_sampled_magnitude_requires_grid():
    f = box_signal([(1, (0,), (1,))])
    with pytest.raises(ValueError):
        sampled_magnitude_equal(f, f, grid=1)


def test_pointwise_modulus_equal_cases():
    f = box_signal([(GR(0, 1), (0,), (1,)), (GR(3), (3,), (1,))])
    g = box_signal([(GR(0, -1), (0,), (1,)), (GR(-3), (3,), (1,))])
    assert pointwise_modulus_equal(f, g)
    assert pointwise_modulus_equal(f, f.scaled(GR(Fraction(3, 5), Fraction(4, 5))))
    doubled = box_signal([(GR(0, 2), (0,), (1,)), (GR(3), (3,), (1,))])
    assert not pointwise_modulus_equal(f, doubled)


def test_pointwise_modulus_rejects_overlaps():
    f = box_signal([(1, (0,), (1,)), (1, (1,), (1,))], declare_overlaps=True)
    with pytest.raises(ValueError):
        pointwise_modulus_equal(f, f)


# --- association over atoms ------------------------------------------------------------

def test_continuous_association_shift_and_reflect():
    f = box_signal([(GR(1), (0,), (Fraction(1, 4),)), (GR(2, 1), (1,), (Fraction(1, 4),))])
    u = GR(Fraction(4, 5), Fraction(3, 5))
    g = f.shifted((Fraction(3, 2),)).scaled(u)
    w = cont.find_association(f, g)
    assert w is not None and w.kind == "shift"
    assert w.phase == u
    h = f.conj_reflected((Fraction(1, 2),))
    w2 = cont.find_association(f, h)
    assert w2 is not None and w2.kind == "conj-reflect"
    assert not cont.find_association(f, f.scaled(2))


def test_continuous_self_association():
    sym = box_signal([(GR(1, 2), (0,), (1,)), (GR(1, -2), (2,), (1,))])
    assert cont.is_self_conj_associated(sym)
    asym = box_signal([(GR(1), (0,), (1,)), (GR(3), (2,), (1,))])
    assert not cont.is_self_conj_associated(asym)
    st = ContinuousStencil(1, {(0,): 1, (Fraction(3, 2),): 2})
    assert not cont.is_self_conj_associated(st)


def test_continuous_signal_json_roundtrip():
    s = box_signal([(GR("1/2", "-1/3"), (Fraction(1, 7),), (Fraction(2, 7),))])
    assert ContinuousSignal.from_json(s.to_json()) == s
    t = box_signal([(0.5 + 1j, (0.25,), (0.5,))])
    assert ContinuousSignal.from_json(t.to_json()) == t
