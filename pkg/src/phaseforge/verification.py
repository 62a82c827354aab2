"""Claim execution, randomized property campaigns, and the projection demo.

``run_claims`` turns a Bundle into a VerificationReport by dispatching every
claim to the operation named in its checker string. All checks are exact when
the bundled signals are exact. The campaign fuzzes the two pair constructions
with Gaussian-rational data and measures how reliably each negative-control
perturbation flips a claim. The solver demo runs plain alternating
projections on gridded magnitude data to show the ambiguity is practical,
not just formal.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import continuous as cont
from . import counterexamples as build
from . import geometry, lattice, scalars
from .bundle import Bundle, Claim
from .continuous import ContinuousSignal, DeltaTrain
from .errors import PreconditionError
from .lattice import LatticeSignal, Stencil
from .scalars import GaussianRational

REPORT_FORMAT = "verification-report/1"


# --- claim checking -------------------------------------------------------------

@dataclass
class ClaimResult:
    name: str
    kind: str
    expected: bool
    observed: bool
    certificate: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.observed == self.expected

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "expected": self.expected,
            "observed": self.observed,
            "pass": self.passed,
            "certificate": self.certificate,
        }


@dataclass
class VerificationReport:
    construction: str
    passed: bool
    claims: list[ClaimResult]
    elapsed_s: float

    def to_json(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "construction": self.construction,
            "pass": self.passed,
            "claims": [c.to_json() for c in self.claims],
            "elapsed_s": self.elapsed_s,
        }

    def content_digest(self) -> str:
        """Canonical serialization without timing, for determinism checks."""
        body = self.to_json()
        body.pop("elapsed_s", None)
        return json.dumps(body, sort_keys=True)

    def dumps(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json(), indent=indent)


def _is_discrete_pair(*sigs) -> bool:
    return all(isinstance(s, LatticeSignal) for s in sigs)


def _witness_matches(witness, expect: dict) -> bool:
    if witness is None:
        return False
    if not expect:
        return True
    if "kind" in expect and witness.kind != expect["kind"]:
        return False
    if "shift" in expect:
        want = tuple(scalars.coord_from_json(c) for c in expect["shift"])
        if not scalars.coords_close(
            tuple(scalars.as_coord(c) for c in witness.shift), want, 1e-9
        ):
            return False
    if "phase" in expect:
        want = scalars.scalar_from_json(expect["phase"])
        if not scalars.close(witness.phase, want, 1e-9):
            return False
    return True


def _check_support(bundle: Bundle, claim: Claim):
    sig = bundle.resolve(claim.params.get("slot", "f"))
    size = len(sig.entries) if isinstance(sig, LatticeSignal) else len(sig.atoms)
    return (not sig.is_zero), {"support_size": size}


def _check_magnitude(bundle: Bundle, claim: Claim):
    lhs = bundle.resolve(claim.params.get("lhs", "f"))
    rhs = bundle.resolve(claim.params.get("rhs", "g"))
    if _is_discrete_pair(lhs, rhs):
        cmp = lattice.compare_fourier_magnitude(lhs, rhs,
                                                tol=claim.params.get("tol", 1e-12))
        return cmp.equal, cmp.certificate()
    cmp = cont.sampled_magnitude_equal(lhs, rhs, grid=claim.params.get("grid", 4096),
                                       rel_tol=claim.params.get("tol", 1e-10))
    return cmp.equal, cmp.certificate()


def _find_assoc(lhs, rhs):
    if _is_discrete_pair(lhs, rhs):
        return lattice.find_association(lhs, rhs)
    return cont.find_association(lhs, rhs)


def _check_not_associated(bundle: Bundle, claim: Claim):
    lhs = bundle.resolve(claim.params.get("lhs", "f"))
    rhs = bundle.resolve(claim.params.get("rhs", "g"))
    witness = _find_assoc(lhs, rhs)
    return witness is None, {"witness": witness.to_json() if witness else None}


def _check_associated(bundle: Bundle, claim: Claim):
    lhs = bundle.resolve(claim.params["lhs"])
    rhs = bundle.resolve(claim.params["rhs"])
    witness = _find_assoc(lhs, rhs)
    ok = witness is not None and _witness_matches(witness, claim.params.get("expect", {}))
    return ok, {"witness": witness.to_json() if witness else None}


def _check_modulus(bundle: Bundle, claim: Claim):
    lhs = bundle.resolve(claim.params.get("lhs", "f"))
    rhs = bundle.resolve(claim.params.get("rhs", "g"))
    if _is_discrete_pair(lhs, rhs):
        cmp = lattice.compare_pointwise_modulus(lhs, rhs)
        return cmp.equal, cmp.certificate()
    ok = cont.pointwise_modulus_equal(lhs, rhs)
    return ok, {}


def _check_roundtrip(bundle: Bundle, claim: Claim):
    f = bundle.resolve("f")
    g = bundle.resolve("g")
    f2 = build._apply(bundle.stencil, bundle.source)
    g2 = build._apply_adjoint(bundle.stencil, bundle.source)
    ok = build._signals_equal(f, f2) and build._signals_equal(g, g2)
    return ok, {}


def _check_signals_equal(bundle: Bundle, claim: Claim):
    lhs = bundle.resolve(claim.params["lhs"])
    rhs = bundle.resolve(claim.params["rhs"])
    return build._signals_equal(lhs, rhs), {}


def _check_signals_differ(bundle: Bundle, claim: Claim):
    lhs = bundle.resolve(claim.params["lhs"])
    rhs = bundle.resolve(claim.params["rhs"])
    return (not build._signals_equal(lhs, rhs)), {}


def _check_background_supports(bundle: Bundle, claim: Claim):
    bg = bundle.background
    ok = (
        build.support_in_body(bg.w0, bg.reference_domain)
        and build.support_in_body(bg.w1, bg.candidate_domain)
        and build.support_in_body(bg.w2, bg.candidate_domain)
    )
    return ok, {}


def _check_geometry_regime(bundle: Bundle, claim: Claim):
    bg = bundle.background
    report = geometry.check_problem3_geometry(
        bg.reference_domain, bg.candidate_domain,
        discrete=claim.params.get("discrete", bundle.mode == "discrete"),
    )
    ok = report.ok
    cert = report.certificate()
    if "expected_R" in claim.params:
        want = float(claim.params["expected_R"])
        tol = float(claim.params.get("tol", 1e-10))
        cert["expected_R"] = want
        ok = ok and abs(report.R - want) <= tol
    return ok, cert


def _check_separation(bundle: Bundle, claim: Claim):
    bg = bundle.background
    y_star = tuple(float(c) for c in claim.params["y_star"])
    offsets = [tuple(float(c) for c in o) for o in claim.params["offsets"]]
    body = bg.reference_domain.translated(tuple(-c for c in y_star))
    sep = geometry.reference_separation(body, offsets, y_star)
    tol = float(claim.params.get("tol", geometry.STRICT_TOL))
    return sep > tol, {"separation": sep}


def restrict_to_domain(sig, body):
    """The part of the signal supported inside the open body."""
    if isinstance(sig, LatticeSignal):
        return LatticeSignal(sig.dim, {
            x: v for x, v in sig.entries.items() if geometry.contains_point(body, x)
        })
    return ContinuousSignal(sig.dim, [
        (c, atom) for c, atom in sig.atoms
        if all(geometry.contains_point(body, corner) for corner in atom.corners())
    ], declare_overlaps=True)


def _check_masking(bundle: Bundle, claim: Claim):
    bg = bundle.background
    f_total = bundle.resolve("f_total")
    g_total = bundle.resolve("g_total")
    mf = restrict_to_domain(f_total, bg.reference_domain)
    mg = restrict_to_domain(g_total, bg.reference_domain)
    ok = build._signals_equal(mf, bg.w0) and build._signals_equal(mg, bg.w0)
    return ok, {}


def _support_points(sig):
    if isinstance(sig, LatticeSignal):
        return [tuple(float(c) for c in x) for x in sig.support]
    return [corner for _, atom in sig.atoms for corner in atom.corners()]


def _check_support_cover(bundle: Bundle, claim: Claim):
    bg = bundle.background
    ok = True
    for slot in claim.params.get("slots", ["f_total", "g_total"]):
        sig = bundle.resolve(slot)
        for pt in _support_points(sig):
            if not (geometry.contains_point(bg.reference_domain, pt)
                    or geometry.contains_point(bg.candidate_domain, pt)):
                ok = False
    return ok, {}


def _check_shift_asymmetry(bundle: Bundle, claim: Claim):
    offsets = [tuple(float(c) for c in o) for o in claim.params["offsets"]]
    y_star = tuple(float(c) for c in claim.params["y_star"])
    try:
        hull_ok = geometry.offsets_shift_asymmetric(offsets, y_star)
    except PreconditionError as e:
        return False, {"reason": f"{e.condition}: {e.detail}"}
    # exhaustive oracle: every admissible z comes from a sum of two offsets
    candidates = geometry.shift_symmetry_candidates(offsets)
    violations = [z for z in candidates
                  if geometry.offsets_equal_negated_shifted(offsets, z)]
    agree = hull_ok and not violations
    return agree, {"hull_excluded": hull_ok,
                   "z_candidates_checked": len(candidates),
                   "violations": [list(z) for z in violations]}


_CHECKERS = {
    "support": _check_support,
    "magnitude-equal": _check_magnitude,
    "not-associated": _check_not_associated,
    "associated": _check_associated,
    "modulus-equal": _check_modulus,
    "roundtrip": _check_roundtrip,
    "signals-equal": _check_signals_equal,
    "candidates-differ": _check_signals_differ,
    "background-supports": _check_background_supports,
    "geometry-regime": _check_geometry_regime,
    "separation": _check_separation,
    "masking": _check_masking,
    "support-cover": _check_support_cover,
    "shift-asymmetry": _check_shift_asymmetry,
}


def run_claims(bundle: Bundle) -> VerificationReport:
    """Execute every claim in the bundle and assemble the report."""
    start = time.perf_counter()
    results = []
    for claim in bundle.claims:
        checker = _CHECKERS.get(claim.kind)
        if checker is None:
            raise ValueError(f"unknown claim kind {claim.kind!r}")
        try:
            observed, certificate = checker(bundle, claim)
        except PreconditionError as e:
            observed, certificate = False, {"reason": f"{e.condition}: {e.detail}"}
        results.append(ClaimResult(
            name=claim.name, kind=claim.kind, expected=claim.expected,
            observed=bool(observed), certificate=certificate,
        ))
    elapsed = time.perf_counter() - start
    return VerificationReport(
        construction=bundle.construction,
        passed=all(r.passed for r in results),
        claims=results,
        elapsed_s=elapsed,
    )


# --- randomized campaign ----------------------------------------------------------

_EXACT_UNITS = [
    GaussianRational(1), GaussianRational(-1),
    GaussianRational(0, 1), GaussianRational(0, -1),
    GaussianRational(Fraction(3, 5), Fraction(4, 5)),
    GaussianRational(Fraction(-3, 5), Fraction(4, 5)),
    GaussianRational(Fraction(3, 5), Fraction(-4, 5)),
    GaussianRational(Fraction(4, 5), Fraction(3, 5)),
    GaussianRational(Fraction(-4, 5), Fraction(-3, 5)),
    GaussianRational(Fraction(5, 13), Fraction(12, 13)),
    GaussianRational(Fraction(-5, 13), Fraction(12, 13)),
]


def _rand_fraction(rng: random.Random, lo=-3, hi=3, max_den=3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def _rand_scalar(rng: random.Random) -> GaussianRational:
    while True:
        v = GaussianRational(_rand_fraction(rng), _rand_fraction(rng))
        if v:
            return v


def _rand_points(rng: random.Random, dim: int, count: int, lo=-4, hi=4):
    pts = set()
    while len(pts) < count:
        pts.add(tuple(rng.randint(lo, hi) for _ in range(dim)))
    return sorted(pts)


def random_difference_instance(rng: random.Random, dim: int):
    """Random valid basic-construction instance (rejection sampled)."""
    for _ in range(500):
        offsets = _rand_points(rng, dim, rng.randint(2, 3), -3, 3)
        stencil = Stencil(dim, {y: _rand_scalar(rng) for y in offsets})
        if lattice.is_self_conj_associated(stencil.signature()):
            continue
        pts = _rand_points(rng, dim, rng.randint(2, 6))
        source = LatticeSignal(dim, {p: _rand_scalar(rng) for p in pts})
        if source.is_zero or lattice.is_self_conj_associated(source):
            continue
        return stencil, source
    raise RuntimeError("failed to sample a valid basic instance")


def random_pauli_instance(rng: random.Random, dim: int):
    """Random valid Pauli instance: offsets {0, +-y} along one axis, the
    source confined to a band narrower than the offset magnitude."""
    for _ in range(500):
        axis = rng.randrange(dim)
        mag = rng.randint(2, 3)
        y = tuple(mag if j == axis else 0 for j in range(dim))
        ny = tuple(-c for c in y)
        a0 = _rand_scalar(rng)
        a_y = _rand_scalar(rng)
        unit = rng.choice(_EXACT_UNITS)
        a_ny = unit * scalars.conjugate(a_y)
        stencil = Stencil(dim, {(0,) * dim: a0, y: a_y, ny: a_ny})
        available = mag * 5 ** (dim - 1)  # band width along axis times the rest
        count = rng.randint(2, min(4, available))
        pts = set()
        while len(pts) < count:
            p = [rng.randint(-2, 2) for _ in range(dim)]
            p[axis] = rng.randint(0, mag - 1)
            pts.add(tuple(p))
        source = LatticeSignal(dim, {p: _rand_scalar(rng) for p in sorted(pts)})
        if source.is_zero:
            continue
        try:
            build.pauli_pair(stencil, source)
        except PreconditionError:
            continue
        return stencil, source
    raise RuntimeError("failed to sample a valid Pauli instance")


def perturb_break_modulus(rng: random.Random, stencil: Stencil, source):
    """Scale one off-center tap, destroying the modulus symmetry."""
    candidates = [y for y in stencil.taps if any(c != 0 for c in y)]
    y = candidates[rng.randrange(len(candidates))]
    taps = dict(stencil.taps)
    taps[y] = taps[y] * 2
    return Stencil(stencil.dim, taps), source


def perturb_break_disjointness(rng: random.Random, stencil: Stencil, source):
    """Add a source point one tap-offset away from an existing one, so two
    translates of the support meet."""
    offsets = [y for y in stencil.taps if any(c != 0 for c in y)]
    y = offsets[rng.randrange(len(offsets))]
    base = source.support[rng.randrange(len(source.support))]
    extra = tuple(b + c for b, c in zip(base, y))
    entries = dict(source.entries)
    entries[extra] = entries.get(extra, 0) + _rand_scalar(rng)
    return stencil, LatticeSignal(source.dim, entries)


def perturb_symmetrize(rng: random.Random, stencil: Stencil, source):
    """Force a_(-y) = conj(a_y), making the taps uniformly phase-conjugate."""
    taps = dict(stencil.taps)
    for y in list(taps):
        if all(c == 0 for c in y):
            taps[y] = GaussianRational(1)
        elif tuple(sorted(y)) is not None:
            ny = tuple(-c for c in y)
            taps[ny] = scalars.conjugate(taps[y])
    return Stencil(stencil.dim, taps), source


_PERTURBATIONS = {
    "break-modulus": perturb_break_modulus,
    "break-disjointness": perturb_break_disjointness,
    "symmetrize": perturb_symmetrize,
}


@dataclass
class InstanceResult:
    index: int
    family: str
    dim: int
    seed: int
    passed: bool
    flipped: bool
    failed_claims: list[str]

    def to_json(self) -> dict:
        return {
            "index": self.index, "family": self.family, "dim": self.dim,
            "seed": self.seed, "pass": self.passed, "flipped": self.flipped,
            "failed_claims": self.failed_claims,
        }


@dataclass
class CampaignSummary:
    count: int
    control_count: int
    dims: tuple
    seed: int
    valid_failures: int
    flip_rates: dict
    instances: list[InstanceResult]
    elapsed_s: float

    def to_json(self) -> dict:
        return {
            "format": "campaign-summary/1",
            "count": self.count,
            "control_count": self.control_count,
            "dims": list(self.dims),
            "seed": self.seed,
            "valid_failures": self.valid_failures,
            "flip_rates": self.flip_rates,
            "instances": [i.to_json() for i in self.instances],
            "elapsed_s": self.elapsed_s,
        }

    def content_digest(self) -> str:
        body = self.to_json()
        body.pop("elapsed_s", None)
        return json.dumps(body, sort_keys=True)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["index", "family", "dim", "seed", "pass", "flipped",
                         "failed_claims"])
        for r in self.instances:
            writer.writerow([r.index, r.family, r.dim, r.seed, r.passed,
                             r.flipped, ";".join(r.failed_claims)])
        return out.getvalue()

    def dumps(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json(), indent=indent)


def property_campaign(count: int = 500, control_count: int = 200,
                      dims=(1, 2, 3), seed: int = 42) -> CampaignSummary:
    """Randomized validity campaign plus negative controls.

    ``count`` valid instances are generated for each pair family and must
    pass every claim (exact arithmetic). Each control class perturbs a valid
    Pauli instance, force-builds it without validation, and counts how often
    at least one claim flips; the rates are reported, not asserted.
    """
    start = time.perf_counter()
    rng = random.Random(seed)
    dims = tuple(dims)
    instances: list[InstanceResult] = []
    valid_failures = 0
    index = 0

    for family, sampler in (("difference-pair", random_difference_instance),
                            ("pauli-pair", random_pauli_instance)):
        for k in range(count):
            dim = dims[k % len(dims)]
            inst_seed = rng.randrange(2 ** 32)
            inst_rng = random.Random(inst_seed)
            stencil, source = sampler(inst_rng, dim)
            if family == "difference-pair":
                bundle = build.difference_pair(stencil, source)
            else:
                bundle = build.pauli_pair(stencil, source)
            report = run_claims(bundle)
            failed = [c.name for c in report.claims if not c.passed]
            if failed:
                valid_failures += 1
            instances.append(InstanceResult(
                index=index, family=family, dim=dim, seed=inst_seed,
                passed=report.passed, flipped=False, failed_claims=failed,
            ))
            index += 1

    flip_counts = {name: 0 for name in _PERTURBATIONS}
    for name, perturb in _PERTURBATIONS.items():
        for k in range(control_count):
            dim = dims[k % len(dims)]
            inst_seed = rng.randrange(2 ** 32)
            inst_rng = random.Random(inst_seed)
            stencil, source = random_pauli_instance(inst_rng, dim)
            p_stencil, p_source = perturb(inst_rng, stencil, source)
            bundle = build.pauli_pair(p_stencil, p_source, validate=False)
            report = run_claims(bundle)
            failed = [c.name for c in report.claims if not c.passed]
            flipped = bool(failed)
            if flipped:
                flip_counts[name] += 1
            instances.append(InstanceResult(
                index=index, family=f"control-{name}", dim=dim, seed=inst_seed,
                passed=report.passed, flipped=flipped, failed_claims=failed,
            ))
            index += 1

    flip_rates = {
        name: (flip_counts[name] / control_count if control_count else 0.0)
        for name in _PERTURBATIONS
    }
    return CampaignSummary(
        count=count, control_count=control_count, dims=dims, seed=seed,
        valid_failures=valid_failures, flip_rates=flip_rates,
        instances=instances, elapsed_s=time.perf_counter() - start,
    )


# --- alternating-projection demo ----------------------------------------------------

@dataclass
class SolverRun:
    restart: int
    seed: int
    iterations: int
    residual: float
    dist_f_orbit: float
    dist_g_orbit: float
    norm: float
    landed: str  # "f" | "g" | "both" | "none"

    def to_json(self) -> dict:
        return {
            "restart": self.restart, "seed": self.seed,
            "iterations": self.iterations, "residual": self.residual,
            "dist_f_orbit": self.dist_f_orbit, "dist_g_orbit": self.dist_g_orbit,
            "norm": self.norm, "landed": self.landed,
        }


def _next_pow2(n: int) -> int:
    k = 1
    while k < n:
        k *= 2
    return k


def _embed(sig: LatticeSignal, n: int) -> np.ndarray:
    """Signal on the cyclic grid, translated so its box anchors at zero."""
    arr = np.zeros((n,) * sig.dim, dtype=complex)
    if sig.is_zero:
        return arr
    lo, _ = sig.bounding_box()
    for x, v in sig.entries.items():
        idx = tuple((c - l) % n for c, l in zip(x, lo))
        arr[idx] = complex(scalars.as_scalar(v))
    return arr


def _grid_magnitudes(r: lattice.Autocorrelation, n: int, dim: int) -> np.ndarray:
    """|FFT|^2 on the grid is the FFT of the (wrap-free) embedded lag table."""
    arr = np.zeros((n,) * dim, dtype=complex)
    for k, v in r.lags.items():
        idx = tuple(c % n for c in k)
        arr[idx] += complex(scalars.as_scalar(v))
    power = np.real(np.fft.fftn(arr))
    return np.sqrt(np.clip(power, 0.0, None))


def _conj_reflect_grid(v: np.ndarray) -> np.ndarray:
    out = np.conj(np.flip(v))
    for axis in range(v.ndim):
        out = np.roll(out, 1, axis=axis)
    return out


def _orbit_distance(x: np.ndarray, v: np.ndarray) -> float:
    """Min L2 distance from x to the trivial-ambiguity orbit of v, over all
    cyclic shifts, both reflection kinds, and the optimal phase (closed form
    via the correlation theorem)."""
    nx2 = float(np.vdot(x, x).real)
    nv2 = float(np.vdot(v, v).real)
    X = np.fft.fftn(x)
    best = math.inf
    for target in (v, _conj_reflect_grid(v)):
        V = np.fft.fftn(target)
        corr = np.fft.ifftn(X * np.conj(V))
        peak = float(np.max(np.abs(corr)))
        best = min(best, nx2 + nv2 - 2.0 * peak)
    return math.sqrt(max(0.0, best))


def solver_demo(f: LatticeSignal, g: LatticeSignal, restarts: int = 50,
                iterations: int = 800, seed: int = 0,
                grid: int | None = None, land_tol: float = 1e-6) -> list[SolverRun]:
    """Alternating projections between gridded magnitude data and a support
    box, restarted from random fields.

    The grid holds at least four times the support width per axis, so the
    sampled magnitudes determine the full lag table. Residuals and orbit
    distances are reported relative to the data scale; no convergence is
    guaranteed or claimed.
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    dim = f.dim
    r = lattice.autocorrelation(f)
    if r.lags:
        widths = [max(abs(k[j]) for k in r.lags) + 1 for j in range(dim)]
    else:
        widths = [1] * dim
    n = _next_pow2(max(8, 4 * max(widths)))
    if grid is not None:
        if grid < 4 * max(widths):
            raise ValueError("grid too small for the support box")
        n = grid
    mag = _grid_magnitudes(r, n, dim)
    mag_norm = float(np.linalg.norm(mag))
    mask = np.zeros((n,) * dim, dtype=bool)
    mask[tuple(slice(0, w) for w in widths)] = True
    vf = _embed(f, n)
    vg = _embed(g, n)
    nf = float(np.linalg.norm(vf))
    ng = float(np.linalg.norm(vg))

    runs: list[SolverRun] = []
    for restart in range(restarts):
        run_seed = seed * 1_000_003 + restart
        gen = np.random.default_rng(run_seed)
        x = np.zeros((n,) * dim, dtype=complex)
        x[mask] = gen.standard_normal(int(mask.sum())) + 1j * gen.standard_normal(int(mask.sum()))
        for _ in range(iterations):
            X = np.fft.fftn(x)
            absX = np.abs(X)
            phase = np.where(absX > 0, X / np.where(absX > 0, absX, 1.0), 1.0)
            x = np.fft.ifftn(mag * phase)
            x = np.where(mask, x, 0.0)
        final_dev = float(np.linalg.norm(np.abs(np.fft.fftn(x)) - mag))
        residual = final_dev / mag_norm if mag_norm > 0 else final_dev
        dist_f = _orbit_distance(x, vf) / nf if nf > 0 else float(np.linalg.norm(x))
        dist_g = _orbit_distance(x, vg) / ng if ng > 0 else float(np.linalg.norm(x))
        near_f = dist_f <= land_tol
        near_g = dist_g <= land_tol
        landed = "both" if near_f and near_g else "f" if near_f else "g" if near_g else "none"
        runs.append(SolverRun(
            restart=restart, seed=run_seed, iterations=iterations,
            residual=residual, dist_f_orbit=dist_f, dist_g_orbit=dist_g,
            norm=float(np.linalg.norm(x)), landed=landed,
        ))
    return runs


def solver_runs_to_json(runs: list[SolverRun], **meta) -> dict:
    landing = {}
    for r in runs:
        landing[r.landed] = landing.get(r.landed, 0) + 1
    return {
        "format": "solver-runs/1",
        **meta,
        "runs": [r.to_json() for r in runs],
        "landing": landing,
    }
