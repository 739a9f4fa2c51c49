"""Degenerating element families, table reproduction and bound-constant measurement."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import smallmat
from .errors import InvalidFamilyParamsError
from .fields import ScalarField, study_field
from .geometry import (
    Simplex,
    as_simplex,
    circumradius,
    diameter_and_edges,
    measure,
    param_H_T0,
    standard_position,
)
from .interpolation import OperatorSpec, SimplexPolynomial, homogeneous_exponents, interpolate
from .norms import DIRECTIONAL, H_SCALED, NormSpec, anisotropic_rhs, classical_rhs, sobolev_seminorm

FAMILIES = ("RightAngled2D", "Dagger2D", "Blade2D", "Tetra7_1_3", "Sliver", "ConvI", "ConvII")
TETRA_VARIANTS = ("blade", "dagger-bad", "dagger-good")

THEOREM_A = "A"
THEOREM_B_H = "B-h"
THEOREM_B_DIR = "B-dir"


@dataclass(frozen=True)
class FamilySpec:
    """One member of a degenerating family.

    Exponents that a family does not use stay ``None``. The scale is given
    either as ``s`` or as ``N`` (then ``s = 1/N``).
    """

    family: str
    eps: Optional[float] = None
    delta: Optional[float] = None
    gamma: Optional[float] = None
    eps1: Optional[float] = None
    eps2: Optional[float] = None
    variant: Optional[str] = None
    s: Optional[float] = None
    N: Optional[int] = None

    @property
    def scale(self) -> float:
        if self.s is not None:
            return float(self.s)
        if self.N is not None:
            return 1.0 / self.N
        raise InvalidFamilyParamsError("either s or N must be given")

    def at(self, s: float) -> "FamilySpec":
        return dataclasses.replace(self, s=float(s), N=None)

    def at_level(self, n: int) -> "FamilySpec":
        return dataclasses.replace(self, s=None, N=int(n))


def _need(spec: FamilySpec, *names):
    vals = []
    for name in names:
        v = getattr(spec, name)
        if v is None:
            raise InvalidFamilyParamsError(f"{spec.family} needs parameter {name}")
        vals.append(float(v))
    return vals


def _check(cond: bool, msg: str):
    if not cond:
        raise InvalidFamilyParamsError(msg)


def validate_family(spec: FamilySpec) -> None:
    """Raise :class:`InvalidFamilyParamsError` unless the exponents fit the family."""
    fam = spec.family
    _check(fam in FAMILIES, f"unknown family {fam!r}; choose one of {', '.join(FAMILIES)}")
    s = spec.scale
    _check(0.0 < s < 1.0, f"scale s must lie in (0, 1), got {s}")
    if fam in ("RightAngled2D", "Blade2D"):
        (eps,) = _need(spec, "eps")
        _check(eps > 1, "need eps > 1")
    elif fam == "Dagger2D":
        eps, delta = _need(spec, "eps", "delta")
        _check(eps > 1 and delta > 1 and eps != delta, "need eps, delta > 1 and eps != delta")
    elif fam == "Tetra7_1_3":
        (gamma,) = _need(spec, "gamma")
        _check(gamma > 1, "need gamma > 1")
        _check(spec.variant in TETRA_VARIANTS, f"variant must be one of {TETRA_VARIANTS}")
        if spec.variant == "blade":
            (eps,) = _need(spec, "eps")
            _check(eps > 1, "need eps > 1")
        elif spec.variant == "dagger-bad":
            eps, delta = _need(spec, "eps", "delta")
            _check(1 < delta < eps < gamma, "need 1 < delta < eps < gamma")
        else:
            eps, delta = _need(spec, "eps", "delta")
            _check(1 < eps < delta < gamma, "need 1 < eps < delta < gamma")
    elif fam == "Sliver":
        eps1, eps2 = _need(spec, "eps1", "eps2")
        _check(eps1 >= 1 and eps2 >= 1, "need eps1, eps2 >= 1")
    elif fam == "ConvI":
        eps, delta = _need(spec, "eps", "delta")
        _check(1 < delta <= eps, "need 1 < delta <= eps")
    elif fam == "ConvII":
        (eps,) = _need(spec, "eps")
        _check(1 < eps <= 6, "need 1 < eps <= 6")


def family_generate(spec: FamilySpec) -> Simplex:
    """Vertex coordinates of the family member described by ``spec``."""
    validate_family(spec)
    s = spec.scale
    fam = spec.family
    if fam == "RightAngled2D":
        v = [(0, 0), (s, 0), (0, s**spec.eps)]
    elif fam == "Dagger2D":
        v = [(0, 0), (s, 0), (s**spec.delta, s**spec.eps)]
    elif fam == "Blade2D":
        v = [(0, 0), (2 * s, 0), (s, s**spec.eps)]
    elif fam == "Tetra7_1_3":
        g = spec.gamma
        x3 = (2 * s - math.sqrt(4 * s * s - s ** (2 * g)), s**g, 0)
        if spec.variant == "blade":
            x4 = (s, 0, s**spec.eps)
        else:
            x4 = (s**spec.delta, 0, s**spec.eps)
        v = [(0, 0, 0), (2 * s, 0, 0), x3, x4]
    elif fam == "Sliver":
        a, c = s**spec.eps2, s**spec.eps1
        v = [(a, 0, 0), (-a, 0, 0), (0, -s, c), (0, s, c)]
    elif fam == "ConvI":
        v = [(0, 0, 0), (s, 0, 0), (0, s**spec.eps, 0), (0, 0, s**spec.delta)]
    else:
        v = [(0, 0, 0), (s, 0, 0), (s / 2, s**spec.eps, 0), (0, 0, s)]
    return Simplex(np.array(v, dtype=float))


@dataclass
class StudyRow:
    N: Optional[int]
    s: float
    quantities: dict = field(default_factory=dict)


def rates(errors: Sequence[float]) -> list:
    """r_j = log2(Err_{j-1} / Err_j); the first entry is None."""
    out = [None]
    for prev, cur in zip(errors[:-1], errors[1:]):
        out.append(math.log2(prev / cur) if prev > 0 and cur > 0 else None)
    return out


def sliver_row(eps1: float, eps2: float, N: int) -> StudyRow:
    t = family_generate(FamilySpec("Sliver", eps1=eps1, eps2=eps2, N=N))
    h, edges = diameter_and_edges(t)
    vol = measure(t)
    return StudyRow(
        N=N,
        s=1.0 / N,
        quantities={
            "L6_over_L1": edges[-1].length / edges[0].length,
            "h3_over_measure": h**3 / vol,
            "H_over_h": param_H_T0(t) / h,
            "R3_over_h": circumradius(t) / h,
        },
    )


def sliver_table(eps1: float, eps2: float, N_list: Sequence[int]) -> list:
    if not N_list:
        raise InvalidFamilyParamsError("N_list must be non-empty")
    return [sliver_row(eps1, eps2, int(n)) for n in N_list]


def interpolation_error(t: Simplex, f: ScalarField, op: OperatorSpec, norm: NormSpec) -> float:
    """|f - I f|_{W^{m,q}(t)}."""
    return sobolev_seminorm(t, f - interpolate(f, t, op), norm.m, norm.q)


def run_convergence(
    family: str,
    eps: float,
    delta: Optional[float] = None,
    N_list: Sequence[int] = (64, 128, 256),
    spec: OperatorSpec = OperatorSpec(),
    norm: NormSpec = NormSpec(m=1, q=2, ell=1, p=2),
    field: Optional[ScalarField] = None,
) -> list:
    """Err = |phi - I phi|_{W^{m,q}} on ConvI/ConvII for each N, plus rates."""
    if family not in ("ConvI", "ConvII"):
        raise InvalidFamilyParamsError("convergence studies use ConvI or ConvII")
    f = field or study_field(3)
    base = FamilySpec(family, eps=eps, delta=delta)
    errs = []
    for n in N_list:
        t = family_generate(base.at_level(n))
        errs.append(interpolation_error(t, f, spec, norm))
    return [
        StudyRow(N=int(n), s=1.0 / n, quantities={"Err": e, "r": r})
        for n, e, r in zip(N_list, errs, rates(errs))
    ]


@dataclass
class BoundReport:
    family: FamilySpec
    bound: str
    levels: list
    lhs: list
    rhs: list
    ratios: list
    ratio_max: float
    zero_rhs: bool = False

    def bounded(self, factor: float = 1.25) -> bool:
        """Trend test: ratio at the finest level <= factor * ratio at the coarsest."""
        return self.ratios[-1] <= factor * self.ratios[0]


def bound_rhs(t: Simplex, f: ScalarField, bound: str, norm: NormSpec) -> float:
    if bound == THEOREM_A:
        return classical_rhs(t, f, norm)
    if bound == THEOREM_B_H:
        return anisotropic_rhs(t, f, norm, H_SCALED)
    if bound == THEOREM_B_DIR:
        return anisotropic_rhs(t, f, norm, DIRECTIONAL)
    raise ValueError(f"unknown bound {bound!r}; use A, B-h or B-dir")


def measure_bound_constant(
    family: FamilySpec,
    field: ScalarField,
    bound: str,
    norm: NormSpec,
    levels: Sequence[float],
    op: OperatorSpec = OperatorSpec(),
) -> BoundReport:
    """lhs/rhs over a sequence of scales ``levels`` (values of s).

    A level with rhs = 0 and lhs > 0 is recorded with ratio ``inf`` and sets
    ``zero_rhs``; a level with lhs = 0 has ratio 0.
    """
    lhs, rhs, ratios = [], [], []
    zero = False
    for s in levels:
        t = family_generate(family.at(s))
        e = interpolation_error(t, field, op, norm)
        r = bound_rhs(t, field, bound, norm)
        lhs.append(e)
        rhs.append(r)
        if e == 0.0:
            ratios.append(0.0)
        elif r == 0.0:
            zero = True
            ratios.append(math.inf)
        else:
            ratios.append(e / r)
    return BoundReport(
        family=family,
        bound=bound,
        levels=[float(s) for s in levels],
        lhs=lhs,
        rhs=rhs,
        ratios=ratios,
        ratio_max=max(ratios),
        zero_rhs=zero,
    )


def gram_matrices(t: Simplex, k: int, axis: int):
    """Mass matrix and the stiffness matrix of d/dx_axis over P^k on ``t``.

    The basis is the barycentric monomials of degree k; all entries are
    exact moments.
    """
    exps = homogeneous_exponents(t.dim + 1, k)
    basis = [SimplexPolynomial(t, k, terms={a: 1.0}) for a in exps]
    beta = tuple(1 if j == axis else 0 for j in range(t.dim))
    derivs = [b.derivative(beta) for b in basis]
    n = len(basis)
    mass = np.empty((n, n))
    stiff = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            mass[i, j] = mass[j, i] = (basis[i] * basis[j]).integrate()
            stiff[i, j] = stiff[j, i] = (derivs[i] * derivs[j]).integrate()
    return mass, stiff


def inverse_constant(s, k: int, i: int) -> float:
    """H_i * max over P^k of ||d phi/dx_i||_{L2} / ||phi||_{L2}.

    Computed on the simplex in standard position, where x_i is the i-th
    anisotropic direction. ``i`` is zero-based.
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    t0 = as_simplex(s)
    if not 0 <= i < t0.dim:
        raise ValueError(f"axis index must be in [0, {t0.dim})")
    sp = standard_position(t0)
    t = Simplex(sp.standard_vertices())
    mass, stiff = gram_matrices(t, k, i)
    lam = smallmat.sym_generalized_eig_max(stiff, mass)
    return float(sp.mathscr_H[i] * math.sqrt(max(lam, 0.0)))
