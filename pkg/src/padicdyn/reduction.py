"""Reduction-type analysis of a rational map at a prime.

Decides strict good reduction (unit resultant of the p-primitive model,
equivalently full reduced degree), computes the critical divisor of the
reduced map, accumulates the postcritical set as closed points of P^1
over F_p, lists the residual good locus, and checks the fiber criterion
point by point with an internal alarm that cross-checks it against the
resultant criterion.

Closed points are Galois orbits over the algebraic closure: a monic
irreducible polynomial over F_p, or the point at infinity.  Forward
images are computed by evaluating the reduced map on one root inside
F_p[t]/(m) and taking the minimal polynomial of the image over F_p via
its Frobenius orbit; a closed point therefore always pushes forward to
exactly one closed point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ResourceLimitError
from .finitefield import (
    FqField,
    FqPoly,
    fiber_form,
    form_derivative_x,
    form_derivative_y,
    form_is_squarefree,
    form_is_zero,
    form_mul,
    form_sub,
    fq_factor,
    iterate_forms,
)
from .maps import (
    RationalMapModel,
    ReducedMap,
    eval_reduced,
    normalize_integral,
    reduce_map,
)
from .padics import vp
from .qpolys import poly_str

PC_CAP = 100_000


@dataclass(frozen=True)
class ClosedPoint:
    """A closed point of P^1 over F_p: monic irreducible poly, or infinity."""

    p: int
    poly: tuple | None

    def __post_init__(self):
        if self.poly is not None:
            if len(self.poly) < 2 or self.poly[-1] != 1:
                raise InputError("closed point needs a monic polynomial of degree >= 1")

    @classmethod
    def infinity(cls, p: int) -> "ClosedPoint":
        return cls(p, None)

    @classmethod
    def of_residue(cls, p: int, xbar: int | None) -> "ClosedPoint":
        """The closed point of a rational point of P^1(F_p)."""
        if xbar is None:
            return cls(p, None)
        return cls(p, ((-xbar) % p, 1))

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else len(self.poly) - 1

    def sort_key(self):
        if self.poly is None:
            return (1, 0, ())
        return (0, self.degree, self.poly)

    def render(self) -> str:
        return "inf" if self.poly is None else poly_str(self.poly)

    def __repr__(self):
        return f"ClosedPoint({self.render()} over F_{self.p})"


def closed_points_of_form(field: FqField, coeffs) -> list:
    """Closed points cut out by a nonzero binary form, with multiplicities.

    Infinity appears with multiplicity (formal degree - affine degree);
    a nonzero constant form cuts out nothing.
    """
    if form_is_zero(coeffs):
        raise InputError("the zero form does not cut out a point set")
    p = field.p
    poly = FqPoly(field, coeffs)
    inf_mult = (len(coeffs) - 1) - poly.degree
    out = []
    if poly.degree >= 1:
        for fac, mult in fq_factor(poly):
            out.append((ClosedPoint(p, tuple(fac.coeffs)), mult))
    if inf_mult > 0:
        out.append((ClosedPoint.infinity(p), inf_mult))
    out.sort(key=lambda t: t[0].sort_key())
    return out


def critical_divisor(rmap: ReducedMap):
    """Wronskian form F_X G_Y - F_Y G_X of the reduced coprime pair.

    Formal degree 2*deg-2; identically zero exactly when the reduced map
    is inseparable; a nonzero constant for degree 1 (no critical points).
    """
    if rmap.reduced_degree < 1:
        raise InputError("reduced map is constant; critical divisor undefined")
    field = rmap.field
    fx = form_derivative_x(field, rmap.F1)
    fy = form_derivative_y(field, rmap.F1)
    gx = form_derivative_x(field, rmap.G1)
    gy = form_derivative_y(field, rmap.G1)
    return form_sub(field, form_mul(field, fx, gy), form_mul(field, fy, gx))


def pushforward(point: ClosedPoint, rmap: ReducedMap) -> frozenset:
    """Forward image of a closed point under the reduced map.

    A Galois orbit maps onto a Galois orbit, so the image is a single
    closed point (returned as a one-element set for union-accumulation).
    """
    p = rmap.p
    if point.is_infinity:
        return frozenset({ClosedPoint.of_residue(p, rmap.eval(None))})
    k = point.degree
    if k == 1:
        c = (-point.poly[0]) % p
        return frozenset({ClosedPoint.of_residue(p, rmap.eval(c))})
    ext = FqField(p, k, point.poly)
    alpha = p  # encoding of the residue class of t, a root of point.poly
    beta = eval_reduced(ext, rmap.F1, rmap.G1, alpha)
    if beta is None:
        return frozenset({ClosedPoint.infinity(p)})
    orbit = [beta]
    g = ext.frobenius(beta)
    while g != beta:
        orbit.append(g)
        g = ext.frobenius(g)
    minpoly = FqPoly(ext, (1,))
    for root in orbit:
        minpoly = minpoly * FqPoly(ext, (ext.neg(root), 1))
    coeffs = tuple(int(c) for c in minpoly.coeffs)
    assert all(c < p for c in coeffs), "orbit product must have F_p coefficients"
    return frozenset({ClosedPoint(p, coeffs)})


@dataclass(frozen=True)
class PostcriticalSet:
    """PC of the reduced map: all forward images (m >= 1) of critical points."""

    p: int
    points: frozenset
    everything: bool
    stable_depth: int
    crit: frozenset

    def contains_residue(self, xbar: int | None) -> bool:
        if self.everything:
            return True
        return ClosedPoint.of_residue(self.p, xbar) in self.points

    def sorted_points(self) -> list:
        return sorted(self.points, key=lambda q: q.sort_key())


def postcritical_set(rmap: ReducedMap, *, cap: int = PC_CAP) -> PostcriticalSet:
    """Union of forward images of the critical divisor until stabilization.

    Critical points themselves belong to the set only when some forward
    image hits them.  Pushforward never increases the degree of the field
    of definition, so only finitely many closed points can ever appear.
    """
    wron = critical_divisor(rmap)
    if form_is_zero(wron):
        return PostcriticalSet(
            p=rmap.p,
            points=frozenset(),
            everything=True,
            stable_depth=0,
            crit=frozenset(),
        )
    critpts = frozenset(pt for pt, _ in closed_points_of_form(rmap.field, wron))
    pc: set = set()
    frontier = critpts
    depth = 0
    while frontier:
        images: set = set()
        for q in frontier:
            images |= pushforward(q, rmap)
        new = images - pc
        if not new:
            break
        depth += 1
        pc |= new
        if len(pc) > cap:
            raise ResourceLimitError(f"postcritical set exceeded cap {cap}")
        frontier = new
    return PostcriticalSet(
        p=rmap.p,
        points=frozenset(pc),
        everything=False,
        stable_depth=depth,
        crit=critpts,
    )


def good_locus(rmap: ReducedMap, pc: PostcriticalSet) -> tuple:
    """Rational points of P^1(F_p) off the postcritical set (None = infinity)."""
    if pc.everything:
        return ()
    out = [c for c in range(rmap.p) if not pc.contains_residue(c)]
    if not pc.contains_residue(None):
        out.append(None)
    return tuple(out)


@dataclass(frozen=True)
class SGRReport:
    p: int
    d: int
    resultant: Fraction
    res_valuation: int
    reduced_degree: int
    is_strict_good_reduction: bool
    inseparable_reduction: bool


def strict_good_reduction(model: RationalMapModel, p: int) -> SGRReport:
    """Decide strict good reduction by the resultant of the p-primitive model.

    The p-primitive model is unique up to a p-unit scalar, and scaling the
    pair by lambda multiplies the resultant by lambda^(2d), so the
    valuation computed here is an invariant of the map.
    """
    prim = normalize_integral(model, p)
    rmap = reduce_map(prim)
    res = prim.resultant()
    val = vp(p, res)
    sgr = val == 0
    assert sgr == (rmap.reduced_degree == model.d), (
        "resultant valuation and reduced degree disagree"
    )
    insep = False
    if rmap.reduced_degree >= 1:
        insep = form_is_zero(critical_divisor(rmap))
    return SGRReport(
        p=p,
        d=model.d,
        resultant=res,
        res_valuation=val,
        reduced_degree=rmap.reduced_degree,
        is_strict_good_reduction=sgr,
        inseparable_reduction=insep,
    )


@dataclass(frozen=True)
class Condition2Report:
    """Point-by-point fiber criterion on the residual good locus.

    A residue point passes when the level-1 fiber of the reduced map over
    it consists of d distinct points of P^1 (fiber form squarefree of full
    formal degree d).  `holds` is the geometric statement: full reduced
    degree, separable reduction, and no rational violations; an empty
    rational locus is vacuous, since the criterion concerns a Zariski-open
    set over the algebraic closure and rational points may all be missing.
    """

    holds: bool
    witnesses: tuple
    violations: tuple
    locus: tuple
    separable: bool
    reduced_degree_full: bool
    sgr: SGRReport
    pc: PostcriticalSet | None


def condition2_check(model: RationalMapModel, p: int) -> Condition2Report:
    sgr = strict_good_reduction(model, p)
    prim = normalize_integral(model, p)
    rmap = reduce_map(prim)
    d = model.d
    full = rmap.reduced_degree == d

    if rmap.reduced_degree < 1:
        report = Condition2Report(
            holds=False,
            witnesses=(),
            violations=(),
            locus=(),
            separable=False,
            reduced_degree_full=full,
            sgr=sgr,
            pc=None,
        )
        _consistency_alarm(report, model, p)
        return report

    pc = postcritical_set(rmap)
    locus = good_locus(rmap, pc)
    separable = not pc.everything
    field = rmap.field
    witnesses, violations = [], []
    for xbar in locus:
        a, b = (1, 0) if xbar is None else (xbar, 1)
        fib = fiber_form(field, rmap.F1, rmap.G1, a, b)
        ok = full and form_is_squarefree(field, fib)
        (witnesses if ok else violations).append(xbar)
    report = Condition2Report(
        holds=full and separable and not violations,
        witnesses=tuple(witnesses),
        violations=tuple(violations),
        locus=locus,
        separable=separable,
        reduced_degree_full=full,
        sgr=sgr,
        pc=pc,
    )
    _consistency_alarm(report, model, p)
    return report


def _consistency_alarm(report: Condition2Report, model, p) -> None:
    expected = report.sgr.is_strict_good_reduction and report.separable
    if report.holds != expected:
        raise RuntimeError(
            "internal consistency alarm: the fiber criterion and the "
            f"resultant criterion disagree for {model.map_str()} at p={p}"
        )


def etale_fiber_oracle(rmap: ReducedMap, xbar: int | None, n: int) -> bool:
    """Brute force: does the fiber of the n-th reduced iterate over xbar
    consist of deg^n distinct points?

    Returns False for every input when the reduced map is inseparable or
    constant (no fiber of an iterate is ever etale there).
    """
    if n < 1:
        raise InputError("iteration depth must be >= 1")
    if rmap.reduced_degree < 1:
        return False
    if form_is_zero(critical_divisor(rmap)):
        return False
    Fn, Gn = iterate_forms(rmap.field, rmap.F1, rmap.G1, n)
    a, b = (1, 0) if xbar is None else (xbar, 1)
    fib = fiber_form(rmap.field, Fn, Gn, a, b)
    return form_is_squarefree(rmap.field, fib)


@dataclass(frozen=True)
class Degree1Report:
    p: int
    det: Fraction
    det_valuation: int
    is_strict_good_reduction: bool
    towers_trivial: bool
    note: str


def degree_one_check(model: RationalMapModel, p: int) -> Degree1Report:
    """Good reduction for a Mobius map: unit determinant of the primitive model."""
    if model.d != 1:
        raise InputError(f"degree_one_check needs a degree-1 map, got degree {model.d}")
    prim = normalize_integral(model, p)
    # F = a X + b Y, G = c X + e Y stored ascending: F = (b, a), G = (e, c)
    det = Fraction(prim.F[1] * prim.G[0] - prim.F[0] * prim.G[1])
    val = vp(p, det)
    return Degree1Report(
        p=p,
        det=det,
        det_valuation=val,
        is_strict_good_reduction=val == 0,
        towers_trivial=True,
        note="every fiber polynomial has degree 1, so K(X_n(x)) = K for all n",
    )


@dataclass(frozen=True)
class AnalyzeReport:
    model: RationalMapModel
    p: int
    sgr: SGRReport
    rmap: ReducedMap
    pc: PostcriticalSet | None
    locus: tuple
    condition2: Condition2Report


def analyze_map(model: RationalMapModel, p: int) -> AnalyzeReport:
    """One-stop reduction analysis backing the command-line front end."""
    c2 = condition2_check(model, p)
    prim = normalize_integral(model, p)
    rmap = reduce_map(prim)
    return AnalyzeReport(
        model=model,
        p=p,
        sgr=c2.sgr,
        rmap=rmap,
        pc=c2.pc,
        locus=c2.locus,
        condition2=c2,
    )
