"""Preimage towers over a basepoint.

The level-n fiber of phi over x = [a : b] is cut out by the form
b*P_n - a*Q_n built from the p-primitive model of the n-th iterate; the
form is itself rescaled p-primitively, so "unit leading coefficient and
unit discriminant" of its dehomogenization is a well-posed certificate.
A passing certificate (UNRAMIFIED) proves the splitting field of the
fiber is unramified over Q_p; a failing one is inconclusive, never a
ramification claim, and carries the Newton polygon as a diagnostic.

Reduced preimage trees live in a single splitting field F_{p^m}, with
parent edges given by the reduced map and the p-power Frobenius acting
on every level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ResourceLimitError
from .finitefield import (
    FIELD_SIZE_CAP,
    FqPoly,
    fiber_form,
    form_is_squarefree,
    fq_extension,
    iterate_forms,
    prime_field_of,
)
from .maps import (
    DEGREE_CAP,
    ProjPointQ,
    RationalMapModel,
    eval_map,
    eval_reduced,
    iterate_map,
    normalize_integral,
    reduce_map,
)
from .padics import INFINITY, require_prime, vp
from .qpolys import QPoly, discriminant

M_CAP = 24

UNRAMIFIED = "UNRAMIFIED"
NO_CERTIFICATE = "NO_CERTIFICATE"


@dataclass(frozen=True)
class FiberPolynomial:
    """The p-primitively scaled level-n fiber form over x and its affine part."""

    n: int
    x: ProjPointQ
    p: int
    form: tuple
    poly: QPoly
    formal_degree: int
    inf_multiplicity: int
    integral: bool


def _fiber_poly_q(model: RationalMapModel, n: int, x: ProjPointQ, *, cap_degree: int):
    """Integer fiber form b*P_n - a*Q_n of the canonical iterate model."""
    it = iterate_map(model, n, cap_degree=cap_degree)
    a, b = x.a, x.b
    raw = tuple(b * f - a * g for f, g in zip(it.F, it.G))
    if all(c == 0 for c in raw):
        raise InputError("fiber form vanishes identically; the map is degenerate")
    return raw


def fiber_polynomial(
    model: RationalMapModel,
    n: int,
    x: ProjPointQ,
    p: int,
    *,
    cap_degree: int = DEGREE_CAP,
) -> FiberPolynomial:
    if n < 1:
        raise InputError("fiber level must be >= 1")
    require_prime(p)
    raw = _fiber_poly_q(model, n, x, cap_degree=cap_degree)
    minv = min(vp(p, c) for c in raw if c != 0)
    scale = p**minv
    form = tuple(c // scale for c in raw)
    poly = QPoly(form)
    formal = model.d**n
    return FiberPolynomial(
        n=n,
        x=x,
        p=p,
        form=form,
        poly=poly,
        formal_degree=formal,
        inf_multiplicity=formal - poly.degree,
        integral=x.is_integral(p),
    )


def newton_polygon(f: QPoly, p: int) -> tuple:
    """Lower convex hull of (i, vp(c_i)): a tuple of (slope, length) pairs.

    Slopes are strictly increasing Fractions; the lengths sum to
    deg f minus the order of vanishing at 0.
    """
    if f.is_zero() or f.degree < 1:
        raise InputError("Newton polygon needs degree >= 1")
    pts = [(i, vp(p, c)) for i, c in enumerate(f.coeffs) if c != 0]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return tuple(out)


@dataclass(frozen=True)
class FiberReport:
    n: int
    x: ProjPointQ
    p: int
    lc: Fraction
    lc_valuation: int
    disc: Fraction | None
    disc_valuation: int | float
    degree_full: bool
    certificate: str
    reduced_factor_degrees: tuple | None
    newton: tuple | None
    integral: bool


def fiber_report(fiber: FiberPolynomial) -> FiberReport:
    """Unit-lc/unit-disc certificate for the splitting field of a fiber.

    UNRAMIFIED exactly when both valuations vanish; anything else is
    NO_CERTIFICATE (the unit-discriminant test is sufficient, not
    necessary, so no negative claim is ever reported).
    """
    p = fiber.p
    poly = fiber.poly
    if poly.is_zero():
        raise InputError("zero fiber polynomial")
    lc = poly.lc
    lc_val = vp(p, lc)
    if poly.degree < 1:
        # every preimage is the point at infinity; no affine data to certify
        return FiberReport(
            n=fiber.n,
            x=fiber.x,
            p=p,
            lc=lc,
            lc_valuation=lc_val,
            disc=None,
            disc_valuation=INFINITY,
            degree_full=False,
            certificate=NO_CERTIFICATE,
            reduced_factor_degrees=None,
            newton=None,
            integral=fiber.integral,
        )
    disc = discriminant(poly)
    disc_val = vp(p, disc)
    unramified = lc_val == 0 and disc_val == 0
    factor_degrees = None
    newton = None
    if unramified:
        reduced = FqPoly.of_integers(prime_field_of(p), [int(c) for c in poly.coeffs])
        degs = []
        for fac, mult in reduced.factor():
            assert mult == 1, "unit discriminant forces a squarefree reduction"
            degs.append(fac.degree)
        factor_degrees = tuple(sorted(degs))
    else:
        newton = newton_polygon(poly, p)
    return FiberReport(
        n=fiber.n,
        x=fiber.x,
        p=p,
        lc=lc,
        lc_valuation=lc_val,
        disc=disc,
        disc_valuation=disc_val,
        degree_full=poly.degree == fiber.formal_degree,
        certificate=UNRAMIFIED if unramified else NO_CERTIFICATE,
        reduced_factor_degrees=factor_degrees,
        newton=newton,
        integral=fiber.integral,
    )


def _reduced_fiber(model: RationalMapModel, n: int, xbar: int | None, p: int):
    """Fiber form of the n-th iterate of the reduced map over a residue point."""
    prim = normalize_integral(model, p)
    rmap = reduce_map(prim)
    if rmap.reduced_degree < model.d:
        raise InputError(
            f"reduction has degree {rmap.reduced_degree} < {model.d}; "
            "every reduced fiber is degree-deficient"
        )
    Fn, Gn = iterate_forms(rmap.field, rmap.F1, rmap.G1, n)
    a, b = (1, 0) if xbar is None else (xbar % p, 1)
    return rmap, fiber_form(rmap.field, Fn, Gn, a, b)


def frobenius_cycle_type(
    model: RationalMapModel,
    n: int,
    xbar: int | None,
    p: int,
    *,
    cap_degree: int = DEGREE_CAP,
) -> tuple:
    """Cycle type of Frobenius on the level-n reduced fiber over xbar.

    Equals the sorted multiset of irreducible-factor degrees of the affine
    fiber polynomial over F_p, plus a 1-cycle for infinity when infinity
    is a (simple) fiber point; the entries sum to d^n.
    """
    if n < 1:
        raise InputError("fiber level must be >= 1")
    if model.d**n > cap_degree:
        raise ResourceLimitError(f"fiber degree {model.d}^{n} exceeds cap {cap_degree}")
    rmap, fib = _reduced_fiber(model, n, xbar, p)
    if not form_is_squarefree(rmap.field, fib):
        raise InputError(
            f"reduced fiber over {render_residue(xbar)} at level {n} is not "
            "separable; the point lies in the reduced postcritical set "
            "(or maps into it)"
        )
    poly = FqPoly(rmap.field, fib)
    inf_mult = (len(fib) - 1) - poly.degree
    degs = []
    if poly.degree >= 1:
        degs = [fac.degree for fac, _ in poly.factor()]
    degs.extend([1] * inf_mult)
    out = tuple(sorted(degs))
    assert sum(out) == model.d**n
    return out


def render_residue(xbar: int | None) -> str:
    return "inf" if xbar is None else str(xbar)


@dataclass(frozen=True)
class PreimageTree:
    """Levels 0..N of reduced preimages in one field F_{p^m}.

    levels[n] lists the fiber points of the n-th reduced iterate (None is
    infinity), parents[n][i] indexes levels[n-1], and frob[n][i] indexes
    levels[n] (the p-power Frobenius permutation).
    """

    p: int
    m: int
    xbar: int | None
    levels: tuple
    parents: tuple
    frob: tuple

    @property
    def level_sizes(self) -> tuple:
        return tuple(len(level) for level in self.levels)

    def cycle_type(self, n: int) -> tuple:
        """Cycle lengths of the Frobenius permutation on level n, sorted."""
        perm = self.frob[n]
        seen = [False] * len(perm)
        out = []
        for i in range(len(perm)):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            out.append(length)
        return tuple(sorted(out))


def _point_sort_key(pt):
    return (1, 0) if pt is None else (0, pt)


def preimage_tree(
    model: RationalMapModel,
    N: int,
    xbar: int | None,
    p: int,
    *,
    m_cap: int = M_CAP,
    cap_field: int = FIELD_SIZE_CAP,
    cap_degree: int = DEGREE_CAP,
    seed: int = 0,
) -> PreimageTree:
    if N < 1:
        raise InputError("tree depth must be >= 1")
    if model.d**N > cap_degree:
        raise ResourceLimitError(f"fiber degree {model.d}^{N} exceeds cap {cap_degree}")
    prim = normalize_integral(model, p)
    rmap = reduce_map(prim)
    if rmap.reduced_degree < 1:
        raise InputError("reduced map is constant; no preimage tree")
    field = rmap.field
    xbar = None if xbar is None else xbar % p

    fibers = []
    degrees = set()
    Fn, Gn = rmap.F1, rmap.G1
    for n in range(1, N + 1):
        if n > 1:
            Fn, Gn = iterate_forms(field, rmap.F1, rmap.G1, n)
        a, b = (1, 0) if xbar is None else (xbar, 1)
        fib = fiber_form(field, Fn, Gn, a, b)
        if not form_is_squarefree(field, fib):
            raise InputError(
                f"separability failure at level {n} over {render_residue(xbar)}: "
                "the basepoint meets the reduced postcritical set"
            )
        poly = FqPoly(field, fib)
        inf_mult = (len(fib) - 1) - poly.degree
        if poly.degree >= 1:
            degrees.update(fac.degree for fac, _ in poly.factor(seed=seed))
        fibers.append((poly, inf_mult))

    m = 1
    for deg in degrees:
        m = math.lcm(m, deg)
    if m > m_cap:
        raise ResourceLimitError(
            f"splitting the tree needs F_{p}^{m}, above the extension cap {m_cap}"
        )
    ext = fq_extension(p, m, cap=cap_field)

    levels = [(xbar,)]
    for poly, inf_mult in fibers:
        pts = []
        if poly.degree >= 1:
            lifted = FqPoly(ext, poly.coeffs)
            roots = lifted.roots()
            assert all(mult == 1 for _, mult in roots)
            assert len(roots) == poly.degree, "fiber must split in F_{p^m}"
            pts = [root for root, _ in roots]
        if inf_mult == 1:
            pts.append(None)
        levels.append(tuple(sorted(pts, key=_point_sort_key)))

    parents = [()]
    for n in range(1, N + 1):
        idx = {pt: i for i, pt in enumerate(levels[n - 1])}
        row = []
        for pt in levels[n]:
            img = eval_reduced(ext, rmap.F1, rmap.G1, pt)
            assert img in idx, "a fiber point must map onto the previous level"
            row.append(idx[img])
        parents.append(tuple(row))

    frob = []
    for level in levels:
        idx = {pt: i for i, pt in enumerate(level)}
        row = []
        for pt in level:
            img = None if pt is None else ext.frobenius(pt)
            assert img in idx, "levels must be Frobenius-stable"
            row.append(idx[img])
        frob.append(tuple(row))

    return PreimageTree(
        p=p,
        m=m,
        xbar=xbar,
        levels=tuple(levels),
        parents=tuple(parents),
        frob=tuple(frob),
    )


def shift_divisibility_check(
    model: RationalMapModel,
    n: int,
    x: ProjPointQ,
    *,
    cap_degree: int = DEGREE_CAP,
) -> bool:
    """Does the level-n fiber over x embed into the level-(n+1) fiber over phi(x)?

    True iff F_{n,x} divides F_{n+1,phi(x)} up to scalars, checked by a
    monic gcd over Q.
    """
    if n < 1:
        raise InputError("fiber level must be >= 1")
    if x.is_infinity:
        raise InputError("shift check needs an affine basepoint")
    y = eval_map(model, x)
    if y.is_infinity:
        raise InputError("phi(x) is the point at infinity; no affine shift target")
    f = QPoly(_fiber_poly_q(model, n, x, cap_degree=cap_degree))
    if f.degree >= 1 and f.gcd(f.derivative()).degree > 0:
        raise InputError(f"level-{n} fiber over {x} is inseparable")
    g = QPoly(_fiber_poly_q(model, n + 1, y, cap_degree=cap_degree))
    return f.gcd(g).degree == f.degree
