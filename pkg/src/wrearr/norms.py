"""Orlicz functions, Luxemburg norms, Lp norms, and the two weighted routes.

A weighted norm of an operator can be computed two ways: apply the norm to
the singular value function under the weight's measure, or apply it to the
weighted rearrangement under Lebesgue measure.  The two routes agree, and
their agreement is one of the package's central machine-checked facts.
"""

from __future__ import annotations

import math

import numpy as np

from .algebra import singular_value_function
from .errors import ParseError, ValidationError
from .stepfn import LEBESGUE, StepFunction, ess_sup, integrate
from .weighted import weighted_rearrangement

__all__ = [
    "OrliczFunction",
    "power",
    "cosh_minus_one",
    "l_log_l",
    "capped",
    "NormSpec",
    "modular",
    "luxemburg_norm",
    "lp_norm",
    "norm_route_a",
    "norm_route_b",
    "membership_route_a",
    "membership_route_b",
]

LUXEMBURG_RELATIVE_WIDTH = 1e-10
_BRACKET_CAP = 2.0**60
_PROBE_EXPONENTS = range(-30, 31)


class OrliczFunction:
    """A convex non-decreasing function on [0, inf] with value 0 at 0.

    ``finite_threshold`` is the supremum of the region where the function is
    finite (``inf`` when it is finite everywhere); evaluation at ``inf``
    yields ``inf``.
    """

    __slots__ = ("name", "_fn", "finite_threshold")

    def __init__(self, name, fn, finite_threshold=math.inf):
        self.name = name
        self._fn = fn
        self.finite_threshold = float(finite_threshold)
        if self(0.0) != 0.0:
            raise ValidationError("an Orlicz function must vanish at 0")
        if not math.isinf(self(math.inf)):
            raise ValidationError("an Orlicz function must be infinite at infinity")

    def __call__(self, u):
        uu = np.asarray(u, dtype=float)
        if np.any(uu < 0):
            raise ValidationError("Orlicz functions are evaluated on [0, inf]")
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.asarray(self._fn(uu), dtype=float)
        return float(out) if uu.ndim == 0 else out

    def __repr__(self):
        return f"OrliczFunction({self.name!r})"


def power(p):
    """u -> u**p for p >= 1."""
    p = float(p)
    if not p >= 1:
        raise ValidationError("power exponent must be >= 1")
    return OrliczFunction(f"pow:{p:g}", lambda u: u**p)


def cosh_minus_one():
    """u -> cosh(u) - 1, evaluated cancellation-free."""
    return OrliczFunction("cosh-1", lambda u: 2.0 * np.sinh(u / 2.0) ** 2)


def l_log_l():
    """u -> u * log(u + 1)."""
    return OrliczFunction("llogl", lambda u: u * np.log1p(u))


def capped(bound):
    """u -> u up to ``bound`` and infinity beyond; finite threshold ``bound``.

    Left continuous at the threshold, where the value is still finite.
    """
    b = float(bound)
    if not (b > 0 and math.isfinite(b)):
        raise ValidationError("cap must be positive and finite")
    return OrliczFunction(
        f"capped:{b:g}", lambda u: np.where(u <= b, u, math.inf), finite_threshold=b
    )


_BUILTIN_FACTORIES = {
    "cosh-1": lambda args: cosh_minus_one(),
    "llogl": lambda args: l_log_l(),
    "pow": lambda args: power(_parse_float(args, "pow")),
    "capped": lambda args: capped(_parse_float(args, "capped")),
}


def _parse_float(args, label):
    if args is None:
        raise ParseError(f"orlicz:{label} needs a numeric parameter")
    try:
        return float(args)
    except ValueError as exc:
        raise ParseError(f"bad parameter for orlicz:{label}: {args!r}") from exc


class NormSpec:
    """Which norm to compute: Lp for p in [1, inf], or an Orlicz norm.

    The measure slot is normally left empty and filled in by whichever
    route evaluates it.
    """

    __slots__ = ("kind", "p", "psi", "measure")

    def __init__(self, kind, p=None, psi=None, measure=None):
        if kind == "lp":
            p = float(p)
            if not p >= 1:
                raise ValidationError("Lp norms need p >= 1")
            self.p = p
            self.psi = None
        elif kind == "orlicz":
            if not isinstance(psi, OrliczFunction):
                raise ValidationError("Orlicz norm spec needs an OrliczFunction")
            self.p = None
            self.psi = psi
        else:
            raise ValidationError(f"unknown norm kind {kind!r}")
        self.kind = kind
        self.measure = measure

    @classmethod
    def lp(cls, p, measure=None):
        return cls("lp", p=p, measure=measure)

    @classmethod
    def orlicz(cls, psi, measure=None):
        return cls("orlicz", psi=psi, measure=measure)

    @classmethod
    def parse(cls, text):
        """Parse a CLI norm string: L1, L2, Linf, orlicz:cosh-1, orlicz:llogl,
        orlicz:pow:3, orlicz:capped:1.0."""
        t = text.strip()
        if t.startswith("orlicz:"):
            rest = t[len("orlicz:") :]
            name, _, args = rest.partition(":")
            factory = _BUILTIN_FACTORIES.get(name)
            if factory is None:
                raise ParseError(f"unknown Orlicz function {name!r}")
            try:
                return cls.orlicz(factory(args if args else None))
            except ValidationError as exc:
                raise ParseError(str(exc)) from exc
        if t.startswith("L"):
            body = t[1:]
            if body == "inf":
                return cls.lp(math.inf)
            try:
                p = float(body)
            except ValueError as exc:
                raise ParseError(f"bad norm spec {text!r}") from exc
            if not p >= 1:
                raise ParseError(f"Lp norms need p >= 1, got {text!r}")
            return cls.lp(p)
        raise ParseError(f"bad norm spec {text!r}")

    def label(self):
        if self.kind == "lp":
            return "Linf" if math.isinf(self.p) else f"L{self.p:g}"
        return f"orlicz:{self.psi.name}"

    def __repr__(self):
        return f"NormSpec({self.label()!r})"


def modular(psi, f, m):
    """The modular: integral of ``psi(f)`` against ``m``, infinity allowed."""
    if not f.is_nonnegative():
        raise ValidationError("the modular is defined for non-negative functions")
    return integrate(f.map_values(psi), m, math.inf)


def luxemburg_norm(psi, f, m):
    """Luxemburg norm: the least scale ``lam`` with modular(f / lam) <= 1.

    Found by monotone bisection: the bracket grows or shrinks geometrically
    from the largest value of ``f``, then bisects to a relative width of
    {width:g}.  Returns 0 for functions vanishing ``m``-almost everywhere and
    ``inf`` when no finite scale brings the modular below 1.
    """
    f = f.absolute()
    if f.is_zero():
        return 0.0
    sup_ess = ess_sup(f, m)
    if sup_ess == 0.0:
        return 0.0
    if math.isinf(sup_ess):
        return math.inf
    lam0 = f.max_value()
    if math.isinf(lam0):
        lam0 = sup_ess

    def modular_at(lam):
        return modular(psi, f.scaled(1.0 / lam), m)

    if modular_at(lam0) <= 1.0:
        hi = lam0
        lo = lam0 / 2.0
        while modular_at(lo) <= 1.0:
            hi = lo
            lo /= 2.0
            if hi <= lam0 / _BRACKET_CAP:
                return 0.0
    else:
        lo = lam0
        hi = lam0 * 2.0
        while modular_at(hi) > 1.0:
            lo = hi
            hi *= 2.0
            if hi >= lam0 * _BRACKET_CAP:
                return math.inf
    while hi - lo > LUXEMBURG_RELATIVE_WIDTH * hi:
        mid = 0.5 * (lo + hi)
        if modular_at(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return float(hi)


luxemburg_norm.__doc__ = luxemburg_norm.__doc__.format(width=LUXEMBURG_RELATIVE_WIDTH)


def lp_norm(f, m, p):
    """(integral of |f|^p d m)^(1/p); essential supremum for p = inf."""
    g = f.absolute()
    if math.isinf(p):
        return ess_sup(g, m)
    if not p >= 1:
        raise ValidationError("Lp norms need p >= 1")
    total = modular(power(p), g, m)
    return float(total ** (1.0 / p))


def _apply_spec(spec, f, m):
    if spec.kind == "lp":
        return lp_norm(f, m, spec.p)
    return luxemburg_norm(spec.psi, f, m)


def _route_measure(spec, fallback, want_lebesgue):
    if spec.measure is None:
        return fallback
    if spec.measure.is_lebesgue != want_lebesgue:
        wanted = "Lebesgue" if want_lebesgue else "the weighted"
        raise ValidationError(f"this route evaluates under {wanted} measure")
    return spec.measure


def norm_route_a(ctx, spec, a):
    """Norm of the singular value function under the weighted measure."""
    m = _route_measure(spec, ctx.weight.measure(), want_lebesgue=False)
    return _apply_spec(spec, singular_value_function(a), m)


def norm_route_b(ctx, spec, a):
    """Norm of the weighted rearrangement under Lebesgue measure."""
    m = _route_measure(spec, LEBESGUE, want_lebesgue=True)
    return _apply_spec(spec, weighted_rearrangement(ctx, a), m)


def _has_finite_modular(psi, f, m):
    # probe geometric scales; sufficient for eventually-zero step functions
    for k in _PROBE_EXPONENTS:
        if modular(psi, f.scaled(2.0**k), m) < math.inf:
            return True
    return False


def _membership(spec, f, m):
    if spec.kind == "lp":
        if math.isinf(spec.p):
            return math.isfinite(ess_sup(f, m))
        return _has_finite_modular(power(spec.p), f, m)
    return _has_finite_modular(spec.psi, f, m)


def membership_route_a(ctx, spec, a):
    """Whether some positive scaling of the singular value function has a
    finite modular under the weighted measure."""
    m = _route_measure(spec, ctx.weight.measure(), want_lebesgue=False)
    return _membership(spec, singular_value_function(a), m)


def membership_route_b(ctx, spec, a):
    """Whether some positive scaling of the weighted rearrangement has a
    finite modular under Lebesgue measure."""
    m = _route_measure(spec, LEBESGUE, want_lebesgue=True)
    return _membership(spec, weighted_rearrangement(ctx, a), m)
