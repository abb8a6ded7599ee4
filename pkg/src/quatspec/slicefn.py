"""Stem functions on conjugation-invariant subsets of C and the slice
functions they induce on circular subsets of H.

A stem function F = F1 + I*F2 has H-valued components with F1 even and F2 odd
in Im(z); it induces the slice function f(alpha + iota*beta) =
F1(alpha + i beta) + iota F2(alpha + i beta). The slice product is the product
of stems in H(x)C, which differs from the pointwise product in general.

Contents:

- `CircularSet` - finite set of upper-half-plane representatives (alpha, beta)
- `StemFunction` - polynomial / builtin / tabulated stem with its domain
- `SliceFunction` - the induced function, with evaluation and classification
- `slice_eval`, `slice_product`, `slice_star`, `classify_slice`,
  `decompose_components`, `sup_norm`
- predicates `is_intrinsic`, `is_circular`, `is_cslice`
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .quaternion import (ComplexifiedQuaternion, Quaternion, SpherePoint,
                         sphere_decompose)

MERGE_TOL = 1e-8  # default merge tolerance, matched to eigensolver accuracy
DOMAIN_TOL = 1e-8  # accept a point as inside a finite domain within this


class CircularSet:
    """Finite circular subset of H, stored as its closed-upper-half-plane
    representatives (alpha, beta >= 0), merged and sorted deterministically."""

    __slots__ = ("reps", "tol")

    def __init__(self, reps, tol: float = MERGE_TOL):
        arr = np.asarray(reps, dtype=float).reshape(-1, 2)
        if arr.size and arr[:, 1].min() < -tol:
            raise PreconditionError("representatives must have beta >= 0")
        arr = arr.copy()
        if arr.size:
            arr[:, 1] = np.maximum(arr[:, 1], 0.0)
            arr = _merge_points(arr, tol)
        self.reps = arr
        self.tol = float(tol)

    @property
    def size(self) -> int:
        return self.reps.shape[0]

    def points(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in self.reps]

    def as_complex(self) -> np.ndarray:
        return self.reps[:, 0] + 1j * self.reps[:, 1]

    def distance(self, alpha: float, beta: float) -> float:
        """Distance from the folded point (alpha, |beta|) to the set."""
        if self.size == 0:
            return math.inf
        d = np.hypot(self.reps[:, 0] - alpha, self.reps[:, 1] - abs(beta))
        return float(d.min())

    def contains(self, alpha: float, beta: float, tol: float | None = None) -> bool:
        return self.distance(alpha, beta) <= (DOMAIN_TOL if tol is None else tol)

    def matches(self, other: "CircularSet", tol: float = MERGE_TOL) -> bool:
        return hausdorff(self.reps, other.reps) <= tol

    def to_json(self) -> dict:
        return {"reps": [[float(a), float(b)] for a, b in self.reps]}

    @classmethod
    def from_json(cls, data) -> "CircularSet":
        return cls(np.asarray(data["reps"], dtype=float).reshape(-1, 2))

    def __repr__(self) -> str:
        return f"CircularSet({self.points()!r})"


def _merge_points(arr: np.ndarray, tol: float) -> np.ndarray:
    """Greedy single-linkage merge of nearby points, then lexicographic sort."""
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    centroids: list[np.ndarray] = []
    counts: list[int] = []
    for idx in order:
        p = arr[idx]
        placed = False
        for c_i, c in enumerate(centroids):
            if np.hypot(*(p - c)) <= tol:
                counts[c_i] += 1
                centroids[c_i] = c + (p - c) / counts[c_i]
                placed = True
                break
        if not placed:
            centroids.append(p.copy())
            counts.append(1)
    out = np.array(centroids).reshape(-1, 2)
    out = out[np.lexsort((out[:, 1], out[:, 0]))]
    return out


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two finite sets of (alpha, beta) points."""
    return max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a))


def one_sided_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """sup over a of the distance to b (0 if a is empty, inf if only b is)."""
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    if a.size == 0:
        return 0.0
    if b.size == 0:
        return math.inf
    d = np.hypot(a[:, None, 0] - b[None, :, 0], a[:, None, 1] - b[None, :, 1])
    return float(d.min(axis=1).max())


# -- stems --------------------------------------------------------------------

_POLY_SYM_TOL = 1e-12

# builtin stems: name -> (F1(alpha, beta), F2(alpha, beta), domain predicate)
# All builtins have real-valued components, hence induce intrinsic functions.
_BUILTINS = {
    "id": (lambda a, b: a, lambda a, b: b, None),
    "conj": (lambda a, b: a, lambda a, b: -b, None),
    "re": (lambda a, b: a, lambda a, b: 0.0, None),
    "im": (lambda a, b: abs(b), lambda a, b: 0.0, None),
    "square": (lambda a, b: a * a - b * b, lambda a, b: 2.0 * a * b, None),
    "exp": (lambda a, b: math.exp(a) * math.cos(b),
            lambda a, b: math.exp(a) * math.sin(b), None),
    "sqrt": (lambda a, b: math.sqrt(max(a, 0.0)), lambda a, b: 0.0,
             lambda a, b, tol: abs(b) <= tol and a >= -tol),
    "one": (lambda a, b: 1.0, lambda a, b: 0.0, None),
}

# builtins whose star is again a named builtin
_BUILTIN_STAR = {"id": "conj", "conj": "id", "re": "re", "im": "im",
                 "sqrt": "sqrt", "one": "one"}

# F2 identically zero (circular) builtins
_BUILTIN_CIRCULAR = {"re", "im", "sqrt", "one"}


def _as_quat_coef(c) -> Quaternion:
    if isinstance(c, Quaternion):
        return c
    if isinstance(c, (int, float)):
        return Quaternion(float(c))
    return Quaternion.from_json(c)


def _symmetrize(terms, odd: bool) -> dict[tuple[int, int], Quaternion]:
    """Keep the monomials of the required Y-parity; reject if that changes
    the polynomial beyond the 1e-12 structural tolerance."""
    coefs: dict[tuple[int, int], Quaternion] = {}
    for h, k, c in terms:
        key = (int(h), int(k))
        q = _as_quat_coef(c)
        coefs[key] = coefs.get(key, Quaternion()) + q
    scale = max([q.norm() for q in coefs.values()], default=0.0)
    kept: dict[tuple[int, int], Quaternion] = {}
    for (h, k), q in coefs.items():
        if k % 2 == (1 if odd else 0):
            if q.norm() > 1e-30:
                kept[(h, k)] = q
        elif q.norm() > _POLY_SYM_TOL * max(1.0, scale):
            raise PreconditionError(
                f"monomial X^{h} Y^{k} violates the even/odd stem symmetry")
    return kept


def _poly_eval(coefs: dict[tuple[int, int], Quaternion], a: float, b: float) -> Quaternion:
    out = Quaternion()
    for (h, k), q in coefs.items():
        out = out + q * (a ** h * b ** k)
    return out


class StemFunction:
    """Map z -> (F1(z), F2(z)) with the even/odd pair symmetry.

    kind is one of "poly" (sparse quaternion-coefficient monomials in the real
    variables X = Re z, Y = Im z), "builtin" (named evaluator) or "tabulated"
    (opaque callable, validated by sampling conjugate pairs). Evaluators must
    be pure; instances are immutable and safe to share.
    """

    __slots__ = ("kind", "q1", "q2", "name", "fn", "domain")

    def __init__(self, kind, *, q1=None, q2=None, name=None, fn=None, domain=None):
        self.kind = kind
        self.q1 = q1
        self.q2 = q2
        self.name = name
        self.fn = fn
        self.domain = domain

    @classmethod
    def polynomial(cls, q1_terms, q2_terms, domain: CircularSet | None = None) -> "StemFunction":
        q1 = _symmetrize(q1_terms, odd=False)
        q2 = _symmetrize(q2_terms, odd=True)
        return cls("poly", q1=q1, q2=q2, domain=domain)

    @classmethod
    def builtin(cls, name: str, domain: CircularSet | None = None) -> "StemFunction":
        if name not in _BUILTINS:
            raise PreconditionError(
                f"unknown builtin {name!r}; available: {sorted(_BUILTINS)}")
        return cls("builtin", name=name, domain=domain)

    @classmethod
    def constant(cls, value) -> "StemFunction":
        return cls.polynomial([(0, 0, _as_quat_coef(value))], [])

    @classmethod
    def tabulated(cls, fn, domain: CircularSet | None = None,
                  validate: bool = True) -> "StemFunction":
        stem = cls("tabulated", fn=fn, domain=domain)
        if validate:
            stem._validate_symmetry()
        return stem

    # -- evaluation -------------------------------------------------------------

    def eval(self, z: complex) -> tuple[Quaternion, Quaternion]:
        a, b = float(z.real), float(z.imag)
        if self.kind == "poly":
            return _poly_eval(self.q1, a, b), _poly_eval(self.q2, a, b)
        if self.kind == "builtin":
            f1, f2, _ = _BUILTINS[self.name]
            return Quaternion(f1(a, b)), Quaternion(f2(a, b))
        v1, v2 = self.fn(complex(a, b))
        return _as_quat_coef(v1), _as_quat_coef(v2)

    def accepts(self, alpha: float, beta: float, tol: float = DOMAIN_TOL) -> bool:
        if self.kind == "builtin":
            pred = _BUILTINS[self.name][2]
            if pred is not None and not pred(alpha, beta, tol):
                return False
        if self.domain is not None:
            return self.domain.contains(alpha, beta, tol)
        return True

    def _sample_zs(self) -> list[complex]:
        if self.domain is not None and self.domain.size:
            return [complex(a, b) for a, b in self.domain.points()]
        return _default_grid()

    def _validate_symmetry(self, tol: float = 1e-10) -> None:
        for z in self._sample_zs():
            f1p, f2p = self.eval(z)
            f1m, f2m = self.eval(z.conjugate())
            scale = max(1.0, f1p.norm(), f2p.norm())
            if (f1p - f1m).norm() > tol * scale or (f2p + f2m).norm() > tol * scale:
                raise PreconditionError(
                    f"stem components are not an even/odd pair at z = {z}")

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "poly":
            out = {
                "kind": "poly",
                "Q1": [[h, k, q.to_json()] for (h, k), q in sorted(self.q1.items())],
                "Q2": [[h, k, q.to_json()] for (h, k), q in sorted(self.q2.items())],
            }
        elif self.kind == "builtin":
            out = {"kind": "builtin", "name": self.name}
        else:
            raise PreconditionError("tabulated stems cannot be serialized")
        if self.domain is not None:
            out["domain"] = self.domain.to_json()
        return out

    @classmethod
    def from_json(cls, data) -> "StemFunction":
        domain = CircularSet.from_json(data["domain"]) if "domain" in data else None
        if data["kind"] == "poly":
            terms1 = [(h, k, Quaternion.from_json(c)) for h, k, c in data.get("Q1", [])]
            terms2 = [(h, k, Quaternion.from_json(c)) for h, k, c in data.get("Q2", [])]
            return cls.polynomial(terms1, terms2, domain=domain)
        if data["kind"] == "builtin":
            return cls.builtin(data["name"], domain=domain)
        raise PreconditionError(f"unknown stem kind {data['kind']!r}")


def _default_grid() -> list[complex]:
    """64 sample points with beta > 0 (classification pairs them with their
    conjugates) plus a few real points."""
    alphas = np.linspace(-1.5, 1.5, 8)
    betas = np.linspace(0.15, 1.6, 8)
    zs = [complex(a, b) for a in alphas for b in betas]
    zs += [complex(a, 0.0) for a in (-1.0, -0.25, 0.5, 1.25)]
    return zs


# -- slice class tags -------------------------------------------------------------


@dataclass(frozen=True)
class SliceClass:
    kind: str  # "intrinsic" | "cslice" | "circular" | "general"
    iota: SpherePoint | None = None

    def __str__(self) -> str:
        if self.kind == "cslice":
            return f"cslice({self.iota.b:+.3f},{self.iota.c:+.3f},{self.iota.d:+.3f})"
        return self.kind


INTRINSIC = SliceClass("intrinsic")
CIRCULAR = SliceClass("circular")
GENERAL = SliceClass("general")


class SliceFunction:
    """Slice function induced by a stem: f(alpha + iota beta) = F1 + iota F2."""

    __slots__ = ("stem", "_cls")

    def __init__(self, stem: StemFunction):
        self.stem = stem
        self._cls = None

    # constructors

    @classmethod
    def builtin(cls, name: str, domain: CircularSet | None = None) -> "SliceFunction":
        return cls(StemFunction.builtin(name, domain))

    @classmethod
    def constant(cls, value) -> "SliceFunction":
        return cls(StemFunction.constant(value))

    @classmethod
    def polynomial(cls, q1_terms, q2_terms, domain: CircularSet | None = None) -> "SliceFunction":
        return cls(StemFunction.polynomial(q1_terms, q2_terms, domain))

    @classmethod
    def tabulated(cls, fn, domain: CircularSet | None = None,
                  validate: bool = True) -> "SliceFunction":
        return cls(StemFunction.tabulated(fn, domain, validate))

    @property
    def domain(self) -> CircularSet | None:
        return self.stem.domain

    def eval(self, q: Quaternion) -> Quaternion:
        alpha, beta, iota = sphere_decompose(q)
        if not self.stem.accepts(alpha, beta):
            raise PreconditionError(f"point {q} is outside the function domain")
        f1, f2 = self.stem.eval(complex(alpha, beta))
        if iota is None:
            return f1
        return f1 + iota * f2

    __call__ = eval

    def classify(self) -> SliceClass:
        if self._cls is None:
            self._cls = classify_slice(self)
        return self._cls

    def star(self) -> "SliceFunction":
        return slice_star(self)

    def __mul__(self, other: "SliceFunction") -> "SliceFunction":
        return slice_product(self, other)

    def __add__(self, other: "SliceFunction") -> "SliceFunction":
        return slice_add(self, other)

    def __neg__(self) -> "SliceFunction":
        return slice_product(SliceFunction.constant(-1.0), self)

    def __sub__(self, other: "SliceFunction") -> "SliceFunction":
        return slice_add(self, -other)

    def to_json(self) -> dict:
        return self.stem.to_json()

    @classmethod
    def from_json(cls, data) -> "SliceFunction":
        return cls(StemFunction.from_json(data))


def slice_eval(f: SliceFunction, q: Quaternion) -> Quaternion:
    return f.eval(q)


def _merged_domain(f: SliceFunction, g: SliceFunction) -> CircularSet | None:
    a, b = f.domain, g.domain
    if a is None:
        return b
    if b is None:
        return a
    if not a.matches(b):
        raise PreconditionError("slice functions live on different domains")
    return a


def _poly_mul(p: dict, q: dict) -> list[tuple[int, int, Quaternion]]:
    out: dict[tuple[int, int], Quaternion] = {}
    for (h1, k1), c1 in p.items():
        for (h2, k2), c2 in q.items():
            key = (h1 + h2, k1 + k2)
            out[key] = out.get(key, Quaternion()) + c1 * c2
    return [(h, k, c) for (h, k), c in out.items()]


def slice_product(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """Slice product induced by the stem product
    FG = (F1 G1 - F2 G2) + I (F1 G2 + F2 G1)."""
    domain = _merged_domain(f, g)
    fs, gs = f.stem, g.stem
    if fs.kind == "poly" and gs.kind == "poly":
        q1 = _poly_mul(fs.q1, gs.q1) + [(h, k, -c) for h, k, c in _poly_mul(fs.q2, gs.q2)]
        q2 = _poly_mul(fs.q1, gs.q2) + _poly_mul(fs.q2, gs.q1)
        return SliceFunction(StemFunction.polynomial(q1, q2, domain))

    def stem_fn(z: complex):
        f1, f2 = fs.eval(z)
        g1, g2 = gs.eval(z)
        return f1 * g1 - f2 * g2, f1 * g2 + f2 * g1

    return SliceFunction(StemFunction.tabulated(stem_fn, domain, validate=False))


def slice_add(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """Pointwise sum, realized on stems."""
    domain = _merged_domain(f, g)
    fs, gs = f.stem, g.stem
    if fs.kind == "poly" and gs.kind == "poly":
        q1 = [(h, k, c) for (h, k), c in fs.q1.items()] + \
             [(h, k, c) for (h, k), c in gs.q1.items()]
        q2 = [(h, k, c) for (h, k), c in fs.q2.items()] + \
             [(h, k, c) for (h, k), c in gs.q2.items()]
        return SliceFunction(StemFunction.polynomial(q1, q2, domain))

    def stem_fn(z: complex):
        f1, f2 = fs.eval(z)
        g1, g2 = gs.eval(z)
        return f1 + g1, f2 + g2

    return SliceFunction(StemFunction.tabulated(stem_fn, domain, validate=False))


def slice_star(f: SliceFunction) -> SliceFunction:
    """The *-involution f* induced by F* = conj(F1) - I conj(F2)."""
    fs = f.stem
    if fs.kind == "poly":
        q1 = [(h, k, c.conjugate()) for (h, k), c in fs.q1.items()]
        q2 = [(h, k, -c.conjugate()) for (h, k), c in fs.q2.items()]
        return SliceFunction(StemFunction.polynomial(q1, q2, fs.domain))
    if fs.kind == "builtin" and fs.name in _BUILTIN_STAR:
        return SliceFunction(StemFunction.builtin(_BUILTIN_STAR[fs.name], fs.domain))

    def stem_fn(z: complex):
        f1, f2 = fs.eval(z)
        return f1.conjugate(), -f2.conjugate()

    return SliceFunction(StemFunction.tabulated(stem_fn, fs.domain, validate=False))


# -- classification ---------------------------------------------------------------


def _sampled_values(f: SliceFunction) -> list[Quaternion]:
    vals: list[Quaternion] = []
    for z in f.stem._sample_zs():
        f1, f2 = f.stem.eval(z)
        vals.extend((f1, f2))
    return vals


def is_intrinsic(f: SliceFunction, tol: float = 1e-9) -> bool:
    """F1 and F2 real-valued; equivalently f(conj q) = conj(f(q))."""
    if f.stem.kind == "builtin":
        return True
    return all(v.im_norm() <= tol * max(1.0, v.norm()) for v in _sampled_values(f))


def is_circular(f: SliceFunction, tol: float = 1e-9) -> bool:
    """F2 identically zero; equivalently f(conj q) = f(q)."""
    fs = f.stem
    if fs.kind == "builtin":
        return fs.name in _BUILTIN_CIRCULAR
    if fs.kind == "poly":
        return all(c.norm() <= tol for c in fs.q2.values())
    return all(fs.eval(z)[1].norm() <= tol * max(1.0, fs.eval(z)[0].norm())
               for z in fs._sample_zs())


def is_cslice(f: SliceFunction, iota: SpherePoint, tol: float = 1e-9) -> bool:
    """F1 and F2 take values in the slice C_iota."""
    axis = np.array([iota.b, iota.c, iota.d])
    for v in _sampled_values(f):
        im = np.array([v.b, v.c, v.d])
        resid = im - axis * float(np.dot(axis, im))
        if np.linalg.norm(resid) > tol * max(1.0, v.norm()):
            return False
    return True


def classify_slice(f: SliceFunction, tol: float = 1e-9) -> SliceClass:
    """Most specific class tag: Intrinsic, else Circular, else CSlice(iota),
    else General. Intrinsic functions are CSlice(iota) for every iota, and a
    circular function may also be CSlice; use the `is_*` predicates for
    membership tests."""
    if is_intrinsic(f, tol):
        return INTRINSIC
    if is_circular(f, tol):
        return CIRCULAR
    ims = np.array([[v.b, v.c, v.d] for v in _sampled_values(f)])
    norms = np.linalg.norm(ims, axis=1)
    lead = ims[int(np.argmax(norms))]
    axis = lead / np.linalg.norm(lead)
    iota = SpherePoint(*axis)
    if is_cslice(f, iota, tol):
        return SliceClass("cslice", iota)
    return GENERAL


def decompose_components(f: SliceFunction, iota: SpherePoint, kappa: SpherePoint,
                         ) -> tuple[SliceFunction, SliceFunction, SliceFunction, SliceFunction]:
    """Split f = f0 + f1*iota + f2*kappa + f3*(iota kappa) with every
    component an intrinsic slice function.

    Requires {1, iota, kappa, iota*kappa} to be an orthonormal basis of H,
    i.e. iota*kappa = -kappa*iota.
    """
    if (iota * kappa + kappa * iota).norm() > 1e-10:
        raise PreconditionError("iota and kappa do not anticommute; basis is degenerate")
    delta = iota * kappa
    basis = [Quaternion(1.0), iota, kappa, delta]

    def coords(v: Quaternion) -> list[float]:
        vec = np.array(v.components())
        return [float(np.dot(vec, np.array(e.components()))) for e in basis]

    fs = f.stem
    if fs.kind == "poly":
        comps = []
        for ell in range(4):
            q1 = [(h, k, coords(c)[ell]) for (h, k), c in fs.q1.items()]
            q2 = [(h, k, coords(c)[ell]) for (h, k), c in fs.q2.items()]
            comps.append(SliceFunction(StemFunction.polynomial(q1, q2, fs.domain)))
        return tuple(comps)

    def component(ell: int):
        def stem_fn(z: complex):
            f1, f2 = fs.eval(z)
            return Quaternion(coords(f1)[ell]), Quaternion(coords(f2)[ell])
        return SliceFunction(StemFunction.tabulated(stem_fn, fs.domain, validate=False))

    return tuple(component(ell) for ell in range(4))


def sup_norm(f: SliceFunction, points: CircularSet) -> float:
    """Sup norm over the circular set: max over K of the C*-norm of F(z)."""
    if points.size == 0:
        raise PreconditionError("cannot take a sup over an empty set")
    best = 0.0
    for a, b in points.points():
        f1, f2 = f.stem.eval(complex(a, b))
        best = max(best, ComplexifiedQuaternion(f1, f2).norm())
    return best
