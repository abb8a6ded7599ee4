"""Spherical spectrum of quaternionic operators.

The spherical spectrum of T is the circular set of quaternions q for which
Delta_q(T) = T^2 - T(q + conj q) + I|q|^2 is not invertible; in finite
dimension it coincides with the set of eigenspheres. Numerically it is read
off the eigenvalues of the complex embedding chi(T), folded into the closed
upper half-plane: every eigensphere contributes a conjugate pair, so the
folded multiplicities halve.

Contents:

- `SphericalSpectrum` - representatives, multiplicities, radius
- `delta_q(T, q)` - the defining quadratic operator
- `spherical_spectrum(T)` - eigenvalues of chi(T) folded and clustered
- `spectral_radius(T)` - max |q| over the spectrum
- `gelfand_check(T, n_max)` - the sequence ||T^(2^k)||^(1/2^k)
- `resolvent_series(T, q, tol)` - power-series inverse of Delta_q(T)
- `verify_spectral_classes(T)` - spectral containments per operator class
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalError, PreconditionError
from .qmatrix import QMatrix, chi_embed, is_normal, is_unitary, op_norm
from .quaternion import Quaternion
from .reporting import VerificationReport
from .slicefn import CircularSet, hausdorff

CLUSTER_TOL = 1e-8  # conjugate-pair folding tolerance, scaled by max(1, ||T||)


class SphericalSpectrum:
    """Spherical spectrum as upper-half-plane representatives with
    integer (quaternionic) multiplicities; sum of multiplicities = n."""

    __slots__ = ("reps", "mult")

    def __init__(self, reps, mult):
        self.reps = np.asarray(reps, dtype=float).reshape(-1, 2)
        self.mult = tuple(int(m) for m in mult)
        if len(self.mult) != self.reps.shape[0]:
            raise PreconditionError("one multiplicity per representative required")

    @property
    def size(self) -> int:
        return self.reps.shape[0]

    def total_multiplicity(self) -> int:
        return sum(self.mult)

    def radius(self) -> float:
        if self.size == 0:
            return 0.0
        return float(np.hypot(self.reps[:, 0], self.reps[:, 1]).max())

    def circular_set(self, tol: float = CLUSTER_TOL) -> CircularSet:
        return CircularSet(self.reps, tol)

    def to_json(self) -> dict:
        return {
            "reps": [[float(a), float(b)] for a, b in self.reps],
            "mult": list(self.mult),
            "radius": self.radius(),
        }

    @classmethod
    def from_json(cls, data) -> "SphericalSpectrum":
        return cls(np.asarray(data["reps"], dtype=float).reshape(-1, 2), data["mult"])

    def __repr__(self) -> str:
        pts = ", ".join(f"({a:.6g}, {b:.6g})x{m}"
                        for (a, b), m in zip(self.reps, self.mult))
        return f"SphericalSpectrum[{pts}]"


def cluster_points(points: np.ndarray, tol: float) -> tuple[np.ndarray, list[int]]:
    """Greedy merge of nearby 2D points; returns sorted centroids and counts."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    order = np.lexsort((points[:, 1], points[:, 0]))
    centroids: list[np.ndarray] = []
    counts: list[int] = []
    for idx in order:
        p = points[idx]
        for c_i, c in enumerate(centroids):
            if np.hypot(*(p - c)) <= tol:
                counts[c_i] += 1
                centroids[c_i] = c + (p - c) / counts[c_i]
                break
        else:
            centroids.append(p.copy())
            counts.append(1)
    cent = np.array(centroids).reshape(-1, 2)
    order = np.lexsort((cent[:, 1], cent[:, 0]))
    return cent[order], [counts[i] for i in order]


def delta_q(t: QMatrix, q: Quaternion) -> QMatrix:
    """Delta_q(T) = T^2 - T (q + conj q) + I |q|^2; constant on eigenspheres."""
    trace = 2.0 * q.a
    mod2 = q.norm() ** 2
    return t @ t - t * trace + QMatrix.identity(t.n) * mod2


def spherical_spectrum(t: QMatrix, tol: float | None = None) -> SphericalSpectrum:
    """Eigenvalues of chi(T), folded into the closed upper half-plane and
    clustered; in finite dimension the whole spectrum is point spectrum."""
    scale = max(1.0, op_norm(t))
    if tol is None:
        tol = CLUSTER_TOL * scale
    try:
        eigs = np.linalg.eigvals(chi_embed(t))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigvals rarely fails
        raise NumericalError(f"eigensolver failure: {exc}") from exc
    folded = np.column_stack([eigs.real, np.abs(eigs.imag)])
    reps, counts = cluster_points(folded, tol)
    mult = []
    for c in counts:
        if c % 2:
            raise NumericalError(
                "folded eigenvalues did not pair up; conjugate symmetry lost")
        mult.append(c // 2)
    if sum(mult) != t.n:
        raise NumericalError("spectrum multiplicities do not sum to the dimension")
    # tidy tiny negative-zero betas produced by folding
    reps[:, 1] = np.maximum(reps[:, 1], 0.0)
    return SphericalSpectrum(reps, mult)


def spectral_radius(t: QMatrix) -> float:
    """max |q| over the spherical spectrum; equals ||T|| for normal T."""
    return spherical_spectrum(t).radius()


def gelfand_check(t: QMatrix, n_max: int) -> np.ndarray:
    """The sequence ||T^(2^k)||^(1/2^k), k = 0..n_max, converging to the
    spectral radius (constant for normal T). Large ||T|| with large n_max can
    overflow; pre-scale the input in that case."""
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    out = [op_norm(t)]
    power = t
    for k in range(1, n_max + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            power = power @ power
        if not np.isfinite(power.data).all():
            raise NumericalError(
                "matrix powers overflowed; pre-scale T before the Gelfand check")
        out.append(op_norm(power) ** (1.0 / 2 ** k))
    return np.array(out)


def resolvent_series(t: QMatrix, q: Quaternion, tol: float,
                     max_terms: int = 20000) -> QMatrix:
    """Inverse of Delta_q(T) by the series sum_n T^n a_n with real
    coefficients a_n = |q|^(-2n-2) sum_h q^h conj(q)^(n-h).

    Requires |q| > ||T|| strictly (1e-6 relative margin). The partial sum is
    extended until the tail is small enough that the returned R satisfies
    Delta_q(T) R = R Delta_q(T) = I within 10*tol.
    """
    tnorm = op_norm(t)
    modq = q.norm()
    if modq <= tnorm * (1.0 + 1e-6):
        raise PreconditionError(
            f"|q| = {modq:.6g} is not strictly outside the spectral bound ||T|| = {tnorm:.6g}")
    dnorm = op_norm(delta_q(t, q))
    trace = 2.0 * q.a
    mod2 = modq * modq
    ratio = tnorm / modq
    a_prev2 = 0.0
    a_prev1 = 1.0 / mod2  # a_0
    total = QMatrix.identity(t.n) * a_prev1
    power = QMatrix.identity(t.n)
    for n in range(1, max_terms):
        a_n = (trace * a_prev1 - a_prev2) / mod2
        power = power @ t
        total = total + power * a_n
        a_prev2, a_prev1 = a_prev1, a_n
        # |a_m| <= (m+1) |q|^(-m-2) gives a closed-form tail bound; stopping
        # on it (not on the term size, which can vanish identically for
        # imaginary q) keeps ||Delta_q(T) R - I|| <= ||Delta|| * tail <= tol
        tail = (ratio ** (n + 1) / mod2) * ((n + 2) / (1.0 - ratio)
                                            + ratio / (1.0 - ratio) ** 2)
        if tail * max(dnorm, 1e-300) <= tol:
            return total
    raise NumericalError("resolvent series did not converge within the term budget")


def verify_spectral_classes(t: QMatrix) -> VerificationReport:
    """Detect the operator class of T and check the corresponding spectral
    containments, plus sigma_S(T) = sigma_S(T*) and the circularity contract.

    In finite dimension the residual and continuous parts of the spectrum are
    empty; the report records this instead of representing them.
    """
    report = VerificationReport()
    scale = max(1.0, op_norm(t))
    class_tol = 1e-10
    sa = (t - t.adjoint()).norm() <= class_tol * scale
    asa = (t + t.adjoint()).norm() <= class_tol * scale
    unitary = is_unitary(t, class_tol)
    normal = is_normal(t, class_tol)
    if sa:
        detected = "self-adjoint"
    elif asa and unitary:
        detected = "anti-self-adjoint unitary"
    elif asa:
        detected = "anti-self-adjoint"
    elif unitary:
        detected = "unitary"
    elif normal:
        detected = "normal"
    else:
        detected = "generic"
    report.meta["class"] = detected

    spec = spherical_spectrum(t)
    tol = 1e-8 * scale
    if sa:
        report.add("spectrum-real", "T = T*  =>  sigma_S(T) subset R",
                   float(spec.reps[:, 1].max(initial=0.0)), tol)
    if asa:
        report.add("spectrum-imaginary", "T = -T*  =>  sigma_S(T) subset Im(H)",
                   float(np.abs(spec.reps[:, 0]).max(initial=0.0)), tol)
    if unitary:
        moduli = np.hypot(spec.reps[:, 0], spec.reps[:, 1])
        report.add("spectrum-unit-modulus", "T unitary  =>  |q| = 1 on sigma_S(T)",
                   float(np.abs(moduli - 1.0).max(initial=0.0)), tol)
    if asa and unitary:
        target = np.array([[0.0, 1.0]])
        report.add("spectrum-is-sphere",
                   "T anti-self-adjoint unitary  =>  sigma_S(T) = S",
                   hausdorff(spec.reps, target), tol)
    if normal:
        report.add("radius-equals-norm", "T normal  =>  r_S(T) = ||T||",
                   abs(spec.radius() - op_norm(t)), 1e-9 * scale)
    spec_star = spherical_spectrum(t.adjoint())
    report.add("adjoint-same-spectrum", "sigma_S(T) = sigma_S(T*)",
               hausdorff(spec.reps, spec_star.reps), tol)
    report.add("circularity", "only beta >= 0 representatives stored",
               float(max(0.0, -spec.reps[:, 1].min(initial=0.0))), 0.0)
    report.notes.append(
        "finite dimension: residual and continuous spectral parts are empty "
        "(every spectral point is an eigensphere)")
    return report
