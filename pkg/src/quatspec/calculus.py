"""Continuous slice functional calculus for normal quaternionic operators.

Every normal T decomposes as T = A + JB with A = (T+T*)/2 self-adjoint,
B = |T-T*|/2 positive, and J an anti-self-adjoint unitary commuting with
both. J extends to a full left scalar multiplication L commuting with A and
B; fixing iota = i, kappa = j gives the operators J = L_i, K = L_j used by
the four calculi:

- polynomial:  g(T) = Q1(A,B) + J Q2(A,B)
- intrinsic:   f(T) from the eigendecomposition of T on H+ (isometric
               *-homomorphism with the spectral map property)
- C_iota:      f(T) = f0(T) + f1(T) J
- circular / general: f(T) = f0(T) + f1(T) J + f2(T) K + f3(T) JK

plus the contour realization over a circle in C_iota and the spectral-measure
weights of a self-adjoint operator.

The decomposition data is bundled in an immutable `CalculusContext`; all
calculi are pure functions of it and may run concurrently on a shared
context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, PreconditionError
from .qmatrix import (LeftMultiplication, QMatrix, QVector, chi_embed,
                      chi_extract, chi_vec_extract, extend_complex_operator,
                      is_normal, is_self_adjoint, op_norm, polar_decompose)
from .quaternion import I as QI
from .quaternion import J as QJ
from .quaternion import Quaternion, SpherePoint
from .slicefn import (CircularSet, SliceFunction, decompose_components,
                      is_circular, is_cslice, is_intrinsic)
from .spectral import SphericalSpectrum, cluster_points

# global slice convention: iota = i, kappa = j, so {1, iota, kappa,
# iota*kappa} is the standard basis {1, i, j, k}
IOTA = QI
KAPPA = QJ

_EIG_CLUSTER_TOL = 1e-8  # relative eigenvalue clustering for the eigensystem
_DEGENERACY_TOL = 1e-7  # absolute-on-lambda clustering for measure weights


def _normal_eigensystem(t: QMatrix, tol: float = 1e-10
                        ) -> tuple[np.ndarray, np.ndarray, QMatrix]:
    """Eigenvalues (folded to Im >= 0) and a quaternionic orthonormal
    eigenbasis of a normal operator.

    Returns (lambdas, is_real, columns): T u_m = u_m lambda_m with lambda_m
    read as alpha + iota*beta in C_iota, is_real flags the eigenvectors of the
    real eigenspheres (the kernel of T - T*), and the u_m are the columns of
    the returned matrix.

    Route: complex Schur of chi(T) (diagonal for normal input), conjugate
    pairs folded into the upper half-plane. Eigenspaces of real eigenvalues
    carry the quaternionic structure v -> Omega conj(v); half of each such
    eigenspace is selected so that the symplectic form vanishes on the
    selection, which makes the extracted quaternionic vectors orthonormal.
    """
    if not is_normal(t, tol):
        raise PreconditionError("operator is not normal")
    n = t.n
    c = chi_embed(t)
    scale = max(1.0, float(np.linalg.norm(c, 2)))
    try:
        s, q = scipy.linalg.schur(c, output="complex")
    except Exception as exc:  # pragma: no cover - schur rarely fails
        raise NumericalError(f"eigensolver failure: {exc}") from exc
    evals = np.diag(s)
    offdiag = s - np.diag(evals)
    if np.linalg.norm(offdiag, 2) > 1e-7 * scale:
        raise NumericalError("Schur form is far from diagonal; input not normal enough")

    omega = np.zeros((2 * n, 2 * n))
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)

    folded = np.column_stack([evals.real, np.abs(evals.imag)])
    cluster_of = _assign_clusters(folded, _EIG_CLUSTER_TOL * scale)

    real_tol = _EIG_CLUSTER_TOL * scale
    selected: list[tuple[complex, bool, np.ndarray]] = []
    for cluster in cluster_of:
        idx = np.array(cluster, dtype=int)
        vals = evals[idx]
        if np.abs(vals.imag).max() <= real_tol:
            if len(idx) % 2:
                raise NumericalError("real eigenspace has odd complex dimension")
            lam = complex(float(vals.real.mean()), 0.0)
            for w in _symplectic_half_basis(q[:, idx], omega):
                selected.append((lam, True, w))
        else:
            pos = idx[evals[idx].imag > 0]
            neg = idx[evals[idx].imag < 0]
            if len(pos) != len(neg):
                raise NumericalError("conjugate eigenvalue pairing lost")
            for p in pos:
                lam = complex(evals[p].real, abs(evals[p].imag))
                selected.append((lam, False, q[:, p]))
    if len(selected) != n:
        raise NumericalError("eigenbasis selection did not yield n vectors")
    selected.sort(key=lambda item: (item[0].real, item[0].imag))
    lambdas = np.array([lam for lam, _, _ in selected])
    is_real = np.array([flag for _, flag, _ in selected])
    columns = QMatrix.from_columns([chi_vec_extract(w) for _, _, w in selected])
    return lambdas, is_real, columns


def _assign_clusters(points: np.ndarray, tol: float) -> list[list[int]]:
    """Greedy clustering (indices) of folded eigenvalues."""
    order = np.lexsort((points[:, 1], points[:, 0]))
    clusters: list[list[int]] = []
    centroids: list[np.ndarray] = []
    for idx in order:
        p = points[idx]
        for c_i, c in enumerate(centroids):
            if np.hypot(*(p - c)) <= tol:
                clusters[c_i].append(int(idx))
                centroids[c_i] = c + (p - c) / len(clusters[c_i])
                break
        else:
            clusters.append([int(idx)])
            centroids.append(p.copy())
    return clusters


def _symplectic_half_basis(v: np.ndarray, omega: np.ndarray) -> list[np.ndarray]:
    """Half basis of a real-eigenvalue eigenspace on which the symplectic
    pairing phi(x, y) = x^H Omega conj(y) vanishes.

    The antilinear map x -> Omega conj(x) preserves the eigenspace and
    squares to -1, so repeatedly picking a unit vector and deflating it
    together with its partner halves the dimension.
    """
    work = np.asarray(v, dtype=complex)
    out: list[np.ndarray] = []
    while work.shape[1] > 0:
        w = work[:, 0]
        w = w / np.linalg.norm(w)
        partner = omega @ w.conj()
        resid = partner - work @ (work.conj().T @ partner)
        if np.linalg.norm(resid) > 1e-6:
            raise NumericalError("eigenspace is not closed under the quaternionic structure")
        partner = partner - w * (w.conj() @ partner)
        norm = np.linalg.norm(partner)
        if norm < 0.5:
            raise NumericalError("symplectic partner collapsed; eigenbasis extraction failed")
        partner = partner / norm
        out.append(w)
        rest = work[:, 1:]
        if rest.shape[1] == 0:
            break
        rest = rest - np.outer(w, w.conj() @ rest) - np.outer(partner, partner.conj() @ rest)
        u, s, _ = np.linalg.svd(rest, full_matrices=False)
        keep = s > 0.5
        if keep.sum() != work.shape[1] - 2:
            raise NumericalError("unexpected rank while deflating a real eigenspace")
        work = u[:, keep]
    return out


@dataclass(frozen=True)
class CalculusContext:
    """Immutable bundle (T, A, B, J, K, eigendecomposition, basis) consumed
    by every calculus; safe to share between threads."""

    t: QMatrix
    a: QMatrix
    b: QMatrix
    j: QMatrix
    k: QMatrix
    iota: SpherePoint
    kappa: SpherePoint
    lambdas: np.ndarray            # (n,) complex, Im >= 0
    kernel_flags: np.ndarray       # (n,) bool: eigenvector of Ker(T - T*)
    basis: LeftMultiplication      # simultaneous real-diagonalizing basis

    @property
    def n(self) -> int:
        return self.t.n

    def left(self, q: Quaternion) -> QMatrix:
        """The left scalar multiplication L_q of the context basis."""
        return self.basis.matrix(q)

    def spectrum(self, tol: float | None = None) -> SphericalSpectrum:
        scale = max(1.0, float(np.abs(self.lambdas).max(initial=0.0)))
        if tol is None:
            tol = _EIG_CLUSTER_TOL * scale
        pts = np.column_stack([self.lambdas.real, self.lambdas.imag])
        reps, counts = cluster_points(pts, tol)
        return SphericalSpectrum(reps, counts)

    def spectrum_set(self) -> CircularSet:
        return self.spectrum().circular_set()

    def to_json(self) -> dict:
        return {
            "A": self.a.to_json(),
            "B": self.b.to_json(),
            "J": self.j.to_json(),
            "K": self.k.to_json(),
            "eigs": [[float(l.real), float(l.imag)] for l in self.lambdas],
        }


def construct_J(t: QMatrix) -> QMatrix:
    """Anti-self-adjoint unitary J commuting with T and T*, satisfying
    T = A + JB.

    On Ker(T-T*)^perp, J is the (unique) polar factor of T - T*; on the
    kernel it acts as right multiplication by iota on an orthonormal
    eigenbasis of A, a deterministic completion (any valid completion yields
    the same calculi).
    """
    _, _, columns = _normal_eigensystem(t)
    return LeftMultiplication(columns).matrix(IOTA)


def build_context(t: QMatrix) -> CalculusContext:
    """Assemble the full decomposition bundle for a normal operator."""
    lambdas, kernel_flags, columns = _normal_eigensystem(t)
    try:
        basis = LeftMultiplication(columns)
    except PreconditionError as exc:
        raise NumericalError(f"eigenbasis is not orthonormal: {exc}") from exc
    j = basis.matrix(IOTA)
    k = basis.matrix(KAPPA)
    a = (t + t.adjoint()) * 0.5
    d = t - t.adjoint()
    b = polar_decompose(d)[1] * 0.5  # |T - T*| via SVD, no squaring
    ctx = CalculusContext(t=t, a=a, b=b, j=j, k=k, iota=IOTA, kappa=KAPPA,
                          lambdas=lambdas, kernel_flags=kernel_flags, basis=basis)
    scale = max(1.0, op_norm(t))
    if op_norm(t - (a + j @ b)) > 1e-10 * scale:
        raise NumericalError("decomposition residual too large; diagonalization failed")
    return ctx


def alternate_kernel_J(ctx: CalculusContext) -> QMatrix:
    """A different valid J: the sign of the iota-action is flipped on one
    eigenvector of Ker(T - T*). Everything the theory asserts to be
    J-choice-independent must be unchanged under this swap."""
    kernel = np.flatnonzero(ctx.kernel_flags)
    if kernel.size == 0:
        raise PreconditionError("T - T* has trivial kernel; J is unique")
    entries = [IOTA if m != kernel[0] else -IOTA for m in range(ctx.n)]
    z = ctx.basis.columns
    return z @ QMatrix.diag(entries) @ z.adjoint()


# -- polynomial route ---------------------------------------------------------


def _real_poly(terms, odd: bool) -> dict[tuple[int, int], float]:
    coefs: dict[tuple[int, int], float] = {}
    scale = 0.0
    for h, k, r in terms:
        if isinstance(r, Quaternion):
            if not r.is_real():
                raise PreconditionError("polynomial coefficients must be real")
            r = r.a
        key = (int(h), int(k))
        coefs[key] = coefs.get(key, 0.0) + float(r)
        scale = max(scale, abs(coefs[key]))
    out: dict[tuple[int, int], float] = {}
    for (h, k), r in coefs.items():
        if k % 2 == (1 if odd else 0):
            if r != 0.0:
                out[(h, k)] = r
        elif abs(r) > 1e-12 * max(1.0, scale):
            parity = "odd" if odd else "even"
            raise PreconditionError(
                f"monomial X^{h} Y^{k} violates the required {parity}-in-Y symmetry")
    return out


def _poly_of_operators(coefs: dict[tuple[int, int], float],
                       a: QMatrix, b: QMatrix) -> QMatrix:
    n = a.n
    out = QMatrix.zeros(n)
    if not coefs:
        return out
    max_h = max(h for h, _ in coefs)
    max_k = max(k for _, k in coefs)
    a_pow = [QMatrix.identity(n)]
    for _ in range(max_h):
        a_pow.append(a_pow[-1] @ a)
    b_pow = [QMatrix.identity(n)]
    for _ in range(max_k):
        b_pow.append(b_pow[-1] @ b)
    for (h, k), r in sorted(coefs.items()):
        out = out + (a_pow[h] @ b_pow[k]) * r
    return out


def polynomial_calculus(ctx: CalculusContext, q1_terms, q2_terms,
                        j: QMatrix | None = None) -> QMatrix:
    """g(T) = Q1(A, B) + J Q2(A, B) for real bivariate polynomials with Q1
    even and Q2 odd in Y.

    Computed by direct matrix products of A, B and J (no eigendecomposition),
    so it cross-checks the spectral route. The optional `j` substitutes an
    alternative valid J; the result does not depend on that choice.
    """
    q1 = _real_poly(q1_terms, odd=False)
    q2 = _real_poly(q2_terms, odd=True)
    jmat = ctx.j if j is None else j
    return _poly_of_operators(q1, ctx.a, ctx.b) + jmat @ _poly_of_operators(q2, ctx.a, ctx.b)


# -- eigenvalue route ----------------------------------------------------------


def _check_spectrum_in_domain(ctx: CalculusContext, f: SliceFunction,
                              tol: float = 1e-8) -> None:
    for lam in ctx.lambdas:
        if not f.stem.accepts(float(lam.real), float(lam.imag), tol):
            raise PreconditionError(
                f"spectrum point {lam:.6g} lies outside the function domain")


def intrinsic_calculus(ctx: CalculusContext, f: SliceFunction) -> QMatrix:
    """The isometric *-homomorphism on intrinsic slice functions.

    Realized on H+ as the complex functional calculus of the restriction:
    diag(F1(lambda_m) + iota F2(lambda_m)) in the eigenbasis, extended to the
    unique right-H-linear operator commuting with J.
    """
    if not is_intrinsic(f):
        raise PreconditionError("function is not an intrinsic slice function")
    _check_spectrum_in_domain(ctx, f)
    mu = np.empty(ctx.n, dtype=complex)
    for m, lam in enumerate(ctx.lambdas):
        f1, f2 = f.stem.eval(complex(lam))
        mu[m] = complex(f1.a, f2.a)
    return extend_complex_operator(np.diag(mu), ctx.basis, ctx.iota)


def cslice_calculus(ctx: CalculusContext, f: SliceFunction) -> QMatrix:
    """Calculus for C_iota-slice functions: f(T) = f0(T) + f1(T) J where
    f = f0 + f1*iota with intrinsic components."""
    if not is_cslice(f, ctx.iota):
        raise PreconditionError("function does not take values in the context slice")
    _check_spectrum_in_domain(ctx, f)
    f0, f1, _, _ = decompose_components(f, ctx.iota, ctx.kappa)
    return intrinsic_calculus(ctx, f0) + intrinsic_calculus(ctx, f1) @ ctx.j


def circular_calculus(ctx: CalculusContext, f: SliceFunction) -> QMatrix:
    """Calculus for circular slice functions (F2 = 0):
    f(T) = f0(T) + f1(T) J + f2(T) K + f3(T) JK, a *-homomorphism."""
    if not is_circular(f):
        raise PreconditionError("function is not a circular slice function")
    return general_calculus(ctx, f)


def general_calculus(ctx: CalculusContext, f: SliceFunction) -> QMatrix:
    """R-linear continuous extension to every continuous slice function:
    f(T) = f0(T) + f1(T) J + f2(T) K + f3(T) JK."""
    _check_spectrum_in_domain(ctx, f)
    f0, f1, f2, f3 = decompose_components(f, ctx.iota, ctx.kappa)
    jk = ctx.j @ ctx.k
    return (intrinsic_calculus(ctx, f0)
            + intrinsic_calculus(ctx, f1) @ ctx.j
            + intrinsic_calculus(ctx, f2) @ ctx.k
            + intrinsic_calculus(ctx, f3) @ jk)


def adjoint_similarity(ctx: CalculusContext) -> QMatrix:
    """Unitary U with U T U* = T*; U = L_kappa works since
    kappa iota conj(kappa) = -iota."""
    return ctx.k


def slice_regular_contour(ctx: CalculusContext, f: SliceFunction,
                          radius: float | None = None, nodes: int = 256) -> QMatrix:
    """Contour realization of the calculus over the circle of the given
    radius in C_iota, by the periodic trapezoid rule (spectrally accurate for
    polynomial f).

    The kernel at s is -Delta_s(T)^(-1) (T - L_conj(s)); each node
    contributes kernel composed with L_{w f(s)}, w the quadrature weight
    R e^{iota theta} / nodes. Matches the algebraic calculus within
    quadrature error for slice functions induced by holomorphic stems.
    """
    tnorm = op_norm(ctx.t)
    if radius is None:
        radius = 1.25 * tnorm + 1.0
    if radius <= tnorm:
        raise PreconditionError(
            f"radius {radius:.6g} does not enclose the spectrum (||T|| = {tnorm:.6g})")
    if nodes < 16:
        raise PreconditionError("at least 16 quadrature nodes are required")
    chi_t = chi_embed(ctx.t)
    chi_t2 = chi_t @ chi_t
    eye = np.eye(2 * ctx.n)
    chi_left = _ChiLeft(ctx)
    acc = np.zeros_like(chi_t)
    for m in range(nodes):
        theta = 2.0 * math.pi * m / nodes
        ct, st = math.cos(theta), math.sin(theta)
        s_quat = Quaternion(radius * ct) + ctx.iota * (radius * st)
        f_val = f.eval(s_quat)
        delta_c = chi_t2 - chi_t * (2.0 * s_quat.a) + eye * (radius * radius)
        rhs = chi_t - chi_left(s_quat.conjugate())
        try:
            psi = np.linalg.solve(delta_c, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"quadrature node {m} hit the spectrum: {exc}") from exc
        weight = Quaternion(radius / nodes * ct) + ctx.iota * (radius / nodes * st)
        acc -= psi @ chi_left(weight * f_val)
    return chi_extract(acc, tol=1e-8)


class _ChiLeft:
    """chi image of the context's left multiplication, L_c as a 2n x 2n
    complex matrix in O(n^2) per call.

    With [P Q] the column blocks of chi(basis columns) and c = z1 + z2 j,
    chi(L_c) = z1 P P^H + conj(z1) Q Q^H + z2 P Q^H - conj(z2) Q P^H.
    """

    def __init__(self, ctx: CalculusContext):
        zc = chi_embed(ctx.basis.columns)
        n = ctx.n
        p, q = zc[:, :n], zc[:, n:]
        self.pph = p @ p.conj().T
        self.qqh = q @ q.conj().T
        self.pqh = p @ q.conj().T
        self.qph = q @ p.conj().T

    def __call__(self, c: Quaternion) -> np.ndarray:
        z1 = complex(c.a, c.b)
        z2 = complex(c.c, c.d)
        return (z1 * self.pph + z1.conjugate() * self.qqh
                + z2 * self.pqh - z2.conjugate() * self.qph)


def spectral_measure_weights(t: QMatrix, u: QVector,
                             ) -> list[tuple[float, float]]:
    """Atomic spectral measure of a self-adjoint operator at the vector u:
    weights are squared norms of the projections of u onto the eigenvalue
    clusters, so they sum to ||u||^2 and ||f(T)u||^2 = sum f(lambda)^2 w."""
    if not is_self_adjoint(t):
        raise PreconditionError("operator is not self-adjoint")
    lambdas, _, columns = _normal_eigensystem(t)
    tol = _DEGENERACY_TOL * max(1.0, op_norm(t))
    clusters = _assign_clusters(
        np.column_stack([lambdas.real, np.zeros(t.n)]), tol)
    out = []
    for cluster in clusters:
        lam = float(np.mean([lambdas[m].real for m in cluster]))
        weight = 0.0
        for m in cluster:
            weight += columns.column(m).inner(u).norm() ** 2
        out.append((lam, weight))
    out.sort(key=lambda p: p[0])
    return out
