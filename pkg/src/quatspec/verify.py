"""Property-verification suites: every structural identity of the algebra,
the spectrum and the calculi, checked at pinned tolerances on random inputs.

Checks are aggregated by name across matrices/trials, keeping the worst
residual, so the resulting `VerificationReport` has one row per identity.
"""

from __future__ import annotations

import numpy as np

from .calculus import (alternate_kernel_J, build_context, circular_calculus,
                       cslice_calculus, general_calculus, intrinsic_calculus,
                       polynomial_calculus, slice_regular_contour,
                       spectral_measure_weights)
from .qmatrix import (QMatrix, chi_embed, is_normal, is_self_adjoint, op_norm,
                      random_normal, random_qvector)
from .quaternion import (ComplexifiedQuaternion, Quaternion, SpherePoint,
                         fold, random_sphere_point, sphere_grid)
from .reporting import VerificationReport
from .slicefn import (CircularSet, SliceFunction, decompose_components,
                      hausdorff, is_circular, is_cslice, is_intrinsic,
                      one_sided_hausdorff, slice_product, sup_norm)
from .spectral import (delta_q, gelfand_check, resolvent_series,
                       spherical_spectrum, verify_spectral_classes)


def _random_quaternion(rng, scale=2.0) -> Quaternion:
    return Quaternion(*(rng.normal(size=4) * scale))


def _random_hc(rng) -> ComplexifiedQuaternion:
    return ComplexifiedQuaternion(_random_quaternion(rng), _random_quaternion(rng))


# ---------------------------------------------------------------------------
# algebra suite: H, H(x)C and the slice-function C*-algebras
# ---------------------------------------------------------------------------


def verify_algebra(report: VerificationReport, rng: np.random.Generator,
                   pairs: int = 10000, sphere_samples: int = 10000) -> None:
    p = rng.normal(size=(pairs, 4)) * 2.0
    q = rng.normal(size=(pairs, 4)) * 2.0
    # vectorized |pq| = |p||q|
    a1, b1, c1, d1 = p.T
    a2, b2, c2, d2 = q.T
    prod = np.stack([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], axis=1)
    lhs = np.linalg.norm(prod, axis=1)
    rhs = np.linalg.norm(p, axis=1) * np.linalg.norm(q, axis=1)
    report.worst("quat-norm-multiplicative", "|pq| = |p||q|",
                 float(np.max(np.abs(lhs - rhs) / np.maximum(rhs, 1e-30))), 1e-13)

    for _ in range(200):
        x, y = _random_quaternion(rng), _random_quaternion(rng)
        resid = ((x * y).conjugate() - y.conjugate() * x.conjugate()).norm()
        report.worst("quat-conj-antihom", "conj(pq) = conj(q) conj(p)",
                     resid / max(1.0, x.norm() * y.norm()), 1e-13)

    grid = sphere_grid(sphere_samples)
    for _ in range(2000):
        w, y = _random_hc(rng), _random_hc(rng)
        nw, ny = w.norm(), y.norm()
        report.worst("hc-cstar-identity", "||w* w|| = ||w||^2",
                     abs((w.star() * w).norm() - nw ** 2) / max(1.0, nw ** 2), 1e-12)
        report.worst("hc-submultiplicative", "||w y|| <= ||w|| ||y||",
                     max(0.0, (w * y).norm() - nw * ny) / max(1.0, nw * ny), 1e-10)
        report.worst("hc-star-antihom", "(w y)* = y* w*",
                     _hc_dist((w * y).star(), y.star() * w.star())
                     / max(1.0, nw * ny), 1e-13)
        low = np.hypot(w.q.norm(), w.p.norm())
        high = w.q.norm() + w.p.norm()
        report.worst("hc-norm-sandwich",
                     "sqrt(|q|^2+|p|^2) <= ||w|| <= |q| + |p|",
                     max(0.0, low - nw, nw - high) / max(1.0, nw), 1e-12)

    for _ in range(20):
        w = _random_hc(rng)
        sampled = _sampled_sup(w, grid)
        nw = w.norm()
        report.worst("hc-sup-dominates", "||w|| >= |q + iota p| on S",
                     max(0.0, sampled - nw) / max(1.0, nw), 1e-12)
        report.worst("hc-sup-sharp", "||w|| = sup over S of |q + iota p|",
                     (nw - sampled) / max(1e-30, nw), 1e-3)

    _verify_slice_algebra(report, rng)


def _hc_dist(a: ComplexifiedQuaternion, b: ComplexifiedQuaternion) -> float:
    return (a - b).norm()


def _sampled_sup(w: ComplexifiedQuaternion, grid: np.ndarray) -> float:
    q = np.array(w.q.components())
    p = np.array(w.p.components())
    # |q + iota p| for iota = (0, g): compute componentwise product iota*p
    g = grid
    iota_p = np.empty((g.shape[0], 4))
    iota_p[:, 0] = -(g[:, 0] * p[1] + g[:, 1] * p[2] + g[:, 2] * p[3])
    iota_p[:, 1] = g[:, 0] * p[0] + g[:, 1] * p[3] - g[:, 2] * p[2]
    iota_p[:, 2] = -g[:, 0] * p[3] + g[:, 1] * p[0] + g[:, 2] * p[1]
    iota_p[:, 3] = g[:, 0] * p[2] - g[:, 1] * p[1] + g[:, 2] * p[0]
    return float(np.linalg.norm(q[None, :] + iota_p, axis=1).max())


def _random_poly_slice(rng, quaternionic=True, max_deg=2) -> SliceFunction:
    terms1, terms2 = [], []
    for h in range(max_deg + 1):
        for k in range(0, max_deg + 1 - h, 2):
            coef = _random_quaternion(rng, 0.7) if quaternionic else Quaternion(rng.normal())
            terms1.append((h, k, coef))
        for k in range(1, max_deg + 1 - h, 2):
            coef = _random_quaternion(rng, 0.7) if quaternionic else Quaternion(rng.normal())
            terms2.append((h, k, coef))
    return SliceFunction.polynomial(terms1, terms2)


def _random_cslice_poly(rng, iota: SpherePoint, max_deg=2) -> SliceFunction:
    intr1 = _random_poly_slice(rng, quaternionic=False, max_deg=max_deg)
    intr2 = _random_poly_slice(rng, quaternionic=False, max_deg=max_deg)
    return intr1 + slice_product(intr2, SliceFunction.constant(iota))


def _random_circular_poly(rng, max_deg=2) -> SliceFunction:
    terms1 = []
    for h in range(max_deg + 1):
        for k in range(0, max_deg + 1 - h, 2):
            terms1.append((h, k, _random_quaternion(rng, 0.7)))
    return SliceFunction.polynomial(terms1, [])


def _verify_slice_algebra(report: VerificationReport, rng: np.random.Generator) -> None:
    sample_qs = [_random_quaternion(rng) for _ in range(12)]

    for _ in range(25):
        f = _random_poly_slice(rng)
        g = _random_poly_slice(rng)
        h = _random_poly_slice(rng)
        fg_h = slice_product(slice_product(f, g), h)
        f_gh = slice_product(f, slice_product(g, h))
        resid = max((fg_h.eval(q) - f_gh.eval(q)).norm() for q in sample_qs)
        scale = max(1.0, max(f.eval(q).norm() * g.eval(q).norm() * h.eval(q).norm()
                             for q in sample_qs))
        report.worst("slice-product-assoc", "(f g) h = f (g h)", resid / scale, 1e-9)

        resid = max((slice_product(f, g).star().eval(q)
                     - slice_product(g.star(), f.star()).eval(q)).norm()
                    for q in sample_qs)
        report.worst("slice-star-antihom", "(f g)* = g* f*", resid / scale, 1e-10)

    # representation formula
    f = _random_poly_slice(rng)
    worst = 0.0
    for _ in range(50):
        alpha, beta = rng.normal(), abs(rng.normal()) + 0.05
        iota, iotap = random_sphere_point(rng), random_sphere_point(rng)
        qv = Quaternion(alpha) + iota * beta
        lhs = f.eval(Quaternion(alpha) + iotap * beta)
        rhs = (f.eval(qv) + f.eval(qv.conjugate())) * 0.5 \
            - iotap * (iota * ((f.eval(qv) - f.eval(qv.conjugate())) * 0.5))
        worst = max(worst, (lhs - rhs).norm() / max(1.0, lhs.norm()))
    report.worst("slice-representation",
                 "f on a sphere is determined by two slice values", worst, 1e-10)

    # commutativity on a common slice
    iota = random_sphere_point(rng)
    for _ in range(10):
        f = _random_cslice_poly(rng, iota)
        g = _random_cslice_poly(rng, iota)
        resid = max((slice_product(f, g).eval(q) - slice_product(g, f).eval(q)).norm()
                    for q in sample_qs)
        report.worst("slice-cslice-commute", "f g = g f for a common slice",
                     resid / max(1.0, max(f.eval(q).norm() * g.eval(q).norm()
                                          for q in sample_qs)), 1e-9)

    # closure of the classes under the product
    ok = 1.0
    fi, gi = _random_poly_slice(rng, quaternionic=False), _random_poly_slice(rng, quaternionic=False)
    if not is_intrinsic(slice_product(fi, gi)):
        ok = 0.0
    fc, gc = _random_circular_poly(rng), _random_circular_poly(rng)
    if not is_circular(slice_product(fc, gc)):
        ok = 0.0
    fs, gs = _random_cslice_poly(rng, iota), _random_cslice_poly(rng, iota)
    if not is_cslice(slice_product(fs, gs), iota):
        ok = 0.0
    report.worst("slice-class-closure",
                 "products stay intrinsic / circular / slice-valued", 1.0 - ok, 0.0)

    # C*-norm identities over a finite circular set
    points = CircularSet(np.column_stack([rng.uniform(-2, 2, 6), rng.uniform(0, 2, 6)]))
    for _ in range(10):
        f, g = _random_poly_slice(rng), _random_poly_slice(rng)
        nf, ng = sup_norm(f, points), sup_norm(g, points)
        nfg = sup_norm(slice_product(f, g), points)
        report.worst("slice-norm-submult", "||f g|| <= ||f|| ||g||",
                     max(0.0, nfg - nf * ng) / max(1.0, nf * ng), 1e-10)
        nstar = sup_norm(slice_product(f.star(), f), points)
        report.worst("slice-norm-cstar", "||f* f|| = ||f||^2",
                     abs(nstar - nf ** 2) / max(1.0, nf ** 2), 1e-10)


# ---------------------------------------------------------------------------
# spectral suite
# ---------------------------------------------------------------------------


def verify_spectral(report: VerificationReport, t: QMatrix,
                    rng: np.random.Generator,
                    truth_reps: np.ndarray | None = None) -> None:
    scale = max(1.0, op_norm(t))
    spec = spherical_spectrum(t)
    if truth_reps is not None:
        report.worst("spectrum-ground-truth",
                     "computed representatives match the generator",
                     hausdorff(spec.reps, truth_reps), 1e-8 * scale)

    classes = verify_spectral_classes(t)
    for check in classes.checks:
        report.worst(check.name, check.identity, check.residual, check.tolerance,
                     check.soft)

    normal = is_normal(t)
    if normal:
        seq = gelfand_check(t, 5)
        tnorm = op_norm(t)
        report.worst("gelfand-constant",
                     "||T^(2^k)||^(1/2^k) is constant for normal T",
                     float(np.max(np.abs(seq - tnorm))) / max(1.0, tnorm), 1e-8)

        # power spectral map
        for n_pow in (2, 3):
            power_spec = spherical_spectrum(t.power(n_pow))
            mapped = np.array([fold((Quaternion(a) + Quaternion(0, 1, 0, 0) * b) ** n_pow)
                               for a, b in spec.reps])
            report.worst(f"spectral-map-power-{n_pow}",
                         "sigma_S(T^n) = sigma_S(T)^n",
                         hausdorff(power_spec.reps, mapped),
                         1e-7 * max(1.0, op_norm(t)) ** n_pow)

    # resolvent series against the direct inverse
    qv = random_sphere_point(rng) * rng.normal() + Quaternion(rng.normal())
    qv = qv * (2.0 * max(op_norm(t), 0.5) / qv.norm())
    res = resolvent_series(t, qv, 1e-10)
    eye = QMatrix.identity(t.n)
    report.worst("resolvent-series", "series sums to the inverse of Delta_q(T)",
                 max((delta_q(t, qv) @ res - eye).norm(),
                     (res @ delta_q(t, qv) - eye).norm()), 1e-8)

    # eigensphere membership: Delta at a representative is singular
    worst = 0.0
    for a, b in spec.reps:
        dq = delta_q(t, Quaternion(a, b, 0.0, 0.0))
        smin = float(np.linalg.svd(chi_embed(dq), compute_uv=False).min())
        worst = max(worst, smin / max(1.0, op_norm(dq)))
    report.worst("eigensphere-membership",
                 "Delta_q(T) is singular at spectrum points", worst, 1e-8)

    if is_self_adjoint(t):
        # real-polynomial spectral map, degree <= 5
        coefs = rng.normal(size=rng.integers(2, 6))
        pt = QMatrix.zeros(t.n)
        for h, r in enumerate(coefs):
            pt = pt + t.power(h) * float(r)
        p_spec = spherical_spectrum(pt)
        mapped = np.array([[np.polyval(coefs[::-1], a), 0.0] for a, _ in spec.reps])
        report.worst("spectral-map-polynomial",
                     "sigma_S(P(T)) = P(sigma_S(T)) for real P, T = T*",
                     hausdorff(p_spec.reps, mapped),
                     1e-7 * (1.0 + op_norm(t)) ** max(1, len(coefs) - 1))

        # a polynomial vanishing on the spectrum annihilates T
        prod = QMatrix.identity(t.n)
        scale_prod = 1.0
        for a, _ in spec.reps:
            prod = prod @ (t - QMatrix.identity(t.n) * float(a))
            scale_prod *= (op_norm(t) + abs(a) + 1.0)
        report.worst("vanishing-polynomial",
                     "P = 0 on sigma_S(T) implies P(T) = 0",
                     op_norm(prod) / scale_prod, 1e-7)


# ---------------------------------------------------------------------------
# calculus suite
# ---------------------------------------------------------------------------


def verify_calculus(report: VerificationReport, t: QMatrix,
                    rng: np.random.Generator) -> None:
    ctx = build_context(t)
    scale = max(1.0, op_norm(t))
    eye = QMatrix.identity(t.n)

    report.worst("decomposition", "T = A + JB",
                 op_norm(ctx.t - (ctx.a + ctx.j @ ctx.b)), 1e-10 * scale)
    report.worst("J-unit", "J* = -J, J*J = I",
                 max((ctx.j + ctx.j.adjoint()).norm(),
                     (ctx.j.adjoint() @ ctx.j - eye).norm()), 1e-9)
    report.worst("K-unit", "K* = -K, K*K = I",
                 max((ctx.k + ctx.k.adjoint()).norm(),
                     (ctx.k.adjoint() @ ctx.k - eye).norm()), 1e-9)
    report.worst("JK-anticommute", "JK = -KJ",
                 (ctx.j @ ctx.k + ctx.k @ ctx.j).norm(), 1e-9 * scale)
    report.worst("J-commutes-T", "JT = TJ",
                 (ctx.j @ ctx.t - ctx.t @ ctx.j).norm(), 1e-9 * scale)
    report.worst("K-commutes-A", "KA = AK",
                 (ctx.k @ ctx.a - ctx.a @ ctx.k).norm(), 1e-9 * scale)
    report.worst("K-commutes-B", "KB = BK",
                 (ctx.k @ ctx.b - ctx.b @ ctx.k).norm(), 1e-9 * scale)
    report.worst("upper-eigenvalues", "restricted spectrum in the closed upper half-plane",
                 max(0.0, -float(ctx.lambdas.imag.min(initial=0.0))), 1e-10)

    spec_set = ctx.spectrum_set()
    sq_scale = max(1.0, op_norm(t)) ** 2

    # polynomial cross-check: two routes to T^2
    f_sq = SliceFunction.builtin("square")
    t_sq = t @ t
    report.worst("square-intrinsic", "intrinsic route reproduces T^2",
                 (intrinsic_calculus(ctx, f_sq) - t_sq).norm(), 1e-9 * sq_scale)
    report.worst("square-polynomial", "polynomial route reproduces T^2",
                 (polynomial_calculus(ctx, [(2, 0, 1.0), (0, 2, -1.0)], [(1, 1, 2.0)])
                  - t_sq).norm(), 1e-9 * sq_scale)
    report.worst("identity-recovered", "g = id recovers A + JB",
                 (polynomial_calculus(ctx, [(1, 0, 1.0)], [(0, 1, 1.0)]) - t).norm(),
                 1e-9 * scale)
    report.worst("unity-recovered", "constant 1 maps to the identity",
                 (intrinsic_calculus(ctx, SliceFunction.builtin("one")) - eye).norm(),
                 1e-12)
    report.worst("id-recovered", "id maps to T",
                 (intrinsic_calculus(ctx, SliceFunction.builtin("id")) - t).norm(),
                 1e-10 * scale)

    # intrinsic calculus: isometry, spectral map, homomorphism, star
    for name in ("id", "square", "exp"):
        f = SliceFunction.builtin(name)
        ft = intrinsic_calculus(ctx, f)
        nf = sup_norm(f, spec_set)
        report.worst("intrinsic-isometry", "||f(T)|| = sup |f| on sigma_S(T)",
                     abs(op_norm(ft) - nf) / max(1.0, nf), 1e-8)
        mapped = np.array([fold(f.eval(Quaternion(a) + Quaternion(0, 1, 0, 0) * b))
                           for a, b in spec_set.reps])
        report.worst("intrinsic-spectral-map", "sigma_S(f(T)) = f(sigma_S(T))",
                     hausdorff(spherical_spectrum(ft).reps, mapped),
                     1e-7 * max(1.0, nf))

    fi, gi = _random_poly_slice(rng, quaternionic=False), _random_poly_slice(rng, quaternionic=False)
    fti, gti = intrinsic_calculus(ctx, fi), intrinsic_calculus(ctx, gi)
    hom_scale = max(1.0, op_norm(fti) * op_norm(gti))
    report.worst("intrinsic-homomorphism", "(f g)(T) = f(T) g(T)",
                 (intrinsic_calculus(ctx, slice_product(fi, gi)) - fti @ gti).norm(),
                 1e-8 * hom_scale)
    report.worst("intrinsic-star", "f*(T) = f(T)*",
                 (intrinsic_calculus(ctx, fi.star()) - fti.adjoint()).norm(),
                 1e-8 * max(1.0, op_norm(fti)))
    report.worst("K-transport", "f(T) K = K f*(T)",
                 (fti @ ctx.k - ctx.k @ intrinsic_calculus(ctx, fi.star())).norm(),
                 1e-8 * max(1.0, op_norm(fti)))

    # restriction to H+: matrix elements in the eigenbasis are the stem values
    worst = 0.0
    for m in range(ctx.n):
        f1, f2 = fi.stem.eval(complex(ctx.lambdas[m]))
        mu = Quaternion(f1.a) + ctx.iota * f2.a
        um = ctx.basis.vector(m)
        worst = max(worst, (um.inner(fti @ um) - mu).norm())
    report.worst("restriction-identity",
                 "f(T) acts on H+ by the complex functional calculus",
                 worst, 1e-9 * max(1.0, op_norm(fti)))

    # C_iota-slice calculus
    report.worst("cslice-constant-J", "constant iota maps to J",
                 (cslice_calculus(ctx, SliceFunction.constant(ctx.iota)) - ctx.j).norm(),
                 1e-12)
    report.worst("cslice-extends-intrinsic", "slice calculus extends the intrinsic one",
                 (cslice_calculus(ctx, fi) - fti).norm(), 1e-10 * max(1.0, op_norm(fti)))
    f_lin = SliceFunction.builtin("id") + SliceFunction.constant(ctx.iota)
    report.worst("cslice-linearity", "(id + c_iota)(T) = T + J",
                 (cslice_calculus(ctx, f_lin) - (t + ctx.j)).norm(), 1e-10 * scale)

    fcs = _random_cslice_poly(rng, ctx.iota)
    fcs_t = cslice_calculus(ctx, fcs)
    upper = ctx.spectrum().reps
    nf_plus = max(fcs.eval(Quaternion(a) + ctx.iota * b).norm() for a, b in upper)
    report.worst("cslice-norm", "||f(T)|| = sup |f| on the upper slice spectrum",
                 abs(op_norm(fcs_t) - nf_plus) / max(1.0, nf_plus), 1e-8)
    mapped = np.array([fold(fcs.eval(Quaternion(a) + ctx.iota * b)) for a, b in upper])
    report.worst("cslice-spectral-map",
                 "sigma_S(f(T)) is the circularization of f on the upper slice",
                 hausdorff(spherical_spectrum(fcs_t).reps, mapped),
                 1e-7 * max(1.0, nf_plus))

    if float(upper[:, 1].max(initial=0.0)) > 0.1:
        fk = _upper_vanishing_function(ctx.iota)
        report.worst("cslice-kernel",
                     "functions vanishing on the upper slice spectrum map to 0",
                     op_norm(cslice_calculus(ctx, fk)), 1e-8 * scale)

    # circular calculus
    report.worst("circular-constant-K", "constant kappa maps to K",
                 (circular_calculus(ctx, SliceFunction.constant(ctx.kappa)) - ctx.k).norm(),
                 1e-12)
    qv = _random_quaternion(rng)
    report.worst("circular-constant-L", "constant q maps to L_q",
                 (circular_calculus(ctx, SliceFunction.constant(qv)) - ctx.left(qv)).norm(),
                 1e-10 * max(1.0, qv.norm()))
    fc, gc = _random_circular_poly(rng), _random_circular_poly(rng)
    fct, gct = circular_calculus(ctx, fc), circular_calculus(ctx, gc)
    report.worst("circular-homomorphism", "(f g)(T) = f(T) g(T) for circular f, g",
                 (circular_calculus(ctx, slice_product(fc, gc)) - fct @ gct).norm(),
                 1e-8 * max(1.0, op_norm(fct) * op_norm(gct)))
    report.worst("circular-star", "f*(T) = f(T)* for circular f",
                 (circular_calculus(ctx, fc.star()) - fct.adjoint()).norm(),
                 1e-8 * max(1.0, op_norm(fct)))
    mapped = np.array([fold(fc.eval(Quaternion(a) + ctx.iota * b)) for a, b in upper])
    report.worst("circular-spectral-containment",
                 "sigma_S(f(T)) inside the circularized image",
                 one_sided_hausdorff(spherical_spectrum(fct).reps, mapped),
                 1e-7 * max(1.0, op_norm(fct)))
    nfc = sup_norm(fc, spec_set)
    report.worst("circular-norm-bound", "||f(T)|| <= sup |f| for circular f",
                 max(0.0, op_norm(fct) - nfc) / max(1.0, nfc), 1e-8)
    report.worst("circular-isometry", "||f(T)|| = sup |f| for circular f",
                 abs(op_norm(fct) - nfc) / max(1.0, nfc), 1e-8, soft=True)

    # general calculus
    fg = _random_poly_slice(rng)
    fgt = general_calculus(ctx, fg)
    report.worst("general-right-scalar", "(f q)(T) = f(T) q",
                 (general_calculus(ctx, slice_product(fg, SliceFunction.constant(qv)))
                  - fgt @ ctx.left(qv)).norm(),
                 1e-9 * max(1.0, op_norm(fgt) * qv.norm()))
    f0, f1, f2, f3 = decompose_components(fg, ctx.iota, ctx.kappa)
    twisted = f0 + slice_product(f1, SliceFunction.constant(ctx.iota)) \
        + slice_product(f2.star(), SliceFunction.constant(ctx.kappa)) \
        + slice_product(f3.star(), SliceFunction.constant(ctx.iota * ctx.kappa))
    report.worst("general-adjoint-rule", "f(T)* equals the twisted star image",
                 (fgt.adjoint() - general_calculus(ctx, twisted.star())).norm(),
                 1e-9 * max(1.0, op_norm(fgt)))

    # contour realization
    cubic = SliceFunction.polynomial(
        [(3, 0, 1.0), (1, 2, -3.0), (1, 0, 0.5), (0, 0, -1.0)],
        [(2, 1, 3.0), (0, 3, -1.0), (0, 1, 0.5)])  # z^3 + 0.5 z - 1
    for name, f in (("one", SliceFunction.builtin("one")),
                    ("id", SliceFunction.builtin("id")),
                    ("square", SliceFunction.builtin("square")),
                    ("cubic", cubic)):
        alg = general_calculus(ctx, f)
        con = slice_regular_contour(ctx, f, nodes=256)
        report.worst(f"contour-{name}", "contour integral matches the calculus",
                     (con - alg).norm(), 1e-7 * max(1.0, op_norm(alg)))

    # adjoint similarity
    u = ctx.k
    report.worst("adjoint-similarity", "L_kappa T L_kappa* = T*",
                 (u @ t @ u.adjoint() - t.adjoint()).norm(), 1e-9 * scale)

    # spectral measure of the self-adjoint part
    vec = random_qvector(t.n, rng)
    weights = spectral_measure_weights(ctx.a, vec)
    report.worst("measure-total", "weights sum to ||u||^2",
                 abs(sum(w for _, w in weights) - vec.norm() ** 2)
                 / max(1.0, vec.norm() ** 2), 1e-9)
    ctx_a = build_context(ctx.a)
    fa_u = intrinsic_calculus(ctx_a, SliceFunction.builtin("square")) @ vec
    expect = sum(l ** 4 * w for l, w in weights)
    report.worst("measure-moment", "||f(T)u||^2 = sum f(lambda)^2 w",
                 abs(fa_u.norm() ** 2 - expect) / max(1.0, expect), 1e-9)

    # choice independence of the polynomial calculus
    if ctx.kernel_flags.any():
        alt = alternate_kernel_J(ctx)
        q1, q2 = [(2, 0, 1.0), (0, 2, -1.0), (1, 0, 0.3)], [(1, 1, 2.0), (0, 1, -0.4)]
        report.worst("kernel-choice-independence",
                     "polynomial calculus is independent of the J completion",
                     (polynomial_calculus(ctx, q1, q2)
                      - polynomial_calculus(ctx, q1, q2, j=alt)).norm(), 1e-9)


def _upper_vanishing_function(iota: SpherePoint) -> SliceFunction:
    """A nonzero C_iota-slice function with F1 + iota F2 = 0 above the real
    axis (so it vanishes on the upper slice spectrum but not below)."""

    def stem(z: complex):
        return -iota * abs(z.imag), Quaternion(z.imag)

    return SliceFunction.tabulated(stem, validate=False)


# ---------------------------------------------------------------------------
# entry point used by the CLI
# ---------------------------------------------------------------------------

_KINDS = ("normal", "selfadjoint", "antiselfadjoint", "unitary", "imaginaryunit")


def run_verification(matrices: list[tuple[QMatrix, np.ndarray | None]] | None = None,
                     random_spec: tuple[int, int, int] | None = None,
                     suite: str = "all") -> VerificationReport:
    """Run the requested suites and aggregate one row per identity.

    `matrices` supplies explicit operators (with optional ground-truth
    representatives); `random_spec = (n, count, seed)` generates `count`
    random operators of size n, cycling through the operator classes.
    """
    if suite not in ("all", "algebra", "spectral", "calculus"):
        raise ValueError(f"unknown suite {suite!r}")
    report = VerificationReport()
    seed = random_spec[2] if random_spec is not None else 0
    rng = np.random.default_rng(seed)

    pool: list[tuple[QMatrix, np.ndarray | None]] = list(matrices or [])
    if random_spec is not None:
        n, count, _ = random_spec
        for m in range(count):
            kind = _KINDS[m % len(_KINDS)]
            t, reps = random_normal(n, rng, kind=kind)
            pool.append((t, reps))
    report.meta["matrices"] = len(pool)
    report.meta["suite"] = suite

    if suite in ("all", "algebra"):
        verify_algebra(report, rng)
    if suite in ("all", "spectral"):
        for t, reps in pool:
            verify_spectral(report, t, rng, reps)
    if suite in ("all", "calculus"):
        for t, _ in pool:
            if is_normal(t):
                verify_calculus(report, t, rng)
            else:
                report.notes.append("calculus suite skipped for a non-normal input")
    return report
