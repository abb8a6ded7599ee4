"""Tests for the decomposition T = A + JB and the five functional calculi."""

import numpy as np
import pytest

from quatspec.calculus import (adjoint_similarity,
                               alternate_kernel_J, build_context,
                               circular_calculus, construct_J, cslice_calculus,
                               general_calculus, intrinsic_calculus,
                               polynomial_calculus, slice_regular_contour,
                               spectral_measure_weights)
from quatspec.errors import PreconditionError
from quatspec.qmatrix import (QMatrix, QVector, chi_embed,
                              is_anti_self_adjoint, is_normal, is_self_adjoint,
                              is_unitary, op_norm, polar_decompose,
                              random_normal, random_qmatrix, random_qvector,
                              random_unitary)
from quatspec.quaternion import I, J, Quaternion, fold
from quatspec.slicefn import (SliceFunction, decompose_components, hausdorff,
                              one_sided_hausdorff, slice_product, sup_norm)
from quatspec.spectral import spherical_spectrum

RNG = np.random.default_rng(2024)

SQUARE_Q1 = [(2, 0, 1.0), (0, 2, -1.0)]
SQUARE_Q2 = [(1, 1, 2.0)]


def random_intrinsic() -> SliceFunction:
    r = lambda: Quaternion(RNG.normal())
    return SliceFunction.polynomial(
        [(0, 0, r()), (1, 0, r()), (2, 0, r()), (0, 2, r())],
        [(0, 1, r()), (1, 1, r())])


def random_general() -> SliceFunction:
    r = lambda: Quaternion(*(RNG.normal(size=4) * 0.7))
    return SliceFunction.polynomial(
        [(0, 0, r()), (1, 0, r()), (0, 2, r())],
        [(0, 1, r()), (1, 1, r())])


def random_circular() -> SliceFunction:
    r = lambda: Quaternion(*(RNG.normal(size=4) * 0.7))
    return SliceFunction.polynomial([(0, 0, r()), (1, 0, r()), (0, 2, r())], [])


def random_cslice(iota) -> SliceFunction:
    return random_intrinsic() + slice_product(random_intrinsic(),
                                              SliceFunction.constant(iota))


# -- construct_J -----------------------------------------------------------------

def test_construct_J_diag_example():
    # T = diag(2i): T - T* = diag(4i) has polar factor diag(i)
    j = construct_J(QMatrix.diag([I * 2.0]))
    assert (j - QMatrix.diag([I])).norm() <= 1e-13


def test_construct_J_properties():
    for kind in ("normal", "selfadjoint", "antiselfadjoint"):
        t, _ = random_normal(5, RNG, kind=kind)
        j = construct_J(t)
        scale = max(1.0, op_norm(t))
        assert is_anti_self_adjoint(j) and is_unitary(j)
        assert (j @ t - t @ j).norm() <= 1e-10 * scale
        assert (j @ t.adjoint() - t.adjoint() @ j).norm() <= 1e-10 * scale
        # polar-factor identity pins J on Ker(T - T*)^perp: J |T-T*| = T - T*
        d = t - t.adjoint()
        absd = polar_decompose(d)[1]
        assert (j @ absd - d).norm() <= 1e-9 * scale


def test_construct_J_squares_to_minus_identity():
    t, _ = random_normal(4, RNG, kind="selfadjoint")
    j = construct_J(t)
    assert (j @ j + QMatrix.identity(4)).norm() <= 1e-11


def test_construct_J_rejects_non_normal():
    with pytest.raises(PreconditionError):
        construct_J(random_qmatrix(3, RNG))


# -- context ---------------------------------------------------------------------

def test_build_context_invariants():
    for kind in ("normal", "selfadjoint", "antiselfadjoint", "unitary"):
        t, _ = random_normal(6, RNG, kind=kind)
        ctx = build_context(t)
        scale = max(1.0, op_norm(t))
        eye = QMatrix.identity(6)
        assert op_norm(ctx.t - (ctx.a + ctx.j @ ctx.b)) <= 1e-10 * scale
        assert is_self_adjoint(ctx.a)
        assert is_self_adjoint(ctx.b)
        assert np.linalg.eigvalsh(chi_embed(ctx.b)).min() >= -1e-10 * scale
        for u in (ctx.j, ctx.k):
            assert (u + u.adjoint()).norm() <= 1e-10
            assert (u.adjoint() @ u - eye).norm() <= 1e-10
        assert (ctx.j @ ctx.k + ctx.k @ ctx.j).norm() <= 1e-9 * scale
        assert (ctx.j @ ctx.t - ctx.t @ ctx.j).norm() <= 1e-9 * scale
        assert (ctx.k @ ctx.a - ctx.a @ ctx.k).norm() <= 1e-9 * scale
        assert (ctx.k @ ctx.b - ctx.b @ ctx.k).norm() <= 1e-9 * scale
        assert ctx.lambdas.imag.min() >= -1e-10


def test_context_1x1_example():
    # T = diag(1 + 2i): A = diag(1), B = diag(2), J = diag(i), lambda = 1 + 2i
    t = QMatrix.diag([Quaternion(1) + I * 2.0])
    ctx = build_context(t)
    assert (ctx.a - QMatrix.diag([Quaternion(1)])).norm() <= 1e-13
    assert (ctx.b - QMatrix.diag([Quaternion(2)])).norm() <= 1e-13
    assert (ctx.j - QMatrix.diag([I])).norm() <= 1e-13
    assert abs(ctx.lambdas[0] - (1 + 2j)) <= 1e-13


def test_context_real_diag_is_degenerate_case():
    t = QMatrix.diag([Quaternion(a) for a in (0.5, -1.0, 2.0)])
    ctx = build_context(t)
    assert (ctx.a - t).norm() <= 1e-13
    assert ctx.b.norm() <= 1e-13
    assert ctx.kernel_flags.all()
    assert (ctx.j @ ctx.k + ctx.k @ ctx.j).norm() <= 1e-12


def test_context_spectrum_agrees_with_spectral_module():
    t, _ = random_normal(6, RNG)
    ctx = build_context(t)
    spec = spherical_spectrum(t)
    assert hausdorff(ctx.spectrum().reps, spec.reps) <= 1e-9
    assert sorted(ctx.spectrum().mult) == sorted(spec.mult)


def test_build_context_rejects_non_normal():
    with pytest.raises(PreconditionError):
        build_context(random_qmatrix(4, RNG))


def test_context_left_multiplication_commutes_with_parts():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    for _ in range(3):
        q = Quaternion(*RNG.normal(size=4))
        lq = ctx.left(q)
        assert (lq @ ctx.a - ctx.a @ lq).norm() <= 1e-10 * max(1.0, q.norm())
        assert (lq @ ctx.b - ctx.b @ lq).norm() <= 1e-10 * max(1.0, q.norm())


# -- polynomial calculus ------------------------------------------------------------

def test_polynomial_calculus_examples():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    scale = max(1.0, op_norm(t))
    assert (polynomial_calculus(ctx, [(1, 0, 1.0)], [(0, 1, 1.0)]) - t).norm() <= \
        1e-10 * scale
    assert (polynomial_calculus(ctx, [(0, 0, 1.0)], []) -
            QMatrix.identity(5)).norm() <= 1e-13
    assert (polynomial_calculus(ctx, SQUARE_Q1, SQUARE_Q2) - t @ t).norm() <= \
        1e-9 * scale ** 2


def test_polynomial_calculus_result_is_normal_and_commutes_with_J():
    t, _ = random_normal(4, RNG)
    ctx = build_context(t)
    g = polynomial_calculus(ctx, [(2, 0, 0.5), (0, 2, 1.0), (0, 0, -1.0)],
                            [(1, 1, -2.0), (0, 1, 0.3)])
    assert is_normal(g, 1e-9)
    assert (g @ ctx.j - ctx.j @ g).norm() <= 1e-9 * max(1.0, op_norm(g))


def test_polynomial_calculus_rejects_wrong_parity():
    t, _ = random_normal(3, RNG)
    ctx = build_context(t)
    with pytest.raises(PreconditionError):
        polynomial_calculus(ctx, [(0, 1, 1.0)], [])
    with pytest.raises(PreconditionError):
        polynomial_calculus(ctx, [], [(1, 0, 1.0)])
    with pytest.raises(PreconditionError):
        polynomial_calculus(ctx, [(0, 0, Quaternion(0, 1, 0, 0))], [])


def test_choice_independence_on_kernel():
    t, _ = random_normal(5, RNG, kind="selfadjoint")
    ctx = build_context(t)
    alt = alternate_kernel_J(ctx)
    assert (alt - ctx.j).norm() > 0.5  # genuinely different completion
    assert is_anti_self_adjoint(alt) and is_unitary(alt)
    assert (alt @ ctx.a - ctx.a @ alt).norm() <= 1e-10 * max(1.0, op_norm(t))
    g1 = polynomial_calculus(ctx, SQUARE_Q1, SQUARE_Q2)
    g2 = polynomial_calculus(ctx, SQUARE_Q1, SQUARE_Q2, j=alt)
    assert (g1 - g2).norm() <= 1e-9


def test_alternate_J_requires_kernel():
    t, _ = random_normal(3, RNG, kind="antiselfadjoint")
    ctx = build_context(t)
    if not ctx.kernel_flags.any():
        with pytest.raises(PreconditionError):
            alternate_kernel_J(ctx)


# -- intrinsic calculus ----------------------------------------------------------------

def test_intrinsic_unity_and_id():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    assert (intrinsic_calculus(ctx, SliceFunction.builtin("one"))
            - QMatrix.identity(5)).norm() <= 1e-12
    assert (intrinsic_calculus(ctx, SliceFunction.builtin("id")) - t).norm() <= \
        1e-10 * max(1.0, op_norm(t))


def test_intrinsic_square_cross_check():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    scale = max(1.0, op_norm(t)) ** 2
    via_eig = intrinsic_calculus(ctx, SliceFunction.builtin("square"))
    via_poly = polynomial_calculus(ctx, SQUARE_Q1, SQUARE_Q2)
    assert (via_eig - t @ t).norm() <= 1e-9 * scale
    assert (via_eig - via_poly).norm() <= 1e-9 * scale


def test_intrinsic_isometry_and_spectral_map():
    t, _ = random_normal(6, RNG)
    ctx = build_context(t)
    spec_set = ctx.spectrum_set()
    for name in ("id", "square", "exp"):
        f = SliceFunction.builtin(name)
        ft = intrinsic_calculus(ctx, f)
        nf = sup_norm(f, spec_set)
        assert abs(op_norm(ft) - nf) <= 1e-8 * max(1.0, nf)
        mapped = np.array([fold(f.eval(Quaternion(a) + I * b))
                           for a, b in spec_set.reps])
        assert hausdorff(spherical_spectrum(ft).reps, mapped) <= 1e-7 * max(1.0, nf)


def test_intrinsic_star_homomorphism():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    f, g = random_intrinsic(), random_intrinsic()
    ft, gt = intrinsic_calculus(ctx, f), intrinsic_calculus(ctx, g)
    scale = max(1.0, op_norm(ft) * op_norm(gt))
    assert (intrinsic_calculus(ctx, slice_product(f, g)) - ft @ gt).norm() <= 1e-8 * scale
    assert (intrinsic_calculus(ctx, f.star()) - ft.adjoint()).norm() <= \
        1e-8 * max(1.0, op_norm(ft))
    # transport through K: f(T) K = K f*(T)
    assert (ft @ ctx.k - ctx.k @ intrinsic_calculus(ctx, f.star())).norm() <= \
        1e-8 * max(1.0, op_norm(ft))


def test_intrinsic_rejects_wrong_class_and_domain():
    t, _ = random_normal(3, RNG)
    ctx = build_context(t)
    with pytest.raises(PreconditionError):
        intrinsic_calculus(ctx, SliceFunction.constant(I))
    with pytest.raises(PreconditionError):
        intrinsic_calculus(ctx, SliceFunction.builtin("sqrt"))  # spectrum not real+


def test_sqrt_calculus_on_positive_operator():
    c = random_qmatrix(4, RNG)
    m = c.adjoint() @ c
    ctx = build_context(m)
    root = intrinsic_calculus(ctx, SliceFunction.builtin("sqrt"))
    assert (root @ root - m).norm() <= 1e-9 * max(1.0, op_norm(m))


# -- C_iota calculus --------------------------------------------------------------------

def test_cslice_constant_maps_to_J():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    assert (cslice_calculus(ctx, SliceFunction.constant(I)) - ctx.j).norm() <= 1e-12


def test_cslice_extends_intrinsic_and_is_linear():
    t, _ = random_normal(4, RNG)
    ctx = build_context(t)
    f = random_intrinsic()
    assert (cslice_calculus(ctx, f) - intrinsic_calculus(ctx, f)).norm() <= 1e-10 * \
        max(1.0, op_norm(t)) ** 2
    f_lin = SliceFunction.builtin("id") + SliceFunction.constant(I)
    assert (cslice_calculus(ctx, f_lin) - (t + ctx.j)).norm() <= \
        1e-10 * max(1.0, op_norm(t))


def test_cslice_norm_and_spectral_map():
    t, _ = random_normal(6, RNG)
    ctx = build_context(t)
    f = random_cslice(I)
    ft = cslice_calculus(ctx, f)
    upper = ctx.spectrum().reps
    nf = max(f.eval(Quaternion(a) + I * b).norm() for a, b in upper)
    assert abs(op_norm(ft) - nf) <= 1e-8 * max(1.0, nf)
    mapped = np.array([fold(f.eval(Quaternion(a) + I * b)) for a, b in upper])
    assert hausdorff(spherical_spectrum(ft).reps, mapped) <= 1e-7 * max(1.0, nf)


def test_cslice_homomorphism():
    t, _ = random_normal(4, RNG)
    ctx = build_context(t)
    f, g = random_cslice(I), random_cslice(I)
    ft, gt = cslice_calculus(ctx, f), cslice_calculus(ctx, g)
    assert (cslice_calculus(ctx, slice_product(f, g)) - ft @ gt).norm() <= \
        1e-8 * max(1.0, op_norm(ft) * op_norm(gt))
    assert (cslice_calculus(ctx, f.star()) - ft.adjoint()).norm() <= \
        1e-8 * max(1.0, op_norm(ft))


def test_cslice_kernel_characterization():
    """A slice function vanishing on the upper half of the slice spectrum is
    annihilated, even though it is nonzero below."""
    t, _ = random_normal(5, RNG, kind="antiselfadjoint")
    ctx = build_context(t)

    def stem(z):
        return -I * abs(z.imag), Quaternion(z.imag)

    f = SliceFunction.tabulated(stem, validate=False)
    ft = cslice_calculus(ctx, f)
    assert op_norm(ft) <= 1e-8 * max(1.0, op_norm(t))
    # the function itself is nonzero away from the chosen slice
    assert f.eval(J * 1.0).norm() > 0.5


def test_cslice_rejects_wrong_class():
    t, _ = random_normal(3, RNG)
    ctx = build_context(t)
    with pytest.raises(PreconditionError):
        cslice_calculus(ctx, SliceFunction.constant(J))


# -- circular calculus --------------------------------------------------------------------

def test_circular_constants():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    assert (circular_calculus(ctx, SliceFunction.constant(J)) - ctx.k).norm() <= 1e-12
    q = Quaternion(*RNG.normal(size=4))
    assert (circular_calculus(ctx, SliceFunction.constant(q)) - ctx.left(q)).norm() <= \
        1e-10 * max(1.0, q.norm())


def test_circular_homomorphism_and_adjoint():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    f, g = random_circular(), random_circular()
    ft, gt = circular_calculus(ctx, f), circular_calculus(ctx, g)
    assert (circular_calculus(ctx, slice_product(f, g)) - ft @ gt).norm() <= \
        1e-8 * max(1.0, op_norm(ft) * op_norm(gt))
    assert (circular_calculus(ctx, f.star()) - ft.adjoint()).norm() <= \
        1e-8 * max(1.0, op_norm(ft))


def test_circular_spectral_containment_and_norm():
    t, _ = random_normal(6, RNG)
    ctx = build_context(t)
    f = random_circular()
    ft = circular_calculus(ctx, f)
    upper = ctx.spectrum().reps
    mapped = np.array([fold(f.eval(Quaternion(a) + I * b)) for a, b in upper])
    assert one_sided_hausdorff(spherical_spectrum(ft).reps, mapped) <= \
        1e-7 * max(1.0, op_norm(ft))
    nf = sup_norm(f, ctx.spectrum_set())
    assert op_norm(ft) <= nf + 1e-8 * max(1.0, nf)


def test_circular_rejects_non_circular():
    t, _ = random_normal(3, RNG)
    ctx = build_context(t)
    with pytest.raises(PreconditionError):
        circular_calculus(ctx, SliceFunction.builtin("id"))


# -- general calculus ---------------------------------------------------------------------

def test_general_extends_intrinsic():
    t, _ = random_normal(4, RNG)
    ctx = build_context(t)
    f = random_intrinsic()
    assert (general_calculus(ctx, f) - intrinsic_calculus(ctx, f)).norm() <= \
        1e-10 * max(1.0, op_norm(t)) ** 2


def test_general_right_scalar_compatibility():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    f = random_general()
    ft = general_calculus(ctx, f)
    for _ in range(3):
        q = Quaternion(*RNG.normal(size=4))
        lhs = general_calculus(ctx, slice_product(f, SliceFunction.constant(q)))
        assert (lhs - ft @ ctx.left(q)).norm() <= \
            1e-9 * max(1.0, op_norm(ft) * q.norm())


def test_general_adjoint_rule():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    f = random_general()
    f0, f1, f2, f3 = decompose_components(f, ctx.iota, ctx.kappa)
    twisted = f0 + slice_product(f1, SliceFunction.constant(ctx.iota)) \
        + slice_product(f2.star(), SliceFunction.constant(ctx.kappa)) \
        + slice_product(f3.star(), SliceFunction.constant(ctx.iota * ctx.kappa))
    ft = general_calculus(ctx, f)
    assert (ft.adjoint() - general_calculus(ctx, twisted.star())).norm() <= \
        1e-9 * max(1.0, op_norm(ft))


def test_general_rejects_spectrum_outside_domain():
    t, _ = random_normal(3, RNG)  # spectrum not inside the nonneg reals
    ctx = build_context(t)
    with pytest.raises(PreconditionError):
        general_calculus(ctx, SliceFunction.builtin("sqrt"))


def test_general_product_rules():
    t, _ = random_normal(4, RNG)
    ctx = build_context(t)
    f_slice = random_cslice(I)
    g = random_general()
    lhs = general_calculus(ctx, slice_product(f_slice, g))
    rhs = general_calculus(ctx, f_slice) @ general_calculus(ctx, g)
    assert (lhs - rhs).norm() <= 1e-8 * max(1.0, op_norm(rhs))
    g_circ = random_circular()
    f = random_general()
    lhs = general_calculus(ctx, slice_product(f, g_circ))
    rhs = general_calculus(ctx, f) @ general_calculus(ctx, g_circ)
    assert (lhs - rhs).norm() <= 1e-8 * max(1.0, op_norm(rhs))


# -- adjoint similarity ----------------------------------------------------------------------

def test_adjoint_similarity():
    for kind in ("normal", "selfadjoint"):
        t, _ = random_normal(5, RNG, kind=kind)
        ctx = build_context(t)
        u = adjoint_similarity(ctx)
        assert is_unitary(u)
        assert (u @ t @ u.adjoint() - t.adjoint()).norm() <= 1e-9 * max(1.0, op_norm(t))
    # 1x1: conjugation flips the imaginary part
    ctx = build_context(QMatrix.diag([I]))
    u = adjoint_similarity(ctx)
    assert (u @ ctx.t @ u.adjoint() - QMatrix.diag([-I])).norm() <= 1e-12


# -- contour calculus ------------------------------------------------------------------------

def test_contour_matches_algebraic_route():
    t, _ = random_normal(5, RNG)
    ctx = build_context(t)
    cubic = SliceFunction.polynomial(
        [(3, 0, 1.0), (1, 2, -3.0), (1, 0, 0.5), (0, 0, -1.0)],
        [(2, 1, 3.0), (0, 3, -1.0), (0, 1, 0.5)])
    for f in (SliceFunction.builtin("one"), SliceFunction.builtin("id"),
              SliceFunction.builtin("square"), cubic):
        alg = general_calculus(ctx, f)
        con = slice_regular_contour(ctx, f, nodes=256)
        assert (con - alg).norm() <= 1e-7 * max(1.0, op_norm(alg))


def test_contour_non_intrinsic_polynomial():
    """Right quaternionic coefficients: f(q) = q a + b stays slice regular."""
    t, _ = random_normal(4, RNG)
    ctx = build_context(t)
    a, b = Quaternion(0.5, 1, -2, 0.25), Quaternion(1, 0, 1, -1)
    f = slice_product(SliceFunction.builtin("id"), SliceFunction.constant(a)) \
        + SliceFunction.constant(b)
    alg = general_calculus(ctx, f)
    con = slice_regular_contour(ctx, f, nodes=256)
    assert (con - alg).norm() <= 1e-7 * max(1.0, op_norm(alg))


def test_contour_radius_and_node_validation():
    t, _ = random_normal(3, RNG)
    ctx = build_context(t)
    f = SliceFunction.builtin("id")
    with pytest.raises(PreconditionError):
        slice_regular_contour(ctx, f, radius=0.5 * op_norm(t))
    with pytest.raises(PreconditionError):
        slice_regular_contour(ctx, f, nodes=8)


def test_contour_default_radius_converges_fast():
    t, _ = random_normal(3, RNG)
    ctx = build_context(t)
    f = SliceFunction.builtin("square")
    coarse = slice_regular_contour(ctx, f, nodes=32)
    fine = slice_regular_contour(ctx, f, nodes=256)
    assert (coarse - fine).norm() <= 1e-7 * max(1.0, op_norm(fine))


def test_contour_kernel_equals_resolvent_series():
    """The node kernel Delta_z(T)^(-1)(T - L_conj(z)) has the power-series
    expansion -sum_n T^n L_{z^(-n-1)} outside the spectral bound."""
    t, _ = random_normal(4, RNG)
    ctx = build_context(t)
    r = 2.5 * op_norm(t)
    zq = Quaternion(r * 0.6) + I * (r * 0.8)
    zc = complex(r * 0.6, r * 0.8)
    from quatspec.spectral import delta_q
    delta_c = chi_embed(delta_q(t, zq))
    psi = np.linalg.solve(delta_c,
                          chi_embed(t) - chi_embed(ctx.left(zq.conjugate())))
    series = np.zeros_like(psi)
    power = QMatrix.identity(4)
    for n in range(60):
        c = zc ** (-n - 1)
        series -= chi_embed(power) @ chi_embed(ctx.left(Quaternion(c.real) + I * c.imag))
        power = power @ t
    assert np.linalg.norm(psi - series, 2) <= 1e-12


# -- degenerate and tiny inputs ----------------------------------------------------------------


def test_one_sphere_with_mixed_axes():
    """diag(1+2i, 1+2j): a single eigensphere of multiplicity two whose
    eigenvalues point along different imaginary axes."""
    v = random_unitary(2, RNG)
    t = v @ QMatrix.diag([Quaternion(1) + I * 2.0, Quaternion(1) + J * 2.0]) @ v.adjoint()
    spec = spherical_spectrum(t)
    assert spec.size == 1 and spec.mult == (2,)
    ctx = build_context(t)
    assert op_norm(ctx.t - (ctx.a + ctx.j @ ctx.b)) <= 1e-10 * op_norm(t)
    f = SliceFunction.builtin("exp")
    ft = intrinsic_calculus(ctx, f)
    assert abs(op_norm(ft) - sup_norm(f, ctx.spectrum_set())) <= 1e-8


def test_diag_of_two_imaginary_units():
    t = QMatrix.diag([I, J])
    spec = spherical_spectrum(t)
    assert spec.mult == (2,)
    assert hausdorff(spec.reps, np.array([[0.0, 1.0]])) <= 1e-12
    ctx = build_context(t)
    assert op_norm(ctx.t - (ctx.a + ctx.j @ ctx.b)) <= 1e-10


def test_one_by_one_context_and_contour():
    t = QMatrix.diag([Quaternion(0.5, 1, -2, 0.25)])
    ctx = build_context(t)
    assert op_norm(ctx.t - (ctx.a + ctx.j @ ctx.b)) <= 1e-12
    sq = slice_regular_contour(ctx, SliceFunction.builtin("square"))
    assert (sq - t @ t).norm() <= 1e-8


def test_zero_operator_context():
    t = QMatrix.zeros(3)
    ctx = build_context(t)
    assert ctx.a.norm() == 0.0 and ctx.b.norm() == 0.0
    assert ctx.kernel_flags.all()
    spec = spherical_spectrum(t)
    assert spec.mult == (3,) and np.allclose(spec.reps, [[0.0, 0.0]])
    assert (intrinsic_calculus(ctx, SliceFunction.builtin("exp"))
            - QMatrix.identity(3)).norm() <= 1e-12


# -- spectral measure --------------------------------------------------------------------------

def test_spectral_measure_diag_example():
    t = QMatrix.diag([Quaternion(1), Quaternion(2)])
    u = QVector.basis_vector(2, 0)
    weights = spectral_measure_weights(t, u)
    assert weights[0][0] == pytest.approx(1.0) and weights[0][1] == pytest.approx(1.0)
    assert weights[1][0] == pytest.approx(2.0) and abs(weights[1][1]) <= 1e-14


def test_spectral_measure_total_and_moments():
    t, _ = random_normal(6, RNG, kind="selfadjoint")
    u = random_qvector(6, RNG)
    weights = spectral_measure_weights(t, u)
    assert abs(sum(w for _, w in weights) - u.norm() ** 2) <= 1e-9 * u.norm() ** 2
    ctx = build_context(t)
    for name in ("square", "exp"):
        f = SliceFunction.builtin(name)
        val = (intrinsic_calculus(ctx, f) @ u).norm() ** 2
        expect = sum(f.eval(Quaternion(lam)).a ** 2 * w for lam, w in weights)
        assert abs(val - expect) <= 1e-9 * max(1.0, expect)


def test_spectral_measure_clusters_degenerate_eigenvalues():
    v = random_unitary(4, RNG)
    t = v @ QMatrix.diag([Quaternion(1)] * 3 + [Quaternion(-2)]) @ v.adjoint()
    u = random_qvector(4, RNG)
    weights = spectral_measure_weights(t, u)
    assert len(weights) == 2
    assert abs(sum(w for _, w in weights) - u.norm() ** 2) <= 1e-9 * u.norm() ** 2


def test_spectral_measure_rejects_non_self_adjoint():
    t, _ = random_normal(3, RNG, kind="antiselfadjoint")
    with pytest.raises(PreconditionError):
        spectral_measure_weights(t, random_qvector(3, RNG))
