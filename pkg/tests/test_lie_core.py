import pytest

from liepairs.lie_core import (
    GAlgebra,
    GModule,
    LieAlgebra,
    MatchedPairData,
    NotABialgebra,
    NotASubalgebra,
    SubalgebraNotClosed,
    adapt_basis,
    bialgebra_pair,
    check_g_algebra,
    check_matched_pair,
    check_module,
    dual_module,
    end_module,
    exterior_power_module,
    make_pair,
    matched_sum,
    pair_to_matched,
    tensor_module,
    trivial_module,
    validate_lie_algebra,
)
from liepairs.linalg import Matrix
from liepairs.scalars import GaussScalar, ONE, ZERO
from liepairs.zoo import (
    _split_anti_hermitian,
    _t_basis,
    _t_coords,
    _u_basis,
    _u_coords,
    affine_bialgebra,
    dual_numbers_algebra,
    gl_un_tn,
    heisenberg_pair,
    sl2_pair,
    sl2_pair_swapped,
    unit_algebra,
    weighted_dual_numbers,
)


def g(x):
    return GaussScalar(x)


def test_validate_abelian_and_sl2():
    assert validate_lie_algebra(LieAlgebra.zero(3)).ok
    pair, _ = sl2_pair()
    assert validate_lie_algebra(pair.d).ok


def test_validate_catches_corruption():
    # 2-dim algebra [x, y] = x, then corrupt c[1][2] to y without fixing Jacobi.
    d = LieAlgebra.from_brackets(2, {(0, 1): [1, 0]})
    assert validate_lie_algebra(d).ok
    d.c[0][1] = [g(1), g(1)]
    d.c[1][0] = [g(-1), g(-1)]
    # still antisymmetric, and Jacobi holds trivially in dim 2; break antisymmetry
    d.c[0][1] = [g(1), g(1)]
    d.c[1][0] = [g(-1), g(0)]
    report = validate_lie_algebra(d)
    assert not report.ok
    assert report.entries[0]["check"] == "antisymmetry"


def test_validate_jacobi_failure():
    # On sl2, [e, f] = h + f breaks Jacobi with residual 2f at (h, e, f).
    c = {
        (0, 1): [0, 2, 0],
        (0, 2): [0, 0, -2],
        (1, 2): [1, 0, 1],
    }
    d = LieAlgebra.from_brackets(3, c)
    report = validate_lie_algebra(d)
    assert not report.ok
    assert any(e["check"] == "jacobi" for e in report.entries)


def test_make_pair_closure():
    pair, _ = sl2_pair()
    assert pair.dim_g == 2 and pair.dim_b == 1
    pair2 = sl2_pair_swapped()
    assert pair2.dim_b == 1
    assert make_pair(LieAlgebra.zero(4), 2).dim_b == 2
    # (e, f) do not close: [e, f] = h sticks out.
    c = {(0, 1): [0, 0, 1], (0, 2): [-2, 0, 0], (1, 2): [0, 2, 0]}
    d = LieAlgebra.from_brackets(3, c)  # basis (e, f, h)
    assert validate_lie_algebra(d).ok
    with pytest.raises(SubalgebraNotClosed):
        make_pair(d, 2)


def test_quotient_module_sl2():
    pair, _ = sl2_pair()
    b = pair.quotient_module()
    assert b.dim == 1
    assert b.action[0][0, 0] == g(-2)  # h acts by -2 on the class of f
    assert b.action[1][0, 0] == ZERO   # e acts by 0
    assert check_module(pair.g_algebra(), b).ok


def test_quotient_module_abelian_and_matched():
    assert make_pair(LieAlgebra.zero(3), 1).quotient_module().action[0].is_zero()
    data = affine_bialgebra()
    pair = matched_sum(data)
    b = pair.quotient_module()
    for x in range(data.a.dim):
        assert b.action[x] == data.nabla[x]


def test_module_constructions():
    pair, modules = sl2_pair()
    gsub = pair.g_algebra()
    b = modules["B"]
    # dual of trivial module is trivial
    assert dual_module(trivial_module(2, 2)).action[0].is_zero()
    # Hom(B (x) B, B): h acts by 2, e by 0 on the generator
    hom = modules["hom_bb_b"]
    assert hom.dim == 1
    assert hom.action[0][0, 0] == g(2)
    assert hom.action[1][0, 0] == ZERO
    # End of a 1-dim module is trivial
    assert end_module(b).action[0].is_zero()
    for module in [dual_module(b), hom, end_module(b),
                   tensor_module(b, b), exterior_power_module(b, 1)]:
        assert check_module(gsub, module).ok


def test_derived_modules_flat_on_bigger_pair():
    fixture = gl_un_tn(2)
    gsub = fixture.pair.g_algebra()
    b = fixture.module_b
    for module in [dual_module(b), end_module(b),
                   tensor_module(dual_module(b), b),
                   exterior_power_module(b, 2)]:
        assert check_module(gsub, module).ok


def test_adapt_basis_identity_case():
    pair, _ = sl2_pair()
    basis = [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO]]
    adapted, t = adapt_basis(pair.d, basis)
    assert t == Matrix.identity(3)
    assert adapted.c == pair.d.c


def test_adapt_basis_skew_span():
    pair, _ = sl2_pair()
    # span(h + e, e) is the same Borel subalgebra in a skew basis
    adapted, t = adapt_basis(pair.d, [[ONE, ONE, ZERO], [ZERO, ONE, ZERO]])
    assert validate_lie_algebra(adapted).ok
    new_pair = make_pair(adapted, 2)
    assert new_pair.dim_b == 1
    # conjugation consistency: T c'(i,j) = [T e_i, T e_j] in old coordinates
    for i in range(3):
        for j in range(3):
            old = pair.d.bracket(t.col(i), t.col(j))
            assert t.apply(adapted.c[i][j]) == old


def test_adapt_basis_rejects_bad_spans():
    pair, _ = sl2_pair()
    with pytest.raises(NotASubalgebra):
        adapt_basis(pair.d, [[ONE, ZERO, ZERO], [g(2), ZERO, ZERO]])
    with pytest.raises(NotASubalgebra):
        adapt_basis(pair.d, [[ZERO, ONE, ZERO], [ZERO, ZERO, ONE]])  # (e, f)


def test_check_matched_pair_trivial_cases():
    a = LieAlgebra.zero(2)
    b = LieAlgebra.zero(3)
    zero_nabla = [Matrix.zeros(3, 3)] * 2
    zero_delta = [Matrix.zeros(2, 2)] * 3
    assert check_matched_pair(MatchedPairData(a, b, zero_nabla, zero_delta)).ok


def test_check_matched_pair_detects_bad_action():
    data = affine_bialgebra()
    assert check_matched_pair(data).ok
    bad = MatchedPairData(data.a, data.b,
                          [m + Matrix.identity(2) for m in data.nabla],
                          data.delta)
    assert not check_matched_pair(bad).ok


def test_corrupted_nabla_breaks_jacobi_of_the_sum():
    # bypass the compatibility gate and build the sum bracket directly:
    # some mixed triple must then violate Jacobi
    data = affine_bialgebra()
    bad_nabla = [m + Matrix.identity(2) for m in data.nabla]
    na, nb = data.a.dim, data.b.dim
    n = na + nb
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(na):
        for j in range(na):
            c[i][j] = list(data.a.c[i][j]) + [ZERO] * nb
    for i in range(nb):
        for j in range(nb):
            c[na + i][na + j] = [ZERO] * na + list(data.b.c[i][j])
    for i in range(na):
        for j in range(nb):
            vec = [-x for x in data.delta[j].col(i)] + list(bad_nabla[i].col(j))
            c[i][na + j] = vec
            c[na + j][i] = [-x for x in vec]
    report = validate_lie_algebra(LieAlgebra(n, c))
    mixed = [e for e in report.entries if e["check"] == "jacobi"]
    assert mixed


def test_matched_sum_zero_actions_direct_product():
    a = LieAlgebra.from_brackets(2, {(0, 1): [0, 1]})
    b = LieAlgebra.zero(1)
    data = MatchedPairData(a, b, [Matrix.zeros(1, 1)] * 2, [Matrix.zeros(2, 2)])
    pair = matched_sum(data)
    assert pair.dim_g == 2
    assert validate_lie_algebra(pair.d).ok
    assert pair.d.c[0][1] == [ZERO, ONE, ZERO]
    assert pair.d.c[0][2] == [ZERO, ZERO, ZERO]


def test_unitary_triangular_matched_pair_against_matrix_oracle():
    fixture = gl_un_tn(2)
    assert check_matched_pair(fixture.matched).ok
    assert validate_lie_algebra(fixture.pair.d).ok
    # Oracle: structure constants computed directly from 2x2 matrix commutators.
    mats = _u_basis(2) + _t_basis(2)
    for i in range(8):
        for j in range(8):
            z = mats[i].commutator(mats[j])
            u, t = _split_anti_hermitian(z)
            expected = _u_coords(2, u) + _t_coords(2, t)
            assert fixture.pair.d.c[i][j] == expected


def test_split_anti_hermitian_is_exact_decomposition():
    for m in _u_basis(2) + _t_basis(2):
        u, t = _split_anti_hermitian(m)
        assert (u + t) == m
        # u anti-Hermitian: u + conj(u)^T = 0
        conj_t = Matrix(2, 2, [u[j, i].conjugate() for i in range(2) for j in range(2)])
        assert (u + conj_t).is_zero()
        # t upper triangular with real diagonal
        assert t[1, 0] == ZERO
        assert t[0, 0].im == 0 and t[1, 1].im == 0


def test_decompose_then_rebuild_round_trip():
    pair, _ = sl2_pair()
    data = pair_to_matched(pair)
    rebuilt = matched_sum(data)
    assert rebuilt.d.c == pair.d.c
    fixture = gl_un_tn(2)
    data2 = pair_to_matched(fixture.pair)
    assert matched_sum(data2).d.c == fixture.pair.d.c


def test_g_algebra_checks():
    assert check_g_algebra(LieAlgebra.zero(2), dual_numbers_algebra(2)).ok
    assert check_g_algebra(LieAlgebra.zero(2), unit_algebra(2)).ok
    # action sending eps to the unit is not a derivation of eps^2 = 0
    bad_action = [Matrix.from_rows([[ZERO, ONE], [ZERO, ZERO]]),
                  Matrix.zeros(2, 2)]
    bad = GAlgebra(GModule(2, bad_action),
                   dual_numbers_algebra(2).mult)
    report = check_g_algebra(LieAlgebra.zero(2), bad)
    assert any(e["check"] == "derivation" and e["residual"] == "-2"
               for e in report.entries)


def test_weighted_dual_numbers_flatness_constraint():
    pair, _ = sl2_pair()
    good = weighted_dual_numbers(pair, [1, 0])
    assert check_g_algebra(pair.g_algebra(), good).ok
    bad = weighted_dual_numbers(pair, [0, 1])
    assert not check_g_algebra(pair.g_algebra(), bad).ok


def test_bialgebra_constructions():
    data = affine_bialgebra()
    assert check_matched_pair(data).ok
    # dual bracket [x*, y*] = y* from delta(y) = x ^ y
    assert data.b.c[0][1] == [ZERO, ONE]
    pair = matched_sum(data)
    assert validate_lie_algebra(pair.d).ok

    from liepairs.zoo import zero_cobracket_bialgebra
    pair2_data = zero_cobracket_bialgebra(sl2_pair()[0].d)
    for m in pair2_data.delta:
        assert m.is_zero()
    for x in range(3):
        assert pair2_data.nabla[x] == -(sl2_pair()[0].d.ad(x).transpose())


def test_bialgebra_rejects_non_cocycle_cobracket():
    pair, _ = sl2_pair()
    m_h = Matrix.zeros(3, 3)
    m_h.data[1 * 3 + 2] = ONE
    m_h.data[2 * 3 + 1] = -ONE  # delta(h) = e ^ f
    with pytest.raises(NotABialgebra):
        bialgebra_pair(pair.d, [m_h, Matrix.zeros(3, 3), Matrix.zeros(3, 3)])


def test_heisenberg_pair():
    pair = heisenberg_pair()
    assert validate_lie_algebra(pair.d).ok
    assert pair.dim_g == 1 and pair.dim_b == 2
    assert pair.quotient_module().action[0].is_zero()
