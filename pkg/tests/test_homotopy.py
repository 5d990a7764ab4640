import random

import pytest

from liepairs.atiyah import atiyah_cocycle, extend_by_zero
from liepairs.ce import Cochain, ce_diff
from liepairs.homotopy import (
    AlgebraExtension,
    ArityBeyondTower,
    GradedElement,
    NotCommutativeAlgebra,
    build_tower,
    check_proof_identities,
    graded_diff,
    lambda_k,
    leibniz_residual,
    matched_zero_gamma_closed_form,
    mu_k,
    partial_nabla,
    splitting_tensors,
    symmetry_report,
    theta_witness,
    verify_leibniz,
    verify_module,
)
from liepairs.lie_core import matched_sum, trivial_module
from liepairs.multilinear import merge_sign
from liepairs.scalars import GaussScalar, ONE, ZERO
from liepairs.zoo import (
    affine_bialgebra,
    dual_numbers_algebra,
    gl_un_tn,
    heisenberg_pair,
    random_extension,
    random_module,
    random_pair,
    sl2_pair,
    unit_algebra,
    weighted_dual_numbers,
)


def g(x):
    return GaussScalar(x)


def sl2_tower(depth=4):
    pair, modules = sl2_pair()
    conn = extend_by_zero(pair, modules["B"])
    return pair, modules, build_tower(pair, conn, depth=depth)


def test_splitting_tensors_sl2():
    pair, modules, tower = sl2_tower()
    st = tower.st
    # delta along the class of f: h -> 0, e -> -h
    assert st.delta[0].col(0) == [ZERO, ZERO]
    assert st.delta[0].col(1) == [g(-1), ZERO]
    # rank-one quotient kills the antisymmetric tensors
    assert st.alpha_map[0][0] == [ZERO, ZERO]
    assert st.beta[0][0] == [ZERO]
    assert st.omega[0][0].is_zero()


def test_splitting_tensors_multiplication_connection():
    fx = gl_un_tn(2)
    st = splitting_tensors(fx.pair, fx.conn_mult)
    nb = fx.pair.dim_b
    for i in range(nb):
        for j in range(nb):
            assert all(x.is_zero() for x in st.beta[i][j])
            assert st.omega[i][j].is_zero()
            # matched pairs have no subalgebra component in complement brackets
            assert all(x.is_zero() for x in st.alpha_map[i][j])


def test_partial_nabla_constant_section():
    pair = heisenberg_pair()
    module = trivial_module(1, 1)
    conn = extend_by_zero(pair, module)
    st = splitting_tensors(pair, extend_by_zero(pair, pair.quotient_module()))
    w = Cochain(pair, module, 0, 0, [ONE])
    out = partial_nabla(w, conn, extend_by_zero(pair, pair.quotient_module()), st)
    assert out.is_zero()


def test_tower_sl2_goldens():
    pair, modules, tower = sl2_tower()
    assert list(tower.r[2].iter_nonzero()) == [((1,), (0, 0), 0, g(2))]
    assert tower.r[3].is_zero()
    assert tower.r[4].is_zero()


def test_tower_recursion_wiring():
    fx = gl_un_tn(2)
    tower = build_tower(fx.pair, fx.conn_zero, depth=4)
    for n in (2, 3):
        rebuilt = partial_nabla(tower.r[n], tower.conn_b, tower.conn_b,
                                tower.st)
        assert rebuilt == tower.r[n + 1]
    assert not tower.r[2].is_zero()


def test_r2_matches_obstruction_cocycle():
    fx = gl_un_tn(2)
    tower = build_tower(fx.pair, fx.conn_zero, depth=2)
    cocycle = atiyah_cocycle(fx.conn_zero)
    nb = fx.pair.dim_b
    for (a,), (b1,), e, c in cocycle.iter_nonzero():
        out, b2 = divmod(e, nb)
        assert tower.r[2].get((a,), (b1, b2), out) == c


def test_lambda_goldens_and_sign_placement():
    pair, modules, tower = sl2_tower()
    one_f = GradedElement.basis(pair, 1, (), 0)
    hstar_f = GradedElement.basis(pair, 1, (0,), 0)
    estar_f = GradedElement.basis(pair, 1, (1,), 0)
    out = lambda_k(tower, [one_f, one_f])
    assert out.terms == {((1,), 0): g(2)}
    # hand evaluation of the printed formula:
    # lambda_2(h* x f, 1 x f) = (-1)^1 h* ^ (2 e*) x f = -2 (h* ^ e*) x f
    left = lambda_k(tower, [hstar_f, one_f])
    assert left.terms == {((0, 1), 0): g(-2)}
    # lambda_2(1 x f, h* x f) = (-1)^1 h* ^ (2 e*) x f as well
    right = lambda_k(tower, [one_f, hstar_f])
    assert right.terms == {((0, 1), 0): g(-2)}
    # wedge degeneracy kills the e* slot
    assert lambda_k(tower, [estar_f, one_f]).is_zero()


def test_lambda_one_is_differential():
    rng = random.Random(31)
    fx = gl_un_tn(2)
    tower = build_tower(fx.pair, fx.conn_zero, depth=2)
    el = GradedElement(fx.pair, fx.pair.dim_b)
    for _ in range(5):
        gt = tuple(sorted(rng.sample(range(4), rng.randint(0, 2))))
        el.add_term((gt, rng.randrange(4)), g(rng.randint(-3, 3)))
    out = lambda_k(tower, [el])
    expected = graded_diff(fx.pair, fx.pair.quotient_module(), el)
    assert out == expected
    # and degreewise it matches the raw cochain differential
    w = Cochain(fx.pair, fx.pair.quotient_module(), 1, 0)
    for (gt, m), c in el.terms.items():
        if len(gt) == 1:
            w.set(gt, (), m, c)
    dw = ce_diff(w)
    for gt, _, m, c in dw.iter_nonzero():
        assert out.terms.get((gt, m), ZERO) == \
            expected.terms.get((gt, m), ZERO) == c


def test_mu_matches_lambda_when_module_is_quotient():
    pair, modules, _ = sl2_tower()
    conn = extend_by_zero(pair, modules["B"])
    tower = build_tower(pair, conn, depth=3, module=modules["B"], conn_e=conn)
    v = GradedElement.basis(pair, 1, (), 0)
    w = GradedElement.basis(pair, 1, (), 0)
    assert mu_k(tower, [v], w).terms == lambda_k(tower, [v, v]).terms


def test_arity_beyond_tower():
    pair, modules, tower = sl2_tower(depth=2)
    v = GradedElement.basis(pair, 1, (), 0)
    with pytest.raises(ArityBeyondTower):
        lambda_k(tower, [v, v, v])
    with pytest.raises(ArityBeyondTower):
        verify_leibniz(tower, 3, 1)


def test_leibniz_unary_is_d_squared():
    pair, modules, tower = sl2_tower()
    for gt in [(), (0,), (1,)]:
        v = GradedElement.basis(pair, 1, gt, 0)
        assert leibniz_residual(tower, [v]).is_zero()


def test_verify_leibniz_zero_on_fixtures():
    pair, modules, tower = sl2_tower()
    assert verify_leibniz(tower, 4, 2).ok
    hpair = heisenberg_pair()
    htower = build_tower(hpair, extend_by_zero(hpair, hpair.quotient_module()),
                         depth=4)
    assert verify_leibniz(htower, 4, 1).ok
    for seed in (2, 6):
        rpair = random_pair(seed)
        rtower = build_tower(
            rpair, random_extension(rpair, rpair.quotient_module(), seed),
            depth=4)
        assert verify_leibniz(rtower, 3, 2).ok


def test_verify_module_zero_on_fixtures():
    pair, modules, _ = sl2_tower()
    conn_b = extend_by_zero(pair, modules["B"])
    for module in (modules["B"], modules["B_dual"], random_module(pair, 2, 7)):
        conn_e = random_extension(pair, module, 5)
        tower = build_tower(pair, conn_b, depth=4, module=module,
                            conn_e=conn_e)
        assert verify_module(tower, 3, 2).ok


def test_corrupted_tower_fails_sweep():
    data = affine_bialgebra()
    bpair = matched_sum(data)
    tower = build_tower(bpair, extend_by_zero(bpair, bpair.quotient_module()),
                        depth=3)
    assert verify_leibniz(tower, 3, 1).ok
    tower.r[2].data[0] = tower.r[2].data[0] + ONE
    tower._r_slices.clear()
    report = verify_leibniz(tower, 3, 1)
    assert not report.ok
    assert report.violations[0]["n"] in (2, 3)


def test_corrupted_module_tower_fails_sweep():
    fx = gl_un_tn(2)
    tower = build_tower(fx.pair, fx.conn_mult, depth=3, module=fx.module_b,
                        conn_e=fx.conn_mult)
    assert verify_module(tower, 3, 0).ok
    tower.s[2].data[3] = tower.s[2].data[3] + ONE
    tower._s_slices.clear()
    assert not verify_module(tower, 3, 0).ok


def test_proof_identities_on_fixture_set():
    fixtures = []
    pair, modules, tower = sl2_tower()
    fixtures.append(tower)
    fx = gl_un_tn(2)
    fixtures.append(build_tower(fx.pair, fx.conn_mult, depth=4))
    fixtures.append(build_tower(fx.pair, fx.conn_zero, depth=4))
    for seed in (1, 4):
        rpair = random_pair(seed)
        fixtures.append(build_tower(
            rpair, random_extension(rpair, rpair.quotient_module(), seed + 1),
            depth=4))
    for tower_ in fixtures:
        cap = 1 if tower_.pair.dim_d > 4 else 2
        for name, ok, witness in check_proof_identities(tower_, cap):
            assert ok, (name, witness)


def test_symmetry_and_torsion_witness():
    fx = gl_un_tn(2)
    mult = symmetry_report(build_tower(fx.pair, fx.conn_mult, depth=4))
    assert mult["is_symmetric_tower"]
    zero_tower = build_tower(fx.pair, fx.conn_zero, depth=4)
    report = symmetry_report(zero_tower)
    assert not report["is_symmetric_tower"]
    assert not report[2]["fully_symmetric"]
    # the defect is exactly the differential of the torsion
    st = zero_tower.st
    nb = fx.pair.dim_b
    beta_cochain = Cochain(fx.pair, fx.module_b, 0, 2)
    for b1 in range(nb):
        for b2 in range(nb):
            for out in range(nb):
                beta_cochain.set((), (b1, b2), out, st.beta[b1][b2][out])
    assert not beta_cochain.is_zero()
    defect = zero_tower.r[2] - zero_tower.r[2].permute_b_args((1, 0))
    assert defect == ce_diff(beta_cochain)


def test_matched_closed_form_oracle():
    fx = gl_un_tn(2)
    tower = build_tower(fx.pair, fx.conn_zero, depth=4)
    for n in (2, 3, 4):
        assert matched_zero_gamma_closed_form(tower, n) == tower.r[n]
    data = affine_bialgebra()
    bpair = matched_sum(data)
    btower = build_tower(bpair, extend_by_zero(bpair, bpair.quotient_module()),
                         depth=4)
    for n in (2, 3, 4):
        assert matched_zero_gamma_closed_form(btower, n) == btower.r[n]


def test_unit_algebra_extension_is_identity():
    pair, modules, tower = sl2_tower()
    ext = AlgebraExtension(tower, unit_algebra(pair.dim_g))
    for gt1 in [(), (0,)]:
        for gt2 in [(), (1,)]:
            v1 = GradedElement.basis(pair, 1, gt1, 0, 1, 0)
            v2 = GradedElement.basis(pair, 1, gt2, 0, 1, 0)
            plain = lambda_k(tower, [GradedElement.basis(pair, 1, gt1, 0),
                                     GradedElement.basis(pair, 1, gt2, 0)])
            extended = ext.lambda_k([v1, v2])
            assert {(k[0], k[1]): v for k, v in extended.terms.items()} == \
                plain.terms


def test_dual_numbers_square_to_zero():
    pair, modules, tower = sl2_tower()
    algebra = dual_numbers_algebra(pair.dim_g)
    ext = AlgebraExtension(tower, algebra)
    v_eps = GradedElement.basis(pair, 1, (), 0, 2, 1)
    assert ext.lambda_k([v_eps, v_eps]).is_zero()
    # one epsilon survives against the unit
    v_one = GradedElement.basis(pair, 1, (), 0, 2, 0)
    out = ext.lambda_k([v_one, v_eps])
    assert out.terms == {((1,), 0, 1): g(2)}


def test_extension_reproduces_binary_cocycle_formula():
    # Oracle: the two-argument bracket of classes, written directly from the
    # obstruction cocycle with the (-1)^(deg of second form) normalization.
    pair, modules, tower = sl2_tower()
    algebra = weighted_dual_numbers(pair, [1, 0])
    ext = AlgebraExtension(tower, algebra)
    cocycle = atiyah_cocycle(tower.conn_b)
    nb = pair.dim_b

    def binary_formula(gt1, b1, c1, gt2, b2, c2):
        out = {}
        sign = -1 if len(gt2) % 2 else 1
        step = merge_sign(gt1, gt2)
        if step is None:
            return out
        s0, merged = step
        cprod = algebra.product_basis(c1, c2)
        for a in range(pair.dim_g):
            for b_out in range(nb):
                coeff = cocycle.get((a,), (b1,), b_out * nb + b2)
                if coeff.is_zero():
                    continue
                ins = merge_sign(merged, (a,))
                if ins is None:
                    continue
                s1, final = ins
                total = sign * s0 * s1
                for t, cv in enumerate(cprod):
                    if not cv.is_zero():
                        term = coeff * cv
                        key = (final, b_out, t)
                        out[key] = out.get(key, ZERO) + \
                            (term if total > 0 else -term)
        return {k: v for k, v in out.items() if not v.is_zero()}

    for gt1 in [(), (0,), (1,), (0, 1)]:
        for gt2 in [(), (0,), (1,)]:
            for c1 in (0, 1):
                for c2 in (0, 1):
                    v1 = GradedElement.basis(pair, 1, gt1, 0, 2, c1)
                    v2 = GradedElement.basis(pair, 1, gt2, 0, 2, c2)
                    got = ext.lambda_k([v1, v2])
                    expected = binary_formula(gt1, 0, c1, gt2, 0, c2)
                    # printed arity-2 bracket = (-1)^(deg of first form) times
                    # the class-level binary formula
                    sign = -1 if len(gt1) % 2 else 1
                    scaled = {k: (v if sign > 0 else -v)
                              for k, v in expected.items()}
                    assert got.terms == scaled


def test_leibniz_sweep_with_algebra():
    pair, modules, tower = sl2_tower()
    algebra = weighted_dual_numbers(pair, [1, 0])
    report = verify_leibniz(tower, 3, 1, algebra=algebra)
    assert report.ok
    conn_b = extend_by_zero(pair, modules["B"])
    mtower = build_tower(pair, conn_b, depth=3, module=modules["B_dual"],
                         conn_e=extend_by_zero(pair, modules["B_dual"]))
    assert verify_module(mtower, 2, 1, algebra=algebra).ok


def test_bad_algebra_rejected():
    pair, modules, tower = sl2_tower()
    bad = weighted_dual_numbers(pair, [0, 1])  # not flat for this subalgebra
    with pytest.raises(NotCommutativeAlgebra):
        AlgebraExtension(tower, bad)
    with pytest.raises(NotCommutativeAlgebra):
        verify_leibniz(tower, 2, 1, algebra=bad)


def test_thread_env_var_keeps_reports_identical(monkeypatch):
    pair, modules, tower = sl2_tower()
    baseline = verify_leibniz(tower, 3, 2)
    monkeypatch.setenv("LIEPAIR_THREADS", "3")
    threaded = verify_leibniz(tower, 3, 2)
    assert threaded.checked == baseline.checked
    assert threaded.violations == baseline.violations


def test_symmetric_tower_brackets_graded_symmetric():
    # when every tensor level is totally symmetric, the arity-k bracket obeys
    # lambda_k(permuted args) = koszul_sign * lambda_k(args), so the
    # antisymmetrized identities coincide with the plain ones
    from itertools import permutations

    from liepairs.multilinear import koszul_sign

    fx = gl_un_tn(2)
    tower = build_tower(fx.pair, fx.conn_mult, depth=3)
    assert symmetry_report(tower)["is_symmetric_tower"]
    samples = [
        [((), 0), ((), 1), ((2,), 2)],
        [((0,), 0), ((), 3), ((), 1)],
        [((0,), 1), ((1,), 2), ((), 0)],
    ]
    for keys in samples:
        args = [GradedElement.basis(fx.pair, 4, gt, b) for gt, b in keys]
        degs = [len(gt) for gt, _ in keys]
        base = lambda_k(tower, args)
        for perm in permutations(range(3)):
            permuted = lambda_k(tower, [args[p] for p in perm])
            sign = koszul_sign(perm, degs)
            assert permuted == (base if sign > 0 else -base)
        # re-run the identity on permuted tuples: every orbit member has zero
        # residual, hence so does any koszul-weighted combination
        weighted = GradedElement(fx.pair, 4)
        for perm in permutations(range(3)):
            res = leibniz_residual(tower, [args[p] for p in perm])
            assert res.is_zero()
            sign = koszul_sign(perm, degs)
            weighted = weighted + (res if sign > 0 else -res)
        assert weighted.is_zero()


def test_theta_witness_formula():
    fx = gl_un_tn(2)
    tower = build_tower(fx.pair, fx.conn_zero, depth=2)
    v1 = GradedElement.basis(fx.pair, 4, (0,), 0)
    v2 = GradedElement.basis(fx.pair, 4, (), 1)
    out = theta_witness(tower, v1, v2)
    expected = {}
    for b_out, x in enumerate(tower.st.beta[0][1]):
        if not x.is_zero():
            expected[((0,), b_out)] = -x  # (-1)^(deg of first form) = -1
    assert out.terms == expected
