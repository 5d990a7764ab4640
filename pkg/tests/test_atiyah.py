import pytest

from liepairs.atiyah import (
    Connection,
    atiyah_class,
    atiyah_cocycle,
    compatibility_report,
    curvature,
    direct_sum_connection,
    end_connection,
    extend_by_zero,
    scalar_class,
    todd_biform,
    todd_class,
)
from liepairs.ce import Cochain, ce_diff, is_cocycle
from liepairs.lie_core import direct_sum_module, trivial_module
from liepairs.linalg import Matrix
from liepairs.scalars import GaussScalar, ONE, ZERO
from liepairs.zoo import (
    gl_un_tn,
    heisenberg_pair,
    random_extension,
    random_module,
    random_pair,
    sl2_borel_pair,
    sl2_pair,
)


def g(x):
    return GaussScalar(x)


def test_extend_by_zero_sl2():
    pair, modules = sl2_pair()
    conn = extend_by_zero(pair, modules["B"])
    assert conn.nabla[0][0, 0] == g(-2)
    assert conn.nabla[1].is_zero()
    assert conn.nabla[2].is_zero()


def test_connection_must_extend_action():
    pair, modules = sl2_pair()
    bad = [Matrix.zeros(1, 1)] * 3
    with pytest.raises(ValueError):
        Connection(pair, modules["B"], bad)


def test_curvature_sl2_goldens():
    pair, modules = sl2_pair()
    conn = extend_by_zero(pair, modules["B"])
    # flat on the subalgebra
    assert curvature(conn, 0, 1).is_zero()
    # R(e, f) = -nabla_[e,f] = -nabla_h = (2)
    assert curvature(conn, 1, 2)[0, 0] == g(2)
    # R(h, f) = 0
    assert curvature(conn, 0, 2).is_zero()


def test_curvature_vanishes_on_subalgebra_for_random_extensions():
    for seed in (1, 5, 9):
        pair = random_pair(seed)
        module = pair.quotient_module()
        conn = random_extension(pair, module, seed + 100)
        for a in range(pair.dim_g):
            for a2 in range(pair.dim_g):
                assert curvature(conn, a, a2).is_zero()


def test_atiyah_cocycle_sl2_golden():
    pair, modules = sl2_pair()
    conn = extend_by_zero(pair, modules["B"])
    cocycle = atiyah_cocycle(conn)
    # only entry: alpha(e; class of f) = multiplication by 2
    assert cocycle.get((1,), (0,), 0) == g(2)
    assert cocycle.get((0,), (0,), 0) == ZERO
    assert is_cocycle(cocycle)


def test_compatible_connection_has_zero_cocycle():
    pair = heisenberg_pair()
    conn = extend_by_zero(pair, pair.quotient_module())
    assert atiyah_cocycle(conn).is_zero()
    assert compatibility_report(conn).ok


def test_atiyah_class_sl2_does_not_vanish():
    pair, modules = sl2_pair()
    report = atiyah_class(pair, modules["B"])
    assert not report.vanishes
    assert report.primitive is None and report.repaired is None
    assert is_cocycle(report.cocycle)


def test_trivial_module_class_vanishes():
    pair, _ = sl2_pair()
    report = atiyah_class(pair, trivial_module(2, 1))
    assert report.vanishes
    assert compatibility_report(report.repaired).ok


def test_two_extensions_differ_by_exact_term():
    for seed in (2, 3, 7):
        pair = random_pair(seed)
        module = pair.quotient_module()
        c1 = extend_by_zero(pair, module)
        c2 = random_extension(pair, module, seed + 50)
        w1 = atiyah_cocycle(c1)
        w2 = atiyah_cocycle(c2)
        # phi(b) = nabla1_{j(b)} - nabla2_{j(b)} is the difference section
        phi = Cochain(pair, w1.module, 0, 1)
        for b in range(pair.dim_b):
            diff = c1.nabla[pair.dim_g + b] - c2.nabla[pair.dim_g + b]
            for row in range(module.dim):
                for col in range(module.dim):
                    phi.set((), (b,), row * module.dim + col, diff[row, col])
        assert ce_diff(phi) == (w1 - w2)


def test_repaired_connection_is_compatible():
    # rank-one subalgebra acting with nonzero weights: obstruction cohomology
    # vanishes, so a random extension must be repairable.
    pair = sl2_borel_pair()
    module = pair.quotient_module()
    conn = random_extension(pair, module, 11)
    report = atiyah_class(pair, module, conn)
    assert report.vanishes
    assert not report.cocycle.is_zero()
    assert compatibility_report(report.repaired).ok
    assert not compatibility_report(conn).ok


def test_end_connection_matches_commutator():
    pair, modules = sl2_pair()
    module = modules["B_dual"]
    conn = random_extension(pair, module, 4)
    econn = end_connection(conn)
    dim = module.dim
    for x in range(pair.dim_d):
        for r in range(dim):
            for s in range(dim):
                unit = Matrix.zeros(dim, dim)
                unit.data[r * dim + s] = ONE
                expected = conn.nabla[x] @ unit - unit @ conn.nabla[x]
                got = econn.nabla[x].col(r * dim + s)
                for k in range(dim):
                    for l in range(dim):
                        assert got[k * dim + l] == expected[k, l]


def test_scalar_class_sl2_golden():
    pair, modules = sl2_pair()
    first = scalar_class(pair, modules["B"], 1)
    assert first.prefactor == "(1/1!)*(i/(2*pi))^1"
    assert first.cochain.get((1,), (), 0) == g(2)
    assert first.cochain.get((0,), (), 0) == ZERO
    # exterior degree overflow: k = 2 > min(dim g, dim B) = 1
    second = scalar_class(pair, modules["B"], 2)
    assert second.cochain.is_zero()


def test_scalar_class_block_additive():
    fixture = gl_un_tn(2)
    pair = fixture.pair
    m1 = random_module(pair, 2, 21)
    m2 = trivial_module(pair.dim_g, 1)
    c1 = extend_by_zero(pair, m1)
    c2 = extend_by_zero(pair, m2)
    both = direct_sum_connection(c1, c2)
    for k in (1, 2):
        total = scalar_class(pair, direct_sum_module(m1, m2), k, both)
        parts = scalar_class(pair, m1, k, c1).cochain + \
            scalar_class(pair, m2, k, c2).cochain
        assert total.cochain == parts


def test_todd_zero_curvature_is_one():
    pair = heisenberg_pair()
    module = pair.quotient_module()
    todd = todd_class(pair, module)
    assert todd.components[0].data == [ONE]
    assert todd.components[1].is_zero()


def test_todd_one_dim_module_is_series():
    pair, modules = sl2_pair()
    todd = todd_class(pair, modules["B"])
    # degree 0 part is 1; degree 1 part is alpha/2 = e* (x) f*
    assert todd.components[0].data == [ONE]
    assert todd.components[1].get((1,), (), 0) == ONE
    assert todd.components[1].get((0,), (), 0) == ZERO


def test_todd_multiplicative_on_blocks():
    fixture = gl_un_tn(2)
    pair = fixture.pair
    m1 = random_module(pair, 2, 33)
    m2 = trivial_module(pair.dim_g, 1)
    c1 = extend_by_zero(pair, m1)
    c2 = extend_by_zero(pair, m2)
    both = direct_sum_connection(c1, c2)
    assert todd_biform(both) == todd_biform(c1) * todd_biform(c2)
    # components are cocycles and degree zero is 1
    todd = todd_class(pair, direct_sum_module(m1, m2), both)
    assert todd.components[0].data == [ONE]
    for k, comp in todd.components.items():
        assert is_cocycle(comp)


def test_scalar_and_todd_outputs_are_cocycles():
    fixture = gl_un_tn(2)
    pair = fixture.pair
    module = random_module(pair, 2, 40)
    for k in (1, 2, 3):
        scalar_class(pair, module, k)  # raises NotACocycle on failure
    todd_class(pair, module)
