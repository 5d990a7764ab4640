"""Connections extending a module action, curvature, obstruction cocycles,
scalar characteristic cochains and the Todd cochain.

The transcendental prefactor of the scalar classes is never folded into the
coefficients: it is reported as a symbolic string next to an exact tensor.
"""

from __future__ import annotations

from fractions import Fraction

from .ce import Cochain, coboundary_primitive, is_cocycle
from .lie_core import (
    GModule,
    LiePair,
    Report,
    direct_sum_module,
    dual_module,
    end_module,
    exterior_power_module,
)
from .linalg import Matrix
from .multilinear import exterior_index, merge_sign
from .scalars import GaussScalar


class NotACocycle(Exception):
    """Internal invariant broke: an output guaranteed closed failed the check."""


class Connection:
    """Linear extension of the subalgebra action to the whole algebra.

    ``nabla[x]`` is the End(E) matrix of the covariant derivative along the
    x-th basis vector of d; the first dim_g slots must equal the module action.
    """

    __slots__ = ("pair", "module", "nabla")

    def __init__(self, pair: LiePair, module: GModule, nabla):
        self.pair = pair
        self.module = module
        self.nabla = list(nabla)
        if len(self.nabla) != pair.dim_d:
            raise ValueError("need one matrix per basis vector of d")
        for x, mat in enumerate(self.nabla):
            if mat.rows != module.dim or mat.cols != module.dim:
                raise ValueError("connection matrices must match the module")
        for a in range(pair.dim_g):
            if not (self.nabla[a] - module.action[a]).is_zero():
                raise ValueError(
                    "connection does not extend the action at slot %d" % a)


def extend_by_zero(pair: LiePair, module: GModule) -> Connection:
    """The canonical extension that kills the complement directions."""
    zero = Matrix.zeros(module.dim, module.dim)
    return Connection(pair, module,
                      list(module.action) + [zero] * pair.dim_b)


def curvature(conn: Connection, i: int, j: int) -> Matrix:
    """R(x_i, x_j) = [nabla_i, nabla_j] - nabla_([x_i, x_j])."""
    out = conn.nabla[i].commutator(conn.nabla[j])
    for s, c in enumerate(conn.pair.d.c[i][j]):
        if not c.is_zero():
            out = out - conn.nabla[s].scale(c)
    return out


def atiyah_cocycle(conn: Connection) -> Cochain:
    """The obstruction cochain (a, b) -> R(a, j(b)) in degree (1, 1), End(E)-valued.

    Raises NotACocycle if the output fails the closedness check, which would
    signal a bug in this library rather than bad input.
    """
    pair, module = conn.pair, conn.module
    endo = end_module(module)
    out = Cochain(pair, endo, 1, 1)
    for a in range(pair.dim_g):
        for b in range(pair.dim_b):
            r = curvature(conn, a, pair.dim_g + b)
            for row in range(module.dim):
                for col in range(module.dim):
                    x = r[row, col]
                    if not x.is_zero():
                        out.set((a,), (b,), row * module.dim + col, x)
    if not is_cocycle(out):
        raise NotACocycle("curvature cochain is not closed")
    return out


def compatibility_report(conn: Connection) -> Report:
    """Mixed-curvature check R(a, x) = 0 on all basis pairs a in g, x in d."""
    report = Report("compatibility")
    for a in range(conn.pair.dim_g):
        for x in range(conn.pair.dim_d):
            r = curvature(conn, a, x)
            if not r.is_zero():
                pos = next(i for i, v in enumerate(r.data) if not v.is_zero())
                report.add("mixed_curvature", (a, x, pos), r.data[pos])
    return report


class AtiyahClassReport:
    """Outcome of the obstruction computation for the canonical extension."""

    __slots__ = ("vanishes", "cocycle", "primitive", "repaired")

    def __init__(self, vanishes, cocycle, primitive, repaired):
        self.vanishes = vanishes
        self.cocycle = cocycle
        self.primitive = primitive
        self.repaired = repaired


def connection_minus_section(conn: Connection, phi: Cochain) -> Connection:
    """nabla' = nabla - phi for a section phi of B* (x) End(E)."""
    module = conn.module
    nabla = list(conn.nabla)
    for b in range(conn.pair.dim_b):
        delta = Matrix.zeros(module.dim, module.dim)
        for row in range(module.dim):
            for col in range(module.dim):
                delta.data[row * module.dim + col] = \
                    phi.get((), (b,), row * module.dim + col)
        nabla[conn.pair.dim_g + b] = nabla[conn.pair.dim_g + b] - delta
    return Connection(conn.pair, module, nabla)


def atiyah_class(pair: LiePair, module: GModule,
                 conn: Connection = None) -> AtiyahClassReport:
    """Obstruction class data: representative cocycle, primitive and repair.

    When a primitive phi exists the repaired connection nabla - phi is
    compatible, which the caller can re-verify with compatibility_report.
    """
    if conn is None:
        conn = extend_by_zero(pair, module)
    cocycle = atiyah_cocycle(conn)
    primitive = coboundary_primitive(cocycle)
    repaired = None
    if primitive is not None:
        repaired = connection_minus_section(conn, primitive)
    return AtiyahClassReport(primitive is not None, cocycle, primitive, repaired)


def end_connection(conn: Connection) -> Connection:
    """Induced connection on End(E): the commutator with each nabla matrix."""
    module = conn.module
    endo = end_module(module)
    dim = module.dim
    mats = []
    for x in range(conn.pair.dim_d):
        rho = conn.nabla[x]
        mat = Matrix.zeros(dim * dim, dim * dim)
        for r in range(dim):
            for s in range(dim):
                col = r * dim + s
                for k in range(dim):
                    v = rho[k, r]
                    if not v.is_zero():
                        mat.data[(k * dim + s) * (dim * dim) + col] = \
                            mat.data[(k * dim + s) * (dim * dim) + col] + v
                for k in range(dim):
                    v = rho[s, k]
                    if not v.is_zero():
                        mat.data[(r * dim + k) * (dim * dim) + col] = \
                            mat.data[(r * dim + k) * (dim * dim) + col] - v
        mats.append(mat)
    return Connection(conn.pair, endo, mats)


def direct_sum_connection(c1: Connection, c2: Connection) -> Connection:
    """Block-diagonal connection on the direct sum module."""
    if c1.pair is not c2.pair:
        raise ValueError("connections live over different pairs")
    module = direct_sum_module(c1.module, c2.module)
    dim = module.dim
    mats = []
    for x in range(c1.pair.dim_d):
        mat = Matrix.zeros(dim, dim)
        for i in range(c1.module.dim):
            for j in range(c1.module.dim):
                mat.data[i * dim + j] = c1.nabla[x][i, j]
        for i in range(c2.module.dim):
            for j in range(c2.module.dim):
                mat.data[(c1.module.dim + i) * dim + (c1.module.dim + j)] = \
                    c2.nabla[x][i, j]
        mats.append(mat)
    return Connection(c1.pair, module, mats)


# -- bigraded scalar coefficients ---------------------------------------------


class BiForm:
    """Element of the bigraded commutative coefficient algebra
    Lambda g* (x) Lambda B*, with the Koszul sign of the graded tensor product.

    Entries built from the obstruction cocycle have equal bidegrees and are
    therefore even, so everything in the characteristic-class calculus commutes.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms or {})

    @classmethod
    def constant(cls, value):
        value = value if isinstance(value, GaussScalar) else GaussScalar(value)
        if value.is_zero():
            return cls()
        return cls({((), ()): value})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, BiForm):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, val in other.terms.items():
            acc = out.get(key)
            acc = val if acc is None else acc + val
            if acc.is_zero():
                out.pop(key, None)
            else:
                out[key] = acc
        return BiForm(out)

    def __sub__(self, other):
        return self + other.scale(GaussScalar(-1))

    def scale(self, s):
        s = s if isinstance(s, GaussScalar) else GaussScalar(s)
        if s.is_zero():
            return BiForm()
        return BiForm({k: s * v for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for (g1, b1), v1 in self.terms.items():
            for (g2, b2), v2 in other.terms.items():
                gm = merge_sign(g1, g2)
                if gm is None:
                    continue
                bm = merge_sign(b1, b2)
                if bm is None:
                    continue
                sign = gm[0] * bm[0]
                if (len(b1) * len(g2)) % 2:
                    sign = -sign
                key = (gm[1], bm[1])
                term = v1 * v2
                if sign < 0:
                    term = -term
                acc = out.get(key)
                acc = term if acc is None else acc + term
                if acc.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = acc
        return BiForm(out)

    def component(self, gdeg, bdeg):
        return BiForm({k: v for k, v in self.terms.items()
                       if len(k[0]) == gdeg and len(k[1]) == bdeg})

    def max_degree(self):
        return max((len(k[0]) for k in self.terms), default=0)


def _bf_mat_mul(a, b):
    n = len(a)
    return [[_bf_dot(a, b, i, j, n) for j in range(n)] for i in range(n)]


def _bf_dot(a, b, i, j, n):
    acc = BiForm()
    for k in range(n):
        if not a[i][k].is_zero() and not b[k][j].is_zero():
            acc = acc + a[i][k] * b[k][j]
    return acc


def _bf_mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _bf_mat_scale(a, s):
    return [[x.scale(s) for x in row] for row in a]


def _bf_identity(n):
    return [[BiForm.constant(1) if i == j else BiForm()
             for j in range(n)] for i in range(n)]


def _bf_trace(a):
    acc = BiForm()
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def obstruction_biform_matrix(conn: Connection):
    """The obstruction cocycle as an End(E)-matrix over the bigraded algebra."""
    cocycle = atiyah_cocycle(conn)
    dim = conn.module.dim
    mat = [[BiForm() for _ in range(dim)] for _ in range(dim)]
    for (a,), (b,), e, val in cocycle.iter_nonzero():
        row, col = divmod(e, dim)
        mat[row][col] = mat[row][col] + BiForm({(((a,)), ((b,))): val})
    return mat


# Coefficients of x / (1 - exp(-x)) as exact rationals, through order 8.
TODD_SERIES = [
    Fraction(1),
    Fraction(1, 2),
    Fraction(1, 12),
    Fraction(0),
    Fraction(-1, 720),
    Fraction(0),
    Fraction(1, 30240),
    Fraction(0),
    Fraction(-1, 1209600),
]


def _diagonal_cochain(pair: LiePair, bi_form: BiForm, k: int) -> Cochain:
    """Package the (k, k)-component of a BiForm as a Lambda^k B*-valued cochain."""
    b_dual = dual_module(pair.quotient_module())
    module = exterior_power_module(b_dual, k)
    out = Cochain(pair, module, k, 0)
    b_index = exterior_index(pair.dim_b, k)
    for (gt, bt), val in bi_form.component(k, k).terms.items():
        out.set(gt, (), b_index[bt], val)
    return out


class ScalarClass:
    """tr(alpha^k) as an exact cochain plus the symbolic prefactor."""

    __slots__ = ("k", "cochain", "prefactor")

    def __init__(self, k, cochain, prefactor):
        self.k = k
        self.cochain = cochain
        self.prefactor = prefactor


def scalar_class(pair: LiePair, module: GModule, k: int,
                 conn: Connection = None) -> ScalarClass:
    """Exact trace-power cochain in Lambda^k g* (x) Lambda^k B*.

    The transcendental factor (1/k!) (i/2pi)^k stays symbolic.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if conn is None:
        conn = extend_by_zero(pair, module)
    alpha = obstruction_biform_matrix(conn)
    power = _bf_identity(module.dim)
    for _ in range(k):
        power = _bf_mat_mul(power, alpha)
    trace = _bf_trace(power)
    cochain = _diagonal_cochain(pair, trace, k)
    if not is_cocycle(cochain):
        raise NotACocycle("scalar class cochain is not closed")
    return ScalarClass(k, cochain, "(1/%d!)*(i/(2*pi))^%d" % (k, k))


class ToddClass:
    """Inhomogeneous Todd cochain: one exact component per diagonal bidegree."""

    __slots__ = ("components", "biform")

    def __init__(self, components, biform):
        self.components = components
        self.biform = biform


def todd_biform(conn: Connection) -> BiForm:
    """det(alpha / (1 - exp(-alpha))) via exp(trace(log(...))), exact."""
    pair = conn.pair
    depth = min(pair.dim_g, pair.dim_b)
    if depth >= len(TODD_SERIES):
        raise ValueError("Todd series coefficients pinned only through order 8")
    dim = conn.module.dim
    alpha = obstruction_biform_matrix(conn)
    series = _bf_identity(dim)
    power = _bf_identity(dim)
    for m in range(1, depth + 1):
        power = _bf_mat_mul(power, alpha)
        if TODD_SERIES[m] != 0:
            series = _bf_mat_add(series, _bf_mat_scale(power, GaussScalar(TODD_SERIES[m])))
    # log(I + N) with N nilpotent of order <= depth
    nilpotent = _bf_mat_add(series, _bf_mat_scale(_bf_identity(dim), GaussScalar(-1)))
    log_trace = BiForm()
    npower = _bf_identity(dim)
    for m in range(1, depth + 1):
        npower = _bf_mat_mul(npower, nilpotent)
        coeff = Fraction((-1) ** (m + 1), m)
        log_trace = log_trace + _bf_trace(npower).scale(GaussScalar(coeff))
    result = BiForm.constant(1)
    tpower = BiForm.constant(1)
    factorial = 1
    for m in range(1, depth + 1):
        tpower = tpower * log_trace
        factorial *= m
        result = result + tpower.scale(GaussScalar(Fraction(1, factorial)))
    return result


def todd_class(pair: LiePair, module: GModule,
               conn: Connection = None) -> ToddClass:
    if conn is None:
        conn = extend_by_zero(pair, module)
    biform = todd_biform(conn)
    depth = min(pair.dim_g, pair.dim_b)
    components = {}
    for k in range(depth + 1):
        cochain = _diagonal_cochain(pair, biform, k)
        if not is_cocycle(cochain):
            raise NotACocycle("Todd component %d is not closed" % k)
        components[k] = cochain
    return ToddClass(components, biform)
