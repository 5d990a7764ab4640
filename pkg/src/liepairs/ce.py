"""Cochain complex of the subalgebra with values in (tensor powers of B*) x E.

A Cochain of bidegree (k, l) stores a dense coefficient tensor over
(sorted exterior multi-index of g, length-l tuple of B indices, E index).
The differential follows the usual alternating-sum formula, with the module
action on the value and on every B-slot folded in.
"""

from __future__ import annotations

from .lie_core import GModule, LiePair
from .linalg import Matrix, nullspace_basis, rref, solve, vec_is_zero
from .multilinear import (
    exterior_basis,
    exterior_index,
    insert_with_sign,
    tensor_index,
    tensor_tuples,
)
from .scalars import GaussScalar, ZERO


class Cochain:
    """Element of Lambda^k g* (x) (B*)^(x l) (x) E, dense over the canonical basis."""

    __slots__ = ("pair", "module", "k", "l", "data")

    def __init__(self, pair: LiePair, module: GModule, k: int, l: int, data=None):
        self.pair = pair
        self.module = module
        self.k = k
        self.l = l
        size = self.g_count() * self.b_count() * module.dim
        if data is None:
            data = [ZERO] * size
        if len(data) != size:
            raise ValueError("coefficient tensor has wrong shape")
        self.data = data

    # -- index plumbing -------------------------------------------------------

    def g_basis(self):
        return exterior_basis(self.pair.dim_g, self.k)

    def g_count(self):
        return len(exterior_basis(self.pair.dim_g, self.k))

    def b_count(self):
        return self.pair.dim_b ** self.l

    def flat_index(self, gi: int, bi: int, e: int) -> int:
        return (gi * self.b_count() + bi) * self.module.dim + e

    def get(self, g_tuple, b_tuple, e):
        gi = exterior_index(self.pair.dim_g, self.k)[tuple(g_tuple)]
        bi = tensor_index(tuple(b_tuple), self.pair.dim_b)
        return self.data[self.flat_index(gi, bi, e)]

    def set(self, g_tuple, b_tuple, e, value):
        gi = exterior_index(self.pair.dim_g, self.k)[tuple(g_tuple)]
        bi = tensor_index(tuple(b_tuple), self.pair.dim_b)
        self.data[self.flat_index(gi, bi, e)] = value

    def iter_nonzero(self):
        """Yields (g_tuple, b_tuple, e, coeff) over nonzero entries."""
        gb = self.g_basis()
        bts = tensor_tuples(self.pair.dim_b, self.l)
        dim_e = self.module.dim
        pos = 0
        for gt in gb:
            for bt in bts:
                for e in range(dim_e):
                    c = self.data[pos]
                    if not c.is_zero():
                        yield gt, bt, e, c
                    pos += 1

    # -- structure ------------------------------------------------------------

    def copy(self):
        return Cochain(self.pair, self.module, self.k, self.l, list(self.data))

    def is_zero(self):
        return all(x.is_zero() for x in self.data)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.k, self.l, self.data) == (other.k, other.l, other.data)

    def __hash__(self):
        return hash((self.k, self.l, tuple(self.data)))

    def __add__(self, other):
        self._match(other)
        return Cochain(self.pair, self.module, self.k, self.l,
                       [a + b for a, b in zip(self.data, other.data)])

    def __sub__(self, other):
        self._match(other)
        return Cochain(self.pair, self.module, self.k, self.l,
                       [a - b for a, b in zip(self.data, other.data)])

    def __neg__(self):
        return Cochain(self.pair, self.module, self.k, self.l,
                       [-a for a in self.data])

    def scale(self, s):
        return Cochain(self.pair, self.module, self.k, self.l,
                       [s * a for a in self.data])

    def _match(self, other):
        if self.k != other.k or self.l != other.l \
                or self.module.dim != other.module.dim:
            raise ValueError("cochain shape mismatch")

    def first_nonzero(self):
        for gt, bt, e, c in self.iter_nonzero():
            return {"g": gt, "b": bt, "e": e, "value": str(c)}
        return None

    def permute_b_args(self, perm):
        """New cochain w'(...; b_1..b_l) = w(...; b_perm(1)..b_perm(l))."""
        if len(perm) != self.l:
            raise ValueError("permutation arity mismatch")
        out = Cochain(self.pair, self.module, self.k, self.l)
        nb = self.pair.dim_b
        bts = tensor_tuples(nb, self.l)
        dim_e = self.module.dim
        for gi in range(self.g_count()):
            for bi, bt in enumerate(bts):
                src = tensor_index(tuple(bt[p] for p in perm), nb)
                for e in range(dim_e):
                    out.data[out.flat_index(gi, bi, e)] = \
                        self.data[self.flat_index(gi, src, e)]
        return out


def ce_diff(w: Cochain) -> Cochain:
    """Exact degree-(k+1) image of the Chevalley-Eilenberg differential."""
    pair = w.pair
    n, nb, dim_e = pair.dim_g, pair.dim_b, w.module.dim
    out = Cochain(pair, w.module, w.k + 1, w.l)
    if w.k + 1 > n:
        return out
    rho_b = pair.quotient_module().action
    in_index = exterior_index(n, w.k)
    bts = tensor_tuples(nb, w.l)
    b_radix = nb ** w.l

    for J in exterior_basis(n, w.k + 1):
        out_gi = exterior_index(n, w.k + 1)[J]
        for m, a in enumerate(J):
            rest = J[:m] + J[m + 1 :]
            gi = in_index[rest]
            sign = -1 if m % 2 else 1
            rho_e = w.module.action[a]
            for bi, bt in enumerate(bts):
                base_in = (gi * b_radix + bi) * dim_e
                base_out = (out_gi * b_radix + bi) * dim_e
                # action on the value
                for e_out in range(dim_e):
                    acc = ZERO
                    row = e_out * dim_e
                    for e_in in range(dim_e):
                        x = rho_e.data[row + e_in]
                        if not x.is_zero():
                            v = w.data[base_in + e_in]
                            if not v.is_zero():
                                acc = acc + x * v
                    if not acc.is_zero():
                        out.data[base_out + e_out] = out.data[base_out + e_out] + \
                            (acc if sign > 0 else -acc)
                # minus the action routed through each B-slot
                for slot in range(w.l):
                    old = bt[slot]
                    for new in range(nb):
                        x = rho_b[a][new, old]
                        if x.is_zero():
                            continue
                        bt2 = bt[:slot] + (new,) + bt[slot + 1 :]
                        src = (gi * b_radix + tensor_index(bt2, nb)) * dim_e
                        for e in range(dim_e):
                            v = w.data[src + e]
                            if not v.is_zero():
                                term = x * v
                                out.data[base_out + e] = out.data[base_out + e] - \
                                    (term if sign > 0 else -term)
        # bracket terms
        for m in range(len(J)):
            for p in range(m + 1, len(J)):
                sign_mp = -1 if (m + p) % 2 else 1
                rest = tuple(x for idx, x in enumerate(J) if idx not in (m, p))
                br = pair.d.c[J[m]][J[p]]
                for s in range(n):  # only subalgebra components can be nonzero
                    coeff = br[s]
                    if coeff.is_zero():
                        continue
                    ins = insert_with_sign(rest, s)
                    if ins is None:
                        continue
                    sgn, key = ins
                    gi = in_index[key]
                    total = sign_mp * sgn
                    for bi in range(b_radix):
                        src = (gi * b_radix + bi) * dim_e
                        dst = (out_gi * b_radix + bi) * dim_e
                        for e in range(dim_e):
                            v = w.data[src + e]
                            if not v.is_zero():
                                term = coeff * v
                                out.data[dst + e] = out.data[dst + e] + \
                                    (term if total > 0 else -term)
    return out


def is_cocycle(w: Cochain) -> bool:
    return ce_diff(w).is_zero()


def diff_matrix(pair: LiePair, module: GModule, k: int, l: int = 0) -> Matrix:
    """Matrix of the degree-k differential w.r.t. the canonical cochain bases."""
    src = Cochain(pair, module, k, l)
    src_dim = len(src.data)
    probe = ce_diff(src)
    rows = len(probe.data)
    mat = Matrix.zeros(rows, src_dim)
    for col in range(src_dim):
        basis = Cochain(pair, module, k, l)
        basis.data[col] = GaussScalar(1)
        image = ce_diff(basis)
        for r, x in enumerate(image.data):
            if not x.is_zero():
                mat.data[r * src_dim + col] = x
    return mat


def coboundary_primitive(w: Cochain):
    """A deterministic phi with d(phi) = w, or None when w is not exact."""
    if w.k == 0:
        return None
    mat = diff_matrix(w.pair, w.module, w.k - 1, w.l)
    x = solve(mat, w.data)
    if x is None:
        return None
    return Cochain(w.pair, w.module, w.k - 1, w.l, x)


def cohomology_dim(pair: LiePair, module: GModule, k: int, l: int = 0) -> int:
    """dim ker(d_k) - rank(d_(k-1))."""
    if not 0 <= k <= pair.dim_g:
        raise ValueError("degree out of range")
    d_k = diff_matrix(pair, module, k, l)
    kernel = d_k.cols - rref(d_k)[2]
    if k == 0:
        return kernel
    d_prev = diff_matrix(pair, module, k - 1, l)
    return kernel - rref(d_prev)[2]


def cohomology_representatives(pair: LiePair, module: GModule, k: int, l: int = 0):
    """(dimension, representative cochains) with a deterministic rref-based choice.

    Representatives are the kernel basis vectors that add new pivots once the
    coboundary space has been rref-reduced.
    """
    d_k = diff_matrix(pair, module, k, l)
    kernel = nullspace_basis(d_k)
    image_rows = []
    if k > 0:
        d_prev = diff_matrix(pair, module, k - 1, l)
        src_dim = d_prev.cols
        for col in range(src_dim):
            vec = d_prev.col(col)
            if not vec_is_zero(vec):
                image_rows.append(vec)
    reps = []
    rows = list(image_rows)
    current_rank = rref(Matrix.from_rows(rows))[2] if rows else 0
    for v in kernel:
        candidate = rows + [v]
        new_rank = rref(Matrix.from_rows(candidate))[2]
        if new_rank > current_rank:
            reps.append(Cochain(pair, module, k, l, list(v)))
            rows = candidate
            current_rank = new_rank
    return len(reps), reps


def euler_characteristic(pair: LiePair, module: GModule, l: int = 0) -> int:
    total = 0
    for k in range(pair.dim_g + 1):
        h = cohomology_dim(pair, module, k, l)
        total += h if k % 2 == 0 else -h
    return total
