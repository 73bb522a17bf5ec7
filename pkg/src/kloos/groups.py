"""Brute-force enumeration of small minus-type orthogonal groups over GF(q).

The ambient group preserves the bilinear form with Gram matrix

    J = [[0, I, 0], [I, 0, 0], [0, 0, diag(1, -eps)]],   eps a nonsquare,

written on coordinates split as (n-1) + (n-1) + 2.  Matrices are nested
tuples of int-encoded field elements, so sets and sorting work directly.

Enumerable pieces (desk scale):

* the circle group SO^-(2, q), order q + 1, and its double cover O^-(2, q);
* the subgroup Q(2n, q) of the maximal parabolic, for n = 1, 2;
* double cosets Q sigma_r Q and their reflected images at q = 3, n <= 2.

Plus exact character sums over those sets, the symmetric-block sums b_r by
literal enumeration against their closed forms, and the circle-group sum
identities.  Everything returns plain integers or CheckResults, nothing is
sampled.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .charsums import kloosterman
from .constants import CosetFamily, family_constants
from .field import Eisenstein, Field, char_sum_accumulate
from .report import CheckResult

Matrix = tuple[tuple[int, ...], ...]

Q_ENUM_MAX_N = 2
Q_ENUM_MAX_Q_N2 = 9
DOUBLE_COSET_Q = 3
BLOCK_SUM_MAX_R = 2
BLOCK_SUM_MAX_Q_R2 = 9


# -- matrix helpers ------------------------------------------------------------


def identity_matrix(size: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size))


def mat_mul(field: Field, A: Matrix, B: Matrix) -> Matrix:
    cols = tuple(zip(*B))
    out = []
    for row in A:
        new_row = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = field.add(acc, field.mul(x, y))
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def mat_transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def mat_trace(field: Field, A: Matrix) -> int:
    acc = 0
    for i in range(len(A)):
        acc = field.add(acc, A[i][i])
    return acc


def mat_det(field: Field, A: Matrix) -> int:
    """Determinant by fraction-free Gaussian elimination over the field."""
    m = [list(row) for row in A]
    size = len(m)
    det = 1
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = field.neg(det)
        det = field.mul(det, m[col][col])
        inv = field.inv(m[col][col])
        for r in range(col + 1, size):
            if m[r][col] == 0:
                continue
            factor = field.mul(m[r][col], inv)
            for c in range(col, size):
                m[r][c] = field.sub(m[r][c], field.mul(factor, m[col][c]))
    return det


# -- structured matrices --------------------------------------------------------


def form_matrix(field: Field, n: int, eps: int) -> Matrix:
    """Gram matrix J on coordinates (n-1) + (n-1) + 2."""
    size = 2 * n
    m = [[0] * size for _ in range(size)]
    for i in range(n - 1):
        m[i][n - 1 + i] = 1
        m[n - 1 + i][i] = 1
    m[size - 2][size - 2] = 1
    m[size - 1][size - 1] = field.neg(eps)
    return tuple(tuple(row) for row in m)


def reflection_matrix(field: Field, n: int) -> Matrix:
    """rho = diag(1, ..., 1, -1), the minus-type reflection."""
    size = 2 * n
    m = [[0] * size for _ in range(size)]
    for i in range(size):
        m[i][i] = 1
    m[size - 1][size - 1] = field.neg(1)
    return tuple(tuple(row) for row in m)


def sigma_matrix(field: Field, n: int, r: int) -> Matrix:
    """Involution swapping the first r coordinates of the two (n-1)-blocks."""
    if not 0 <= r <= n - 1:
        raise ValueError(f"sigma index r={r} outside 0..{n - 1}")
    size = 2 * n
    perm = list(range(size))
    for i in range(r):
        perm[i], perm[n - 1 + i] = perm[n - 1 + i], perm[i]
    m = [[0] * size for _ in range(size)]
    for i, j in enumerate(perm):
        m[i][j] = 1
    return tuple(tuple(row) for row in m)


def minus_form_2x2(field: Field, eps: int) -> Matrix:
    return ((1, 0), (0, field.neg(eps)))


@dataclass(frozen=True)
class GroupSet:
    """A finite set of matrices over a fixed field, canonically ordered."""

    label: str
    field: Field
    eps: int
    n: int
    elements: tuple[Matrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def trace_histogram(self) -> dict[int, int]:
        """Count of elements per matrix trace, dense over all of F_q."""
        counts: Counter[int] = Counter()
        for w in self.elements:
            counts[mat_trace(self.field, w)] += 1
        return {beta: counts.get(beta, 0) for beta in self.field.elements()}

    def element_set(self) -> frozenset:
        return frozenset(self.elements)


def _resolve_eps(field: Field, eps: int | None) -> int:
    if eps is None:
        return field.first_nonsquare()
    if field.is_square(eps):
        raise ValueError(f"eps={eps} is a square; the minus form needs a nonsquare")
    return eps


def _make_set(label: str, field: Field, eps: int, n: int, elements) -> GroupSet:
    return GroupSet(label, field, eps, n, tuple(sorted(set(elements))))


def enumerate_so2_minus(field: Field, eps: int | None = None) -> GroupSet:
    """SO^-(2, q) = {[[a, b eps], [b, a]] : a^2 - eps b^2 = 1}, order q + 1."""
    eps = _resolve_eps(field, eps)
    out = []
    for a in field.elements():
        for b in field.elements():
            lhs = field.sub(field.mul(a, a), field.mul(eps, field.mul(b, b)))
            if lhs == 1:
                out.append(((a, field.mul(b, eps)), (b, a)))
    gset = _make_set("SO2-", field, eps, 1, out)
    if gset.order != field.q + 1:
        raise ArithmeticError(f"|SO^-(2,{field.q})| = {gset.order}, expected {field.q + 1}")
    return gset


def enumerate_o2_minus(field: Field, eps: int | None = None) -> GroupSet:
    """O^-(2, q): the circle group and its reflected coset, order 2(q + 1)."""
    so = enumerate_so2_minus(field, eps)
    delta1 = ((1, 0), (0, field.neg(1)))
    flipped = [mat_mul(field, delta1, w) for w in so.elements]
    gset = _make_set("O2-", field, so.eps, 1, list(so.elements) + flipped)
    if gset.order != 2 * (field.q + 1):
        raise ArithmeticError(f"|O^-(2,{field.q})| = {gset.order}, expected {2 * (field.q + 1)}")
    return gset


@lru_cache(maxsize=32)
def _enumerate_q_cached(field: Field, n: int, eps: int) -> GroupSet:
    if n == 1:
        gset = enumerate_so2_minus(field, eps)
        return GroupSet("Q2", field, eps, 1, gset.elements)
    q = field.q
    circle = enumerate_so2_minus(field, eps).elements
    out = []
    for t in field.units():
        t_inv = field.inv(t)
        for i_mat in circle:
            m1 = (
                (t, 0, 0, 0),
                (0, t_inv, 0, 0),
                (0, 0, i_mat[0][0], i_mat[0][1]),
                (0, 0, i_mat[1][0], i_mat[1][1]),
            )
            for h0 in field.elements():
                for h1 in field.elements():
                    # char 3: the 1x1 symmetric-part equation 2B + h'.de.h = 0
                    # is solved by B = h'.de.h itself
                    b = field.sub(field.mul(h0, h0), field.mul(eps, field.mul(h1, h1)))
                    m2 = (
                        (1, b, field.neg(h0), field.mul(eps, h1)),
                        (0, 1, 0, 0),
                        (0, h0, 1, 0),
                        (0, h1, 0, 1),
                    )
                    out.append(mat_mul(field, m1, m2))
    gset = _make_set("Q4", field, eps, 2, out)
    expected = (q + 1) * (q - 1) * q * q
    if gset.order != expected:
        raise ArithmeticError(f"|Q(4,{q})| = {gset.order}, expected {expected}")
    return gset


def enumerate_q(field: Field, n: int, eps: int | None = None) -> GroupSet:
    """The parabolic piece Q(2n, q); n = 1 or 2, with q <= 9 when n = 2."""
    if n not in (1, 2):
        raise ValueError(f"Q enumeration supports n in {{1, 2}}, got n={n}")
    if n == 2 and field.q > Q_ENUM_MAX_Q_N2:
        raise ValueError(f"Q(4, q) enumeration capped at q <= {Q_ENUM_MAX_Q_N2}, got q={field.q}")
    return _enumerate_q_cached(field, n, _resolve_eps(field, eps))


@lru_cache(maxsize=32)
def _double_coset_cached(field: Field, family: CosetFamily, n: int, eps: int) -> GroupSet:
    r = family.sigma_index(n)
    qset = _enumerate_q_cached(field, n, eps)
    sig = sigma_matrix(field, n, r)
    left = [mat_mul(field, x, sig) for x in qset.elements]
    products = set()
    for xs in left:
        for y in qset.elements:
            products.add(mat_mul(field, xs, y))
    if family.uses_reflection:
        rho = reflection_matrix(field, n)
        products = {mat_mul(field, rho, w) for w in products}
    return _make_set(family.label, field, eps, n, products)


def double_coset(field: Field, family: CosetFamily, n: int, eps: int | None = None) -> GroupSet:
    """Literal double coset enumeration; q = 3 and n <= 2 only."""
    if field.q != DOUBLE_COSET_Q:
        raise ValueError(f"double coset enumeration is q=3 only, got q={field.q}")
    if n > 2:
        raise ValueError(f"double coset enumeration capped at n <= 2, got n={n}")
    if not family.valid_n(n):
        raise ValueError(f"n={n} is not valid for family {family.label}")
    return _double_coset_cached(field, family, n, _resolve_eps(field, eps))


def bruhat_pieces(field: Field, eps: int | None = None) -> dict[str, GroupSet]:
    """The four cells tiling the full minus-type group at n = 2, q = 3."""
    if field.q != DOUBLE_COSET_Q:
        raise ValueError("Bruhat tiling enumeration is q=3 only")
    eps = _resolve_eps(field, eps)
    qset = _enumerate_q_cached(field, 2, eps)
    rho = reflection_matrix(field, 2)
    cells: dict[str, GroupSet] = {}
    cells["Q"] = qset
    sig = sigma_matrix(field, 2, 1)
    left = [mat_mul(field, x, sig) for x in qset.elements]
    big = set()
    for xs in left:
        for y in qset.elements:
            big.add(mat_mul(field, xs, y))
    cells["QsQ"] = _make_set("QsQ", field, eps, 2, big)
    cells["rQ"] = _make_set("rQ", field, eps, 2, [mat_mul(field, rho, w) for w in qset.elements])
    cells["rQsQ"] = _make_set("rQsQ", field, eps, 2, [mat_mul(field, rho, w) for w in big])
    return cells


def check_orthogonal_relation(gset: GroupSet) -> CheckResult:
    """Every element w must satisfy w' J w = J for the minus form J."""
    field = gset.field
    J = form_matrix(field, gset.n, gset.eps)
    bad = 0
    for w in gset.elements:
        if mat_mul(field, mat_mul(field, mat_transpose(w), J), w) != J:
            bad += 1
    return CheckResult(f"orthogonal_relation({gset.label},q={field.q})", bad, 0)


# -- symmetric block sums -------------------------------------------------------


def _symmetric_nonsingular(field: Field, r: int) -> list[Matrix]:
    out = []
    if r == 1:
        for a in field.units():
            out.append(((a,),))
        return out
    for a in field.elements():
        for b in field.elements():
            for c in field.elements():
                m = ((a, b), (b, c))
                if mat_det(field, m) != 0:
                    out.append(m)
    return out


def count_symmetric_nonsingular(field: Field, r: int) -> int:
    if r not in (1, 2):
        raise ValueError("symmetric enumeration supports r in {1, 2}")
    return len(_symmetric_nonsingular(field, r))


def _quadratic_values(field: Field, B: Matrix) -> list[int]:
    """u' B u for every u in F_q^r, r = len(B)."""
    r = len(B)
    out = []
    if r == 1:
        b = B[0][0]
        for u in field.elements():
            out.append(field.mul(b, field.mul(u, u)))
        return out
    for u0 in field.elements():
        for u1 in field.elements():
            acc = field.mul(B[0][0], field.mul(u0, u0))
            acc = field.add(acc, field.mul(B[1][1], field.mul(u1, u1)))
            cross = field.mul(B[0][1], field.mul(u0, u1))
            acc = field.add(acc, field.add(cross, cross))
            out.append(acc)
    return out


def symmetric_block_sum_bruteforce(field: Field, r: int, a: int = 1, eps: int | None = None) -> int:
    """Sum of lambda(a Tr(diag(1,-eps) h' B h)) over nonsingular symmetric B
    and all h in F_q^(r x 2).

    The trace splits over the two columns of h, so each B contributes a
    product of two one-column character sums; the enumeration is still
    literal over every (B, h).
    """
    if r not in (1, 2):
        raise ValueError(f"block sum brute force supports r in {{1, 2}}, got {r}")
    if r == 2 and field.q > BLOCK_SUM_MAX_Q_R2:
        raise ValueError(f"r=2 block sum capped at q <= {BLOCK_SUM_MAX_Q_R2}, got q={field.q}")
    eps = _resolve_eps(field, eps)
    if not 1 <= a < field.q:
        raise ValueError("character scale a must be a unit")
    neg_eps_a = field.neg(field.mul(eps, a))
    total = Eisenstein(0, 0)
    for B in _symmetric_nonsingular(field, r):
        values = _quadratic_values(field, B)
        c1 = [0, 0, 0]
        c2 = [0, 0, 0]
        for v in values:
            c1[field.trace(field.mul(a, v))] += 1
            c2[field.trace(field.mul(neg_eps_a, v))] += 1
        total = total + char_sum_accumulate(c1) * char_sum_accumulate(c2)
    return total.as_int()


def symmetric_block_sum_closed(field: Field, r: int) -> int:
    """Closed form of the block sum; independent of both a and eps."""
    q = field.q
    if r % 2 == 0:
        num = r * (r + 6)
        assert num % 4 == 0
        out = q ** (num // 4)
        for j in range(1, r // 2 + 1):
            out *= q ** (2 * j - 1) - 1
        return out
    num = r * r + 4 * r - 1
    assert num % 4 == 0
    out = -(q ** (num // 4))
    for j in range(1, (r + 1) // 2 + 1):
        out *= q ** (2 * j - 1) - 1
    return out


# -- circle-group and coset character sums ---------------------------------------


def check_so2_sums(field: Field, a: int, eps: int | None = None) -> list[CheckResult]:
    """The three exact circle-group sums for psi = lambda(a .).

    sum over SO^- of psi(Tr w) = -K(psi; 1); twisting by diag(1, -1) gives
    q + 1; over all of O^- the two add up.
    """
    eps = _resolve_eps(field, eps)
    so = enumerate_so2_minus(field, eps)
    o_full = enumerate_o2_minus(field, eps)
    delta1 = ((1, 0), (0, field.neg(1)))
    k_psi = kloosterman(field, 1, scale=a)

    c = [0, 0, 0]
    for w in so.elements:
        c[field.trace(field.mul(a, mat_trace(field, w)))] += 1
    plain = char_sum_accumulate(c).as_int()

    c = [0, 0, 0]
    for w in so.elements:
        tw = mat_trace(field, mat_mul(field, delta1, w))
        c[field.trace(field.mul(a, tw))] += 1
    twisted = char_sum_accumulate(c).as_int()

    c = [0, 0, 0]
    for w in o_full.elements:
        c[field.trace(field.mul(a, mat_trace(field, w)))] += 1
    full = char_sum_accumulate(c).as_int()

    return [
        CheckResult(f"so2_sum(a={a},q={field.q})", plain, -k_psi),
        CheckResult(f"so2_twisted_sum(a={a},q={field.q})", twisted, field.q + 1),
        CheckResult(f"o2_sum(a={a},q={field.q})", full, -k_psi + field.q + 1),
    ]


def coset_character_sum(gset: GroupSet, a: int) -> int:
    """Sum of lambda(a Tr w) over the set, asserted real."""
    field = gset.field
    counts = [0, 0, 0]
    for w in gset.elements:
        counts[field.trace(field.mul(a, mat_trace(field, w)))] += 1
    return char_sum_accumulate(counts).as_int()


def coset_character_sum_closed(family: CosetFamily, n: int, field: Field, a: int) -> int:
    """The closed form: a Kloosterman multiple of the family constant A."""
    consts = family_constants(family, n, field.q)
    k = kloosterman(field, field.mul(a, a))
    s = family.sign
    if family.i in (1, 3):
        return s * consts.A * k
    if family.i == 2:
        return -s * consts.A * k * k
    return -s * consts.A * (k * k + field.q**2 - field.q)
