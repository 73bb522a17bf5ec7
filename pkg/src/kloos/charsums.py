"""Kloosterman sums over GF(3^r), their moments, and fiber-count identities.

K(lambda; a) = sum over alpha in F_q^* of lambda(alpha + a/alpha), with
lambda the canonical additive character omega^tr.  Every sum is accumulated
as exact trace-fiber counts and collapsed in Z[omega]; Kloosterman values
are asserted real and within the Weil bound |K| <= 2 sqrt(q).

Also here:

* the GL(t, q) extension K_GL(t), both by its two-term recursion and by
  literal enumeration of invertible matrices (t <= 2) as an oracle;
* delta(m, q; beta) = #{(a_1..a_m) in (F_q^*)^m : sum(a_i + 1/a_i) = beta},
  computed by m-fold additive convolution of the fiber histogram of
  x -> x + 1/x, plus the square-class closed form for m = 1;
* power moments SK^h (square arguments) and MK^h (all arguments);
* the two transform identities tying delta counts to Kloosterman powers.
"""

from __future__ import annotations

from functools import lru_cache

from .field import Eisenstein, Field, char_sum_accumulate
from .report import CheckResult

DELTA_MAX_M = 4
GL_BRUTE_MAX_T = 2
GL_BRUTE_MAX_Q = 27


def kloosterman(field: Field, a: int, scale: int = 1) -> int:
    """K(psi; a) for psi = lambda(scale * .), exact integer.

    With scale = 1 this is the classical K(lambda; a).  Raises if a is not
    a unit, if the accumulated value is not real, or if the Weil bound
    fails (either would mean broken arithmetic).
    """
    if not 1 <= a < field.q:
        raise ValueError(f"Kloosterman argument must be a unit, got {a}")
    if not 1 <= scale < field.q:
        raise ValueError(f"character scale must be a unit, got {scale}")
    counts = [0, 0, 0]
    for alpha in field.units():
        v = field.add(alpha, field.mul(a, field.inv(alpha)))
        counts[field.trace(field.mul(scale, v))] += 1
    value = char_sum_accumulate(counts).as_int()
    if value * value > 4 * field.q:
        raise ArithmeticError(f"Weil bound violated: K={value} at q={field.q}")
    return value


@lru_cache(maxsize=64)
def kloosterman_table(field: Field) -> dict[int, int]:
    """K(lambda; a) for every unit a."""
    return {a: kloosterman(field, a) for a in field.units()}


def sk_moment(field: Field, h: int) -> int:
    """SK^h: sum of K(lambda; a)^h over nonzero square a."""
    if h < 0:
        raise ValueError("moment order must be nonnegative")
    table = kloosterman_table(field)
    return sum(table[a] ** h for a in field.squares())


def mk_moment(field: Field, h: int) -> int:
    """MK^h: sum of K(lambda; a)^h over all units a."""
    if h < 0:
        raise ValueError("moment order must be nonnegative")
    table = kloosterman_table(field)
    return sum(k**h for k in table.values())


def moment_series(field: Field, h_max: int) -> tuple[list[int], list[int]]:
    """(SK^0..SK^h_max, MK^0..MK^h_max)."""
    return (
        [sk_moment(field, h) for h in range(h_max + 1)],
        [mk_moment(field, h) for h in range(h_max + 1)],
    )


# -- GL(t, q) Kloosterman sums ------------------------------------------------


def gl_kloosterman(field: Field, t: int, a: int) -> int:
    """K_GL(t)(lambda; a) by the two-term recursion.

    K_GL(0) = 1, K_GL(1) = K(lambda; a), and for t >= 2
    K_GL(t) = q^(t-1) K_GL(t-1) K + q^(2t-2) (q^(t-1) - 1) K_GL(t-2).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    q = field.q
    k1 = kloosterman(field, a)
    prev, cur = 1, k1  # K_GL(0), K_GL(1)
    if t == 0:
        return prev
    for s in range(2, t + 1):
        prev, cur = cur, q ** (s - 1) * cur * k1 + q ** (2 * s - 2) * (q ** (s - 1) - 1) * prev
    return cur


def gl_kloosterman_bruteforce(field: Field, t: int, a: int) -> int:
    """K_GL(t)(lambda; a) by enumerating GL(t, q), t in {1, 2}.

    Sums lambda(Tr w + a Tr w^-1) over invertible w.  For t = 2 the trace
    of the inverse is Tr w / det w, so the scan is over raw 2x2 tuples.
    """
    if t not in (1, 2):
        raise ValueError(f"brute force supports t in {{1, 2}}, got {t}")
    if t == 2 and field.q > GL_BRUTE_MAX_Q:
        raise ValueError(f"t=2 brute force capped at q <= {GL_BRUTE_MAX_Q}, got q={field.q}")
    counts = [0, 0, 0]
    if t == 1:
        for w in field.units():
            counts[field.trace(field.add(w, field.mul(a, field.inv(w))))] += 1
        return char_sum_accumulate(counts).as_int()
    q = field.q
    for w00 in range(q):
        for w11 in range(q):
            tr = field.add(w00, w11)
            d = field.mul(w00, w11)
            for w01 in range(q):
                for w10 in range(q):
                    det = field.sub(d, field.mul(w01, w10))
                    if det == 0:
                        continue
                    tr_inv = field.mul(tr, field.inv(det))
                    counts[field.trace(field.add(tr, field.mul(a, tr_inv)))] += 1
    return char_sum_accumulate(counts).as_int()


# -- delta counts --------------------------------------------------------------


@lru_cache(maxsize=256)
def delta_counts(field: Field, m: int) -> tuple[int, ...]:
    """delta(m, q; beta) for all beta, by convolving the x + 1/x histogram.

    Index beta as a field element; m = 0 is the point mass at beta = 0.
    """
    if not 0 <= m <= DELTA_MAX_M:
        raise ValueError(f"delta supports 0 <= m <= {DELTA_MAX_M}, got {m}")
    q = field.q
    fiber = [0] * q
    for x in field.units():
        fiber[field.add(x, field.inv(x))] += 1
    cur = [0] * q
    cur[0] = 1
    for _ in range(m):
        nxt = [0] * q
        for y in range(q):
            fy = fiber[y]
            if fy == 0:
                continue
            for s in range(q):
                nxt[field.add(s, y)] += cur[s] * fy
        cur = nxt
    return tuple(cur)


def delta(field: Field, m: int, beta: int) -> int:
    return delta_counts(field, m)[beta]


def delta1_closed(field: Field, beta: int) -> int:
    """delta(1, q; beta) from the square class of beta^2 - 1.

    The two solutions of x + 1/x = beta merge when beta^2 - 1 = 0 and
    vanish when beta^2 - 1 is a nonsquare.
    """
    disc = field.sub(field.mul(beta, beta), 1)
    if disc == 0:
        return 1
    return 2 if field.is_square(disc) else 0


def check_delta_to_kloosterman(field: Field, m: int, a: int) -> CheckResult:
    """Sum over beta of delta(m; beta) lambda(a beta) against K(lambda; a^2)^m."""
    counts = [0, 0, 0]
    d = delta_counts(field, m)
    for beta in field.elements():
        counts[field.trace(field.mul(a, beta))] += d[beta]
    lhs = char_sum_accumulate(counts).as_int()
    rhs = kloosterman(field, field.mul(a, a)) ** m
    return CheckResult(f"delta_to_kloosterman(m={m},a={a})", lhs, rhs)


def check_kloosterman_to_delta(field: Field, m: int, beta: int) -> CheckResult:
    """Sum over units of lambda(-a beta) K(lambda; a^2)^m against
    q delta(m; beta) - (q-1)^m."""
    table = kloosterman_table(field)
    acc = Eisenstein(0, 0)
    weights = [0, 0, 0]
    for a in field.units():
        k = table[field.mul(a, a)] ** m
        weights[field.trace(field.neg(field.mul(a, beta)))] += k
    acc = char_sum_accumulate(weights)
    lhs = acc.as_int()
    rhs = field.q * delta(field, m, beta) - (field.q - 1) ** m
    return CheckResult(f"kloosterman_to_delta(m={m},beta={beta})", lhs, rhs)
