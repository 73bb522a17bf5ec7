"""Exact combinatorial constants for the coset code families.

Eight families of index pairs (i, sign) with i in 1..4 label codes built
from double cosets of a maximal parabolic inside the minus-type orthogonal
group O^-(2n, q): i = 1 pairs with the big cell, i = 2 with the middle
cell, i = 3, 4 with their reflected images.  Plus-sign families need n
even, minus-sign families n odd (exact floors below).  Each valid (family,
n, q) carries a pair of integers (A, B) whose product N = A B is the coset
size, i.e. the code length.

Everything here is closed-form integer arithmetic: Gaussian binomials,
Stirling numbers of the second kind, general-linear group orders, and the
A/B constants with their quarter-integer exponents (divisibility is
asserted, never rounded).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import NamedTuple

from .report import CheckResult

FAMILY_INDICES = (1, 2, 3, 4)


def q_binomial(n: int, r: int, q: int) -> int:
    """Gaussian binomial [n r]_q: number of r-dim subspaces of F_q^n."""
    if r < 0 or r > n:
        return 0
    num = 1
    den = 1
    for j in range(r):
        num *= q ** (n - j) - 1
        den *= q ** (r - j) - 1
    assert num % den == 0
    return num // den


def stirling2(h: int, t: int) -> int:
    """Stirling number of the second kind S(h, t), by finite differences."""
    if t < 0 or h < 0:
        raise ValueError("stirling2 needs nonnegative arguments")
    if t > h:
        return 0
    total = sum((-1) ** (t - j) * comb(t, j) * j**h for j in range(t + 1))
    ft = factorial(t)
    assert total % ft == 0
    return total // ft


def gl_order(n: int, q: int) -> int:
    """|GL(n, q)| = q^C(n,2) * prod_{j=1..n} (q^j - 1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = q ** comb(n, 2)
    for j in range(1, n + 1):
        out *= q**j - 1
    return out


def multinomial(c: int, a: int, b: int) -> int:
    """Ways to mark a coordinates one way and b another out of c; 0 if a+b > c.

    Computed as comb(c, a) comb(c - a, b) so c may be astronomically large.
    """
    if a < 0 or b < 0:
        raise ValueError("multinomial parts must be nonnegative")
    if a + b > c:
        return 0
    return comb(c, a) * comb(c - a, b)


@dataclass(frozen=True, order=True)
class CosetFamily:
    """One of the eight code families: cell index i in 1..4 and a sign."""

    i: int
    sign: int  # +1 or -1

    def __post_init__(self):
        if self.i not in FAMILY_INDICES:
            raise ValueError(f"family index must be in 1..4, got {self.i}")
        if self.sign not in (1, -1):
            raise ValueError(f"family sign must be +1 or -1, got {self.sign}")

    @classmethod
    def parse(cls, text: str) -> "CosetFamily":
        text = text.strip().upper()
        if len(text) == 4 and text.startswith("DC") and text[2] in "1234" and text[3] in "+-":
            return cls(int(text[2]), 1 if text[3] == "+" else -1)
        raise ValueError(f"cannot parse family {text!r}; expected e.g. 'DC1+' or 'DC4-'")

    @property
    def label(self) -> str:
        return f"DC{self.i}{'+' if self.sign > 0 else '-'}"

    def valid_n(self, n: int) -> bool:
        """Whether dimension parameter n is admissible for this family."""
        if self.sign > 0:
            if n % 2 != 0:
                return False
            return n >= (4 if self.i == 4 else 2)
        if n % 2 != 1:
            return False
        return n >= (1 if self.i == 1 else 3)

    def valid_ns(self, n_max: int) -> list[int]:
        return [n for n in range(1, n_max + 1) if self.valid_n(n)]

    def sigma_index(self, n: int) -> int:
        """Index r of the permutation sigma_r whose double coset builds the code."""
        return n - {1: 1, 2: 2, 3: 2, 4: 3}[self.i]

    @property
    def uses_reflection(self) -> bool:
        """Families 3 and 4 sit in the reflected (determinant -1 style) cosets."""
        return self.i in (3, 4)

    @property
    def even_moments(self) -> bool:
        """Families 2 and 4 generate SK^{2h}; families 1 and 3 generate SK^h."""
        return self.i in (2, 4)


ALL_FAMILIES = tuple(
    CosetFamily(i, sign) for i in FAMILY_INDICES for sign in (1, -1)
)


class FamilyConstants(NamedTuple):
    A: int
    B: int

    @property
    def N(self) -> int:
        return self.A * self.B


def _q_power(q: int, num: int, den: int = 1) -> int:
    """q^(num/den) with exactness asserted; exponents must be integers."""
    if num % den != 0:
        raise ArithmeticError(f"non-integral exponent {num}/{den} in constant formula")
    e = num // den
    assert e >= 0
    return q**e


def _odd_product(q: int, terms: int) -> int:
    """prod_{j=1..terms} (q^(2j-1) - 1); empty product is 1."""
    out = 1
    for j in range(1, terms + 1):
        out *= q ** (2 * j - 1) - 1
    return out


def _even_product(q: int, terms: int) -> int:
    """prod_{j=1..terms} (q^(2j) - 1); empty product is 1."""
    out = 1
    for j in range(1, terms + 1):
        out *= q ** (2 * j) - 1
    return out


def family_constants(family: CosetFamily, n: int, q: int) -> FamilyConstants:
    """The exact (A, B) pair for a valid (family, n, q)."""
    if not family.valid_n(n):
        raise ValueError(f"n={n} is not valid for family {family.label}")
    i = family.i
    if family.sign > 0:
        half = (n - 2) // 2
        if i == 1:
            a = _q_power(q, 5 * n * n - 2 * n - 4, 4) * (q ** (n - 1) - 1) * _odd_product(q, half)
            b = (q + 1) * _q_power(q, n * n, 4) * _even_product(q, half)
        elif i == 2:
            a = _q_power(q, 5 * n * n - 2 * n - 8, 4) * q_binomial(n - 1, 1, q) * _odd_product(q, half)
            b = (q + 1) * _q_power(q, (n - 2) ** 2, 4) * (q ** (n - 1) - 1) * _even_product(q, half)
        elif i == 3:
            a = (q + 1) * _q_power(q, 5 * n * n - 2 * n - 8, 4) * q_binomial(n - 1, 1, q) * _odd_product(q, half)
            b = _q_power(q, (n - 2) ** 2, 4) * (q ** (n - 1) - 1) * _even_product(q, half)
        else:
            a = (q + 1) * _q_power(q, 5 * n * n - 6 * n - 4, 4) * q_binomial(n - 1, 2, q) * _odd_product(q, half)
            b = _q_power(q, (n - 2) ** 2, 4) * (q ** (n - 1) - 1) * _even_product(q, half)
        return FamilyConstants(a, b)
    half = (n - 1) // 2
    if i == 1:
        a = _q_power(q, 5 * (n * n - 1), 4) * _odd_product(q, half)
        b = (q + 1) * _q_power(q, (n - 1) ** 2, 4) * _even_product(q, half)
    elif i == 2:
        a = _q_power(q, 5 * n * n - 4 * n - 5, 4) * q_binomial(n - 1, 1, q) * _odd_product(q, half)
        b = (q + 1) * _q_power(q, (n - 1) ** 2, 4) * _even_product(q, half)
    elif i == 3:
        a = (q + 1) * _q_power(q, 5 * n * n - 4 * n - 5, 4) * q_binomial(n - 1, 1, q) * _odd_product(q, half)
        b = _q_power(q, (n - 1) ** 2, 4) * _even_product(q, half)
    else:
        half = (n - 3) // 2
        a = (q + 1) * _q_power(q, 5 * n * n - 4 * n - 9, 4) * q_binomial(n - 1, 2, q) * _odd_product(q, half)
        b = (
            _q_power(q, (n - 3) ** 2, 4)
            * (q ** (n - 2) - 1)
            * (q ** (n - 1) - 1)
            * _even_product(q, half)
        )
    return FamilyConstants(a, b)


class CosetOrders(NamedTuple):
    parabolic: int  # |P(2n, q)|, the maximal parabolic subgroup
    cosets: int  # number of B_r-cosets inside one factor
    double_coset: int  # |P sigma_r P| (equals |reflected copy|)


def coset_orders(n: int, q: int, r: int) -> CosetOrders:
    """Orders in the Bruhat-style decomposition at cell index r.

    |P| = 2 (q+1) |GL(n-1, q)| q^((n-1)(n+2)/2), the coset count is
    [n-1 r]_q q^(r(r+3)/2), and the double coset has |P| * count / 2
    elements.
    """
    if not 0 <= r <= n - 1:
        raise ValueError(f"cell index r={r} outside 0..{n - 1}")
    parabolic = 2 * (q + 1) * gl_order(n - 1, q) * q ** ((n - 1) * (n + 2) // 2)
    cosets = q_binomial(n - 1, r, q) * q ** (r * (r + 3) // 2)
    assert (parabolic * cosets) % 2 == 0
    return CosetOrders(parabolic, cosets, parabolic * cosets // 2)


def double_coset_order_expanded(n: int, q: int, r: int) -> int:
    """Same double-coset order via the fully expanded product form."""
    out = (q + 1) * q ** (n * n - n)
    for j in range(1, n):
        out *= q**j - 1
    return out * q_binomial(n - 1, r, q) * q ** comb(r, 2) * q ** (2 * r)


def check_family_constants_consistency(n_max: int, q: int) -> list[CheckResult]:
    """A B against the double-coset order for every valid family and n <= n_max."""
    results = []
    for family in ALL_FAMILIES:
        for n in family.valid_ns(n_max):
            consts = family_constants(family, n, q)
            expected = coset_orders(n, q, family.sigma_index(n)).double_coset
            results.append(
                CheckResult(f"constants_consistency({family.label},n={n},q={q})", consts.N, expected)
            )
    return results
