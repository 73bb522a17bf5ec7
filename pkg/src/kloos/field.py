"""Arithmetic in GF(3^r) and exact character values.

Elements of GF(3^r) = F_3[x]/(m(x)) are represented as plain integers in
``range(3**r)`` whose base-3 digits are the coefficients of the residue
polynomial, constant term in the least significant digit.  Multiplication
uses exp/log tables walked from a multiplicative generator, so every
operation is exact integer work; there is no floating point anywhere.

Values of the canonical additive character live in Z[omega], omega a
primitive cube root of unity, represented by the :class:`Eisenstein` pair
(a, b) = a + b*omega.  A character sum is accumulated as the triple of
trace-fiber counts (N0, N1, N2) and collapsed via 1 + omega + omega^2 = 0.

The modulus may be supplied explicitly (coefficients constant-term first)
or defaulted from a shipped table of primitive polynomials, one per degree
r = 1..12.  Construction verifies irreducibility by trial division and
names the offending factor on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_DEGREE = 12

# Lexicographically first monic primitive polynomial of each degree over
# F_3 (coefficients constant-term first).  Primitive means the class of x
# generates the multiplicative group, which lets table construction walk
# successive powers of x with O(r) work per step.  Each entry is re-checked
# for irreducibility at construction time.
DEFAULT_MODULI: dict[int, tuple[int, ...]] = {
    1: (1, 1),
    2: (2, 1, 1),
    3: (1, 0, 2, 1),
    4: (2, 0, 0, 1, 1),
    5: (1, 0, 0, 0, 2, 1),
    6: (2, 0, 0, 0, 0, 1, 1),
    7: (1, 0, 0, 0, 0, 1, 2, 1),
    8: (2, 0, 0, 0, 0, 1, 0, 0, 1),
    9: (1, 0, 0, 0, 0, 0, 2, 1, 0, 1),
    10: (2, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1),
    11: (1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 1),
    12: (2, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 1),
}

_ADD_TABLE_MAX_Q = 729


def poly_trim(p: Sequence[int]) -> tuple[int, ...]:
    """Drop trailing zero coefficients, keeping at least the constant."""
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_degree(p: Sequence[int]) -> int:
    p = poly_trim(p)
    if p == (0,):
        return -1
    return len(p) - 1


def poly_mod(num: Sequence[int], den: Sequence[int]) -> tuple[int, ...]:
    """Remainder of num modulo monic den, coefficients over F_3."""
    num = [c % 3 for c in num]
    den = poly_trim(den)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        lead = num[i]
        if lead == 0:
            continue
        shift = i - dd
        for j, c in enumerate(den):
            num[shift + j] = (num[shift + j] - lead * c) % 3
    return poly_trim(num)


def poly_str(p: Sequence[int]) -> str:
    """Render coefficients (constant first) as a readable polynomial."""
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i] % 3
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("x" if c == 1 else f"{c}*x")
        else:
            terms.append(f"x^{i}" if c == 1 else f"{c}*x^{i}")
    return " + ".join(terms) if terms else "0"


def _monic_polys(degree: int) -> Iterable[tuple[int, ...]]:
    span = 3**degree
    for low in range(span):
        coeffs = []
        v = low
        for _ in range(degree):
            v, d = divmod(v, 3)
            coeffs.append(d)
        yield tuple(coeffs) + (1,)


def find_factor(modulus: Sequence[int]) -> tuple[int, ...] | None:
    """Return a monic proper factor of the modulus, or None if irreducible.

    Trial division by every monic polynomial of degree 1..deg/2 suffices:
    any reducible polynomial has a factor in that range.
    """
    degree = poly_degree(modulus)
    for d in range(1, degree // 2 + 1):
        for candidate in _monic_polys(d):
            if poly_mod(modulus, candidate) == (0,):
                return candidate
    return None


def _factorize(m: int) -> list[int]:
    primes = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.append(m)
    return primes


class Field:
    """GF(3^r) with int-encoded elements and exact table-driven arithmetic.

    Parameters
    ----------
    r : extension degree, 1 <= r <= 12.
    modulus : optional coefficients of a monic irreducible of degree r over
        F_3, constant term first.  Defaults to the shipped primitive
        polynomial for that degree.
    """

    def __init__(self, r: int, modulus: Sequence[int] | None = None):
        if not 1 <= r <= MAX_DEGREE:
            raise ValueError(f"extension degree r={r} outside supported range 1..{MAX_DEGREE}")
        if modulus is None:
            modulus = DEFAULT_MODULI[r]
        modulus = tuple(int(c) % 3 for c in modulus)
        if poly_degree(modulus) != r:
            raise ValueError(
                f"modulus {poly_str(modulus)} has degree {poly_degree(modulus)}, expected {r}"
            )
        if modulus[-1] != 1:
            raise ValueError(f"modulus {poly_str(modulus)} is not monic")
        factor = find_factor(modulus)
        if factor is not None:
            raise ValueError(
                f"modulus {poly_str(modulus)} is reducible: divisible by {poly_str(factor)}"
            )
        self.r = r
        self.q = 3**r
        self.modulus = modulus
        self._build_log_tables()
        self._trace_basis = self._build_trace_basis()
        self._add_table: list[list[int]] | None = None
        if self.q <= _ADD_TABLE_MAX_Q:
            self._add_table = [
                [self._add_digits(a, b) for b in range(self.q)] for a in range(self.q)
            ]

    # -- construction helpers -------------------------------------------------

    def _add_digits(self, a: int, b: int) -> int:
        out = 0
        scale = 1
        while a or b:
            a, da = divmod(a, 3)
            b, db = divmod(b, 3)
            out += ((da + db) % 3) * scale
            scale *= 3
        return out

    def _scaled(self, c: int, a: int) -> int:
        # c*a for a scalar c in {0,1,2}: digitwise, no reduction needed
        if c % 3 == 0:
            return 0
        if c % 3 == 1:
            return a
        out = 0
        scale = 1
        while a:
            a, d = divmod(a, 3)
            out += ((2 * d) % 3) * scale
            scale *= 3
        return out

    def _mul_by_x(self, a: int) -> int:
        # multiply by the class of x: shift digits, reduce the overflow
        y = a * 3
        top, y = divmod(y, self.q)
        if top:
            low = self.from_int_coeffs(self.modulus[:-1])
            y = self._add_digits(y, self._scaled(-top, low))
        return y

    def from_int_coeffs(self, coeffs: Sequence[int]) -> int:
        out = 0
        scale = 1
        for c in coeffs:
            out += (c % 3) * scale
            scale *= 3
        return out

    def _mul_raw(self, a: int, b: int) -> int:
        # schoolbook polynomial product reduced mod the modulus
        acc = 0
        term = a
        while b:
            b, d = divmod(b, 3)
            if d:
                acc = self._add_digits(acc, self._scaled(d, term))
            term = self._mul_by_x(term)
        return acc

    def _build_log_tables(self) -> None:
        q = self.q
        x_elt = self.element((0, 1))
        exp = [1]
        e = x_elt
        while e != 1 and len(exp) < q:
            exp.append(e)
            e = self._mul_by_x(e)
        if len(exp) != q - 1:
            # class of x is not a generator; fall back to a searched one
            exp = self._exp_from_searched_generator()
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log

    def _exp_from_searched_generator(self) -> list[int]:
        q = self.q
        primes = _factorize(q - 1)

        def raw_pow(a: int, e: int) -> int:
            out = 1
            while e:
                if e & 1:
                    out = self._mul_raw(out, a)
                a = self._mul_raw(a, a)
                e >>= 1
            return out

        for g in range(2, q):
            if all(raw_pow(g, (q - 1) // p) != 1 for p in primes):
                exp = [1]
                e = g
                while e != 1:
                    exp.append(e)
                    e = self._mul_raw(e, g)
                return exp
        raise ValueError("no multiplicative generator found; modulus is not irreducible")

    def _build_trace_basis(self) -> tuple[int, ...]:
        # trace is F_3-linear, so tr(x^i) for i < r determines it everywhere
        basis = []
        for i in range(self.r):
            e = self.element([0] * i + [1])
            acc = e
            f = e
            for _ in range(self.r - 1):
                f = self.mul(self.mul(f, f), f)
                acc = self._add_digits(acc, f)
            if acc not in (0, 1, 2):
                raise ValueError(f"trace of basis element x^{i} landed outside F_3")
            basis.append(acc)
        return tuple(basis)

    # -- element conversion ---------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> int:
        """Element from polynomial coefficients, reducing if over-long."""
        reduced = poly_mod(coeffs, self.modulus)
        return self.from_int_coeffs(reduced)

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Base-3 digits of an element, constant term first, length r."""
        self._check(a)
        out = []
        for _ in range(self.r):
            a, d = divmod(a, 3)
            out.append(d)
        return tuple(out)

    def _check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of GF({self.q})")

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    # -- arithmetic -----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        return self._scaled(2, a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scalar_mul(self, c: int, a: int) -> int:
        """Product of an integer scalar (taken mod 3) with an element."""
        return self._scaled(c % 3, a)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def trace(self, a: int) -> int:
        """Absolute trace down to F_3: sum of the r Frobenius conjugates."""
        self._check(a)
        acc = 0
        i = 0
        while a:
            a, d = divmod(a, 3)
            acc += d * self._trace_basis[i]
            i += 1
        return acc % 3

    def is_square(self, a: int) -> bool:
        """True when a is a square; 0 counts as a square."""
        if a == 0:
            return True
        return self._log[a] % 2 == 0

    def first_nonsquare(self) -> int:
        for a in self.units():
            if not self.is_square(a):
                return a
        raise ValueError("no nonsquare exists; group order must be even")

    def squares(self) -> list[int]:
        """Nonzero squares in element order."""
        return [a for a in self.units() if self.is_square(a)]

    # -- identity -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.r, self.modulus) == (other.r, other.modulus)

    def __hash__(self) -> int:
        return hash((self.r, self.modulus))

    def __repr__(self) -> str:
        return f"Field(q=3^{self.r}, modulus={poly_str(self.modulus)})"

    def __reduce__(self):
        return (Field, (self.r, self.modulus))


def build_field(r: int, modulus: Sequence[int] | None = None) -> Field:
    """Construct GF(3^r); thin alias kept for symmetry with the CLI."""
    return Field(r, modulus)


@dataclass(frozen=True)
class Eisenstein:
    """Exact value a + b*omega with omega = exp(2*pi*i/3).

    Uses omega^2 = -1 - omega, so products stay in the integer pair
    representation.  Real integers embed as (a, 0).
    """

    re: int
    om: int

    def __add__(self, other: "Eisenstein | int") -> "Eisenstein":
        other = _as_eisenstein(other)
        return Eisenstein(self.re + other.re, self.om + other.om)

    __radd__ = __add__

    def __neg__(self) -> "Eisenstein":
        return Eisenstein(-self.re, -self.om)

    def __sub__(self, other: "Eisenstein | int") -> "Eisenstein":
        return self + (-_as_eisenstein(other))

    def __rsub__(self, other: "Eisenstein | int") -> "Eisenstein":
        return _as_eisenstein(other) + (-self)

    def __mul__(self, other: "Eisenstein | int") -> "Eisenstein":
        o = _as_eisenstein(other)
        return Eisenstein(
            self.re * o.re - self.om * o.om,
            self.re * o.om + self.om * o.re - self.om * o.om,
        )

    __rmul__ = __mul__

    @property
    def is_real(self) -> bool:
        return self.om == 0

    def as_int(self) -> int:
        if self.om != 0:
            raise ArithmeticError(f"value {self.re} + {self.om}*omega is not real")
        return self.re


OMEGA = Eisenstein(0, 1)
OMEGA2 = Eisenstein(-1, -1)
_OMEGA_POWERS = (Eisenstein(1, 0), OMEGA, OMEGA2)


def _as_eisenstein(v: "Eisenstein | int") -> Eisenstein:
    if isinstance(v, Eisenstein):
        return v
    return Eisenstein(int(v), 0)


def omega_power(t: int) -> Eisenstein:
    """omega^t for an integer exponent."""
    return _OMEGA_POWERS[t % 3]


def char_sum_accumulate(counts: Sequence[int]) -> Eisenstein:
    """Collapse trace-fiber counts (N0, N1, N2) to N0 + N1*omega + N2*omega^2.

    The counts may be any integers (weighted sums included).
    """
    n0, n1, n2 = counts
    return Eisenstein(n0 - n2, n1 - n2)


def additive_char(field: Field, a: int) -> Eisenstein:
    """Canonical additive character lambda(a) = omega^tr(a)."""
    return omega_power(field.trace(a))
