"""Ternary codes attached to the coset families, with exact weight counts.

A family instance (family, n, q) yields a code of length N = A B over F_3:
coordinates are the coset elements, and a word u is in the code when the
field sum of u_k * Tr(g_k) vanishes.  Coordinates only matter through the
matrix trace, so the whole code is determined by the trace profile: the
count N(beta) of coordinates at each beta in F_q.

The profile has a closed form driven by the fiber counts delta(1, q; .)
(families 1, 3) or delta(2, q; .) (families 2, 4).  From it follow, all
exactly:

* dual weights w(c(a)) for each unit a, by two independent routes (the
  Kloosterman closed form, and N minus the trace-kernel mass), asserted
  equal;
* the number C_j of codewords of weight j for j <= j_max, by dynamic
  programming over beta blocks: choose nu_beta ones and mu_beta twos per
  block subject to sum(nu + mu) = j and sum((nu - mu) beta) = 0, since a
  ternary word kills the functional exactly when the signed block sums
  cancel;
* the same prefix from the per-class column counts as printed in the
  source recursion (a transcription audit of the same quantities);
* for tiny N, the full distribution by literal enumeration of all 3^N words.
"""

from __future__ import annotations

from dataclasses import dataclass

from .charsums import delta1_closed, delta_counts, kloosterman
from .constants import CosetFamily, family_constants, multinomial
from .field import Field
from .report import CheckResult

PREFIX_MAX_J = 12
TINY_ENUM_MAX_WORDS = 10**6


@dataclass(frozen=True)
class TraceProfile:
    """Coordinate counts per trace value beta, dense over F_q."""

    field: Field
    counts: tuple[int, ...]
    family: CosetFamily | None = None
    n: int | None = None

    @property
    def length(self) -> int:
        return sum(self.counts)

    def count(self, beta: int) -> int:
        return self.counts[beta]

    def as_dict(self) -> dict[int, int]:
        return {beta: self.counts[beta] for beta in self.field.elements()}


def _exact_div(num: int, den: int) -> int:
    if num % den != 0:
        raise ArithmeticError(f"expected {num} divisible by {den}")
    return num // den


def trace_profile(family: CosetFamily, n: int, field: Field) -> TraceProfile:
    """N(beta) for every beta, from the closed forms; mass asserted = N."""
    q = field.q
    consts = family_constants(family, n, q)
    a_const, b_const = consts.A, consts.B
    s = family.sign
    counts = []
    if family.i in (1, 3):
        for beta in field.elements():
            term = q * delta1_closed(field, beta) - (q - 1)
            counts.append(_exact_div(a_const * b_const + s * a_const * term, q))
    elif family.i == 2:
        d2 = delta_counts(field, 2)
        for beta in field.elements():
            term = q * d2[beta] - (q - 1) ** 2
            counts.append(_exact_div(a_const * b_const - s * a_const * term, q))
    else:
        d2 = delta_counts(field, 2)
        for beta in field.elements():
            if beta == 0:
                term = q * d2[0] + (q - 1) ** 3
            else:
                term = q * d2[beta] - (2 * q * q - 3 * q + 1)
            counts.append(_exact_div(a_const * b_const - s * a_const * term, q))
    profile = TraceProfile(field, tuple(counts), family, n)
    if profile.length != consts.N:
        raise ArithmeticError(
            f"profile mass {profile.length} != N {consts.N} for {family.label}, n={n}, q={q}"
        )
    if any(c < 0 for c in counts):
        raise ArithmeticError(f"negative profile count for {family.label}, n={n}, q={q}")
    return profile


def dual_weight_closed(family: CosetFamily, n: int, field: Field, a: int) -> int:
    """w(c(a)) by the Kloosterman closed form, exact 2/3 multiple."""
    consts = family_constants(family, n, field.q)
    k = kloosterman(field, field.mul(a, a))
    s = family.sign
    if family.i in (1, 3):
        inner = consts.B - s * k
    elif family.i == 2:
        inner = consts.B + s * k * k
    else:
        inner = consts.B + s * (field.q**2 - field.q + k * k)
    return _exact_div(2 * consts.A * inner, 3)


def dual_weight_from_profile(profile: TraceProfile, a: int) -> int:
    """w(c(a)) = N minus the coordinates whose functional lands in ker tr."""
    field = profile.field
    kernel_mass = 0
    for beta in field.elements():
        if field.trace(field.mul(a, beta)) == 0:
            kernel_mass += profile.counts[beta]
    return profile.length - kernel_mass


def dual_weights(profile: TraceProfile) -> dict[int, int]:
    """All q-1 dual weights, computed by both routes and asserted equal."""
    if profile.family is None or profile.n is None:
        raise ValueError("dual weights need a family-tagged profile")
    field = profile.field
    out = {}
    for a in field.units():
        closed = dual_weight_closed(profile.family, profile.n, field, a)
        direct = dual_weight_from_profile(profile, a)
        if closed != direct:
            raise ArithmeticError(
                f"dual weight mismatch at a={a}: closed {closed} vs profile {direct}"
            )
        out[a] = closed
    return out


def dual_weight(family: CosetFamily, n: int, field: Field, a: int) -> int:
    """Single dual weight with the two-route cross-check."""
    return dual_weights(trace_profile(family, n, field))[a]


def min_dual_weight(profile: TraceProfile) -> int:
    return min(dual_weights(profile).values())


def check_injectivity(family: CosetFamily, n: int, field: Field) -> CheckResult:
    """The dual map is injective iff no nonzero a has weight zero."""
    weights = dual_weights(trace_profile(family, n, field))
    zero_count = sum(1 for w in weights.values() if w == 0)
    return CheckResult(f"dual_injectivity({family.label},n={n},q={field.q})", zero_count, 0)


# -- weight distribution --------------------------------------------------------


def _prefix_dp(field: Field, counts: tuple[int, ...], j_max: int) -> list[int]:
    """C_0..C_j_max by DP over beta blocks.

    State: (coordinates used, running signed sum in F_q) -> word count.
    Block beta with N(beta) coordinates contributes multinomial(N(beta);
    nu, mu) ways to place nu ones and mu twos, shifting the sum by
    (nu - mu) beta.
    """
    state: dict[tuple[int, int], int] = {(0, 0): 1}
    factor_cache: dict[tuple[int, int, int], int] = {}
    for beta in field.elements():
        n_beta = counts[beta]
        if n_beta == 0:
            continue
        shifts = [field.scalar_mul(d, beta) for d in range(3)]
        new_state: dict[tuple[int, int], int] = {}
        for (used, ssum), ways in state.items():
            room = j_max - used
            for nu in range(room + 1):
                for mu in range(room - nu + 1):
                    key = (n_beta, nu, mu)
                    factor = factor_cache.get(key)
                    if factor is None:
                        factor = multinomial(n_beta, nu, mu)
                        factor_cache[key] = factor
                    if factor == 0:
                        continue
                    shift = field.scalar_mul(nu - mu, beta)
                    new_key = (used + nu + mu, field.add(ssum, shift))
                    prev = new_state.get(new_key)
                    new_state[new_key] = ways * factor if prev is None else prev + ways * factor
        state = new_state
    return [state.get((j, 0), 0) for j in range(j_max + 1)]


def weight_distribution_prefix(profile: TraceProfile, j_max: int) -> list[int]:
    """C_0..C_j_max for the code of the profile."""
    if not 0 <= j_max <= PREFIX_MAX_J:
        raise ValueError(f"prefix length capped at j_max <= {PREFIX_MAX_J}, got {j_max}")
    return _prefix_dp(profile.field, profile.counts, j_max)


def printed_column_counts(family: CosetFamily, n: int, field: Field) -> TraceProfile:
    """The per-beta column counts in their printed square-class case shape.

    Families 1, 3 split beta by the square class of beta^2 - 1; families
    2, 4 quote the delta(2) fiber directly with the beta = 0 special case
    for family 4.  Numerically this must reproduce trace_profile.
    """
    q = field.q
    consts = family_constants(family, n, q)
    a_const, b_const = consts.A, consts.B
    s = family.sign
    counts = []
    if family.i in (1, 3):
        for beta in field.elements():
            disc = field.sub(field.mul(beta, beta), 1)
            if disc == 0:
                inner = b_const + s * 1
            elif field.is_square(disc):
                inner = b_const + s * (q + 1)
            else:
                inner = b_const + s * (1 - q)
            counts.append(_exact_div(a_const * inner, q))
    elif family.i == 2:
        d2 = delta_counts(field, 2)
        for beta in field.elements():
            inner = b_const + s * ((q - 1) ** 2 - q * d2[beta])
            counts.append(_exact_div(a_const * inner, q))
    else:
        d2 = delta_counts(field, 2)
        for beta in field.elements():
            if beta == 0:
                inner = b_const - s * (q * d2[0] + (q - 1) ** 3)
            else:
                inner = b_const - s * (q * d2[beta] - (2 * q * q - 3 * q + 1))
            counts.append(_exact_div(a_const * inner, q))
    return TraceProfile(field, tuple(counts), family, n)


def check_printed_columns(family: CosetFamily, n: int, field: Field) -> list[CheckResult]:
    """Compare printed column counts against the profile, beta by beta."""
    profile = trace_profile(family, n, field)
    printed = printed_column_counts(family, n, field)
    out = []
    for beta in field.elements():
        out.append(
            CheckResult(
                f"printed_column({family.label},n={n},q={field.q},beta={beta})",
                printed.counts[beta],
                profile.counts[beta],
            )
        )
    return out


def weight_prefix_from_printed_columns(
    family: CosetFamily, n: int, field: Field, j_max: int
) -> list[int]:
    """C_0..C_j_max recomputed from the printed column counts."""
    if not 0 <= j_max <= PREFIX_MAX_J:
        raise ValueError(f"prefix length capped at j_max <= {PREFIX_MAX_J}, got {j_max}")
    printed = printed_column_counts(family, n, field)
    return _prefix_dp(field, printed.counts, j_max)


def enumerate_code_tiny(profile: TraceProfile) -> list[int]:
    """Full weight distribution by scanning all 3^N words; N <= 12.

    The slow oracle: no closed forms, just the defining condition
    sum u_k v_k = 0 evaluated per word.
    """
    field = profile.field
    n_len = profile.length
    if 3**n_len > TINY_ENUM_MAX_WORDS:
        raise ValueError(f"3^{n_len} words exceeds the {TINY_ENUM_MAX_WORDS} enumeration cap")
    coords = []
    for beta in field.elements():
        coords.extend([beta] * profile.counts[beta])
    dist = [0] * (n_len + 1)
    word = [0] * n_len
    while True:
        acc = 0
        weight = 0
        for digit, v in zip(word, coords):
            if digit:
                weight += 1
                acc = field.add(acc, field.scalar_mul(digit, v))
        if acc == 0:
            dist[weight] += 1
        # odometer over {0,1,2}^N
        pos = 0
        while pos < n_len and word[pos] == 2:
            word[pos] = 0
            pos += 1
        if pos == n_len:
            break
        word[pos] += 1
    return dist
