"""Power moments of ternary Kloosterman sums with square arguments.

Write SK^h for the sum of K(lambda; a)^h over nonzero squares a.  Each code
family instance yields every SK^h (families 1, 3) or SK^{2h} (families 2,
4) through the Pless power-moment identity applied to the dual pair: the
h-th moment of the dual weights equals a binomial/Stirling functional of
the weight-distribution prefix C_0..C_min(N,h).

The dual weights expand in powers of K, so the moment of order h is an
A, B-weighted linear combination of SK^l for l <= h.  Solving the
triangular system step by step with exact rationals produces the moment
series; every solved value must come out an integer, and is checked here
against the brute-force oracle.

Two independent routes are implemented:

* :func:`sk_via_pless` evaluates the Pless right side and solves the
  expansion (the derivation route);
* :func:`sk_via_printed_recursion` evaluates the final recursion exactly
  as printed in the source (coefficients q 3^{h-t} 2^{t-h-j-1}), which
  must produce the same series; a mismatch is reported, not raised, since
  it would indicate a transcription defect in the printed form.

The h = 0 case is degenerate by convention (the identity's right side
counts the zero dual word, the left side as summed over units does not),
so identities run for h >= 1 and SK^0 = (q-1)/2 seeds the solve directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .charsums import sk_moment
from .codes import (
    TraceProfile,
    check_injectivity,
    check_printed_columns,
    dual_weights,
    trace_profile,
    weight_distribution_prefix,
    weight_prefix_from_printed_columns,
)
from .constants import (
    ALL_FAMILIES,
    CosetFamily,
    coset_orders,
    family_constants,
    stirling2,
)
from .field import Field
from .report import CheckResult

MAX_H = 10


@dataclass(frozen=True)
class PlessInstance:
    """Everything the identity needs for one (family, n, q)."""

    family: CosetFamily
    n: int
    field: Field
    profile: TraceProfile
    weights: dict[int, int]
    c_prefix: list[int]

    @property
    def length(self) -> int:
        return self.profile.length

    @property
    def dual_dimension(self) -> int:
        return self.field.r


def build_instance(family: CosetFamily, n: int, field: Field, h_max: int = MAX_H) -> PlessInstance:
    """Profile, cross-checked dual weights, and the C prefix to min(N, h_max)."""
    if not 0 <= h_max <= MAX_H:
        raise ValueError(f"h_max capped at {MAX_H}, got {h_max}")
    profile = trace_profile(family, n, field)
    weights = dual_weights(profile)
    j_max = min(profile.length, h_max)
    c_prefix = weight_distribution_prefix(profile, j_max)
    return PlessInstance(family, n, field, profile, weights, c_prefix)


def pless_lhs(instance: PlessInstance, h: int) -> int:
    """Sum of w(c(a))^h over units a; the moment side."""
    return sum(w**h for w in instance.weights.values())


def pless_rhs(instance: PlessInstance, h: int) -> int:
    """The prefix side: sum over j <= min(N, h) of (-1)^j C_j times
    sum over t of t! S(h, t) 3^(k - t) 2^(t - j) binom(N - j, N - t).

    Terms with t > k are rational; the total must be integral.
    """
    n_len = instance.length
    k_dim = instance.dual_dimension
    if h < 0:
        raise ValueError("moment order must be nonnegative")
    if min(n_len, h) >= len(instance.c_prefix):
        raise ValueError(
            f"instance prefix covers j <= {len(instance.c_prefix) - 1}, needs {min(n_len, h)}"
        )
    total = Fraction(0)
    for j in range(min(n_len, h) + 1):
        inner = Fraction(0)
        for t in range(j, h + 1):
            if t > n_len:
                break
            inner += (
                factorial(t)
                * stirling2(h, t)
                * Fraction(3) ** (k_dim - t)
                * 2 ** (t - j)
                * comb(n_len - j, n_len - t)
            )
        total += (-1) ** j * instance.c_prefix[j] * inner
    if total.denominator != 1:
        raise ArithmeticError(f"Pless right side not integral at h={h}: {total}")
    return int(total)


def check_pless_identity(instance: PlessInstance, h_max: int) -> list[CheckResult]:
    """lhs == rhs for 1 <= h <= h_max, plus the h = 0 dimension check."""
    label = f"{instance.family.label},n={instance.n},q={instance.field.q}"
    out = [CheckResult(f"pless_rhs_h0_counts_dual({label})", pless_rhs(instance, 0), instance.field.q)]
    for h in range(1, h_max + 1):
        out.append(
            CheckResult(f"pless_identity({label},h={h})", pless_lhs(instance, h), pless_rhs(instance, h))
        )
    return out


def _expansion_parameters(instance: PlessInstance) -> tuple[int, int]:
    """(tau, B-hat): the sign token and the constant inside the expansion.

    The dual weight is (2/3) A (B-hat + tau K-power), so the h-th moment
    expands as 2 (2/3)^h A^h sum_l tau^l C(h, l) B-hat^(h-l) M_l with M_l
    the l-th entry of the moment series.
    """
    family = instance.family
    consts = family_constants(family, instance.n, instance.field.q)
    if family.i in (1, 3):
        return -family.sign, consts.B
    if family.i == 2:
        return family.sign, consts.B
    q = instance.field.q
    return family.sign, consts.B + family.sign * (q * q - q)


@dataclass(frozen=True)
class MomentSeries:
    """Solved SK moments: values[i] is SK^orders[i]."""

    family: CosetFamily
    n: int
    q: int
    orders: tuple[int, ...]
    values: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "family": self.family.label,
            "n": self.n,
            "q": self.q,
            "SK": [[h, v] for h, v in zip(self.orders, self.values)],
        }


def _series_orders(family: CosetFamily, steps: int) -> tuple[int, ...]:
    stride = 2 if family.even_moments else 1
    return tuple(stride * h for h in range(1, steps + 1))


def sk_via_pless(
    family: CosetFamily, n: int, field: Field, h_max: int, instance: PlessInstance | None = None
) -> MomentSeries:
    """Moment series solved from the Pless identity, exactly.

    h_max counts recursion steps: families 1, 3 produce SK^1..SK^h_max,
    families 2, 4 produce SK^2, SK^4, .., SK^(2 h_max).
    """
    if not 1 <= h_max <= MAX_H:
        raise ValueError(f"h_max must be in 1..{MAX_H}, got {h_max}")
    if instance is None:
        instance = build_instance(family, n, field, h_max)
    q = field.q
    consts = family_constants(family, n, q)
    tau, b_hat = _expansion_parameters(instance)
    solved: list[Fraction] = [Fraction(q - 1, 2)]  # SK^0, whatever the stride
    for h in range(1, h_max + 1):
        target = Fraction(pless_rhs(instance, h)) * Fraction(3, 2) ** h / (2 * consts.A**h)
        rest = sum(tau**l * comb(h, l) * b_hat ** (h - l) * solved[l] for l in range(h))
        value = tau**h * (target - rest)  # tau^-h == tau^h for tau = +-1
        if value.denominator != 1:
            raise ArithmeticError(
                f"solved moment not integral at step {h} for {family.label}, n={n}, q={q}: {value}"
            )
        solved.append(value)
    return MomentSeries(
        family, n, q, _series_orders(family, h_max), tuple(int(v) for v in solved[1:])
    )


def sk_via_printed_recursion(
    family: CosetFamily, n: int, field: Field, h_max: int, instance: PlessInstance | None = None
) -> tuple[MomentSeries | None, list[str]]:
    """Moment series from the recursion exactly as printed.

    Evaluates tau^h M_h = -sum_{l<h} tau^l C(h,l) B^(h-l) M_l
    + q A^-h sum_j (-1)^j C_j sum_t t! S(h,t) 3^(h-t) 2^(t-h-j-1)
    binom(N-j, N-t), using its own previous values.  Returns the series
    plus a list of defects (non-integral steps); a defect aborts the walk.
    """
    if not 1 <= h_max <= MAX_H:
        raise ValueError(f"h_max must be in 1..{MAX_H}, got {h_max}")
    if instance is None:
        instance = build_instance(family, n, field, h_max)
    q = field.q
    n_len = instance.length
    consts = family_constants(family, n, q)
    tau, b_hat = _expansion_parameters(instance)
    solved: list[Fraction] = [Fraction(q - 1, 2)]
    defects: list[str] = []
    for h in range(1, h_max + 1):
        acc = Fraction(0)
        for j in range(min(n_len, h) + 1):
            inner = Fraction(0)
            for t in range(j, h + 1):
                if t > n_len:
                    break
                inner += (
                    factorial(t)
                    * stirling2(h, t)
                    * Fraction(3) ** (h - t)
                    * Fraction(2) ** (t - h - j - 1)
                    * comb(n_len - j, n_len - t)
                )
            acc += (-1) ** j * instance.c_prefix[j] * inner
        value = tau**h * (
            -sum(tau**l * comb(h, l) * b_hat ** (h - l) * solved[l] for l in range(h))
            + q * Fraction(1, consts.A**h) * acc
        )
        if value.denominator != 1:
            defects.append(
                f"printed recursion non-integral at step {h} for {family.label}, n={n}, q={q}: {value}"
            )
            return None, defects
        solved.append(value)
    series = MomentSeries(
        family, n, q, _series_orders(family, h_max), tuple(int(v) for v in solved[1:])
    )
    return series, defects


def sk_oracle_series(family: CosetFamily, n: int, field: Field, h_max: int) -> MomentSeries:
    """The same orders filled straight from the Kloosterman table."""
    orders = _series_orders(family, h_max)
    return MomentSeries(family, n, field.q, orders, tuple(sk_moment(field, h) for h in orders))


# -- instance and whole-field verification ---------------------------------------


@dataclass
class InstanceReport:
    family: CosetFamily
    n: int
    field: Field
    checks: list[CheckResult]
    sk: MomentSeries | None

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self) -> dict:
        consts = family_constants(self.family, self.n, self.field.q)
        return {
            "instance": {
                "family": self.family.label,
                "n": self.n,
                "q": self.field.q,
                "A": consts.A,
                "B": consts.B,
                "N": consts.N,
            },
            "checks": [c.as_dict() for c in self.checks],
            "SK": [] if self.sk is None else [[h, v] for h, v in zip(self.sk.orders, self.sk.values)],
        }


def verify_instance(
    family: CosetFamily, n: int, field: Field, h_max: int = 8, identity_h_max: int | None = None
) -> InstanceReport:
    """Run every exact check for one instance.

    h_max bounds the solved moment orders (SK^h with h <= h_max); the
    identity itself is checked for h up to identity_h_max (default h_max).
    """
    if identity_h_max is None:
        identity_h_max = h_max
    label = f"{family.label},n={n},q={field.q}"
    checks: list[CheckResult] = []

    consts = family_constants(family, n, field.q)
    expected = coset_orders(n, field.q, family.sigma_index(n)).double_coset
    checks.append(CheckResult(f"constants_consistency({label})", consts.N, expected))

    instance = build_instance(family, n, field, h_max=max(h_max, identity_h_max))
    checks.append(CheckResult(f"profile_mass({label})", instance.length, consts.N))

    printed_cols = check_printed_columns(family, n, field)
    checks.append(
        CheckResult(
            f"printed_columns({label})", sum(0 if c.ok else 1 for c in printed_cols), 0
        )
    )
    j_max = min(instance.length, max(h_max, identity_h_max))
    checks.append(
        CheckResult(
            f"printed_prefix({label})",
            weight_prefix_from_printed_columns(family, n, field, j_max),
            instance.c_prefix,
        )
    )
    checks.append(check_injectivity(family, n, field))
    checks.extend(check_pless_identity(instance, identity_h_max))

    steps = h_max // 2 if family.even_moments else h_max
    sk_series = None
    if steps >= 1:
        sk_series = sk_via_pless(family, n, field, steps, instance=instance)
        oracle = sk_oracle_series(family, n, field, steps)
        checks.append(
            CheckResult(f"sk_vs_oracle({label})", list(sk_series.values), list(oracle.values))
        )
        printed_series, defects = sk_via_printed_recursion(family, n, field, steps, instance=instance)
        checks.append(
            CheckResult(
                f"printed_recursion({label})",
                defects if printed_series is None else list(printed_series.values),
                list(sk_series.values),
            )
        )
    return InstanceReport(family, n, field, checks, sk_series)


def _verify_worker(args: tuple) -> InstanceReport:
    r, modulus, i, sign, n, h_max, identity_h_max = args
    field = Field(r, modulus)
    return verify_instance(CosetFamily(i, sign), n, field, h_max, identity_h_max)


def full_verification(
    field: Field, n_max: int, h_max: int, jobs: int = 1, identity_h_max: int | None = None
) -> dict:
    """Every valid (family, n <= n_max) instance, optionally fanned out.

    The reduce is deterministic: reports come back in instance-list order
    whatever the job count.
    """
    if identity_h_max is None:
        identity_h_max = h_max
    tasks = [
        (field.r, field.modulus, family.i, family.sign, n, h_max, identity_h_max)
        for family in ALL_FAMILIES
        for n in family.valid_ns(n_max)
    ]
    if jobs > 1 and len(tasks) > 1:
        import multiprocessing

        with multiprocessing.Pool(processes=jobs) as pool:
            reports = pool.map(_verify_worker, tasks)
    else:
        reports = [_verify_worker(t) for t in tasks]
    return {
        "q": field.q,
        "modulus": list(field.modulus),
        "n_max": n_max,
        "h_max": h_max,
        "passed": all(r.passed for r in reports),
        "instances": [r.as_dict() for r in reports],
    }
