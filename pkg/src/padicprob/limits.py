"""p-adic limit laws for sums of exact Bernoulli trials.

The sum S_n of n two-valued trials has exact rational distribution
C(n,j) q'**j q**(n-j). When the sample sizes N_k are chosen to converge
p-adically to a target m, the probability that S lands in a residue
ball converges p-adically to the binomial weight C(m,r)/2**m (symmetric
case); the law of large numbers holds coefficientwise in the Mahler
basis; and the central-limit series (cosh(z/sqrt(n)))**n keeps bounded
Mahler coefficients at n = 1. Everything here is finite, exact and
traceable: verifiers return valuation traces, never asymptotic claims.

The sphere-membership randomness test rejects a bit sequence when its
checkpoint sums keep hitting an event whose exact probability is
p-adically below a significance threshold.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import (
    DomainError,
    HypothesisViolation,
    OrderError,
    PrecisionExhausted,
    RangeError,
)
from .frequency import Collective, SequenceSelector
from .padic import (
    PadicAbs,
    PadicApprox,
    Prime,
    as_fraction,
    factorial_vp,
    falling_binomial,
    vp,
)
from .reports import format_exponent, format_rational, json_exponent
from .series import FormalSeries, cosh_scaled_sq, exp_series, log1p_series, one


def binom(n: int, r: int) -> int:
    """Exact C(n, r); RangeError outside 0 <= r <= n."""
    if not 0 <= r <= n:
        raise RangeError(f"binom needs 0 <= r <= n, got n={n}, r={r}")
    return comb(n, r)


def binom_vp(n: int, r: int, p) -> int:
    """v_p(C(n, r)) as the number of carries when adding r and n-r in
    base p; never touches the (possibly huge) coefficient itself."""
    if not 0 <= r <= n:
        raise RangeError(f"binom_vp needs 0 <= r <= n, got n={n}, r={r}")
    p = Prime(p)
    a, b = r, n - r
    carries = 0
    carry = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def padic_binomial_coeff(a, m: int, prime=None) -> PadicApprox:
    """C(a, m) for a p-adic integer a, with the precision loss of the
    division by m! tracked through v_p(m!).

    a may be a PadicApprox or an exact int/Fraction (then no precision
    is lost). The result always satisfies |C(a, m)|_p <= 1.
    """
    if m < 0:
        raise RangeError("m must be a natural")
    if isinstance(a, PadicApprox):
        p = a.prime
        if m == 0:
            return PadicApprox.from_rational(1, p)
        if a.exact_zero:
            return PadicApprox.zero(p)
        if a.valuation < 0:
            raise DomainError("binomial coefficient needs a p-adic integer argument")
        out_prec = a.abs_precision - factorial_vp(m, p)
        if out_prec <= 0:
            raise PrecisionExhausted(
                f"C(a, {m}) loses {factorial_vp(m, p)} digits; argument has only "
                f"{a.abs_precision}"
            )
        return PadicApprox.from_rational_abs(falling_binomial(a.rational_rep(), m), p, out_prec)
    if prime is None:
        raise ValueError("exact arguments need the prime passed explicitly")
    p = Prime(prime)
    a = as_fraction(a)
    if vp(a, p) < 0:
        raise DomainError("binomial coefficient needs a p-adic integer argument")
    val = falling_binomial(a, m)
    if val == 0:
        return PadicApprox.zero(p)
    return PadicApprox.from_rational(val, p)


# -- the exact sum distribution ------------------------------------------


@dataclass(frozen=True)
class BernoulliParams:
    """One two-valued trial: symbol 0 with probability q, symbol 1 with
    probability q' = 1 - q; both must be p-adic integers."""

    prime: Prime
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "prime", Prime(self.prime))
        object.__setattr__(self, "q", as_fraction(self.q))
        if vp(self.q, self.prime) < 0 or vp(1 - self.q, self.prime) < 0:
            raise DomainError(
                f"q and 1-q must be {self.prime}-adic integers, got q={self.q}"
            )

    @property
    def q_prime(self) -> Fraction:
        return 1 - self.q


def symmetric_params(prime) -> BernoulliParams:
    return BernoulliParams(Prime(prime), Fraction(1, 2))


class SumDistribution:
    """Distribution of S_n = number of 1s among n trials."""

    def __init__(self, n: int, params: BernoulliParams):
        if n < 0:
            raise ValueError("n must be a natural")
        self.n = n
        self.params = params

    def weight(self, j: int) -> Fraction:
        if not 0 <= j <= self.n:
            return Fraction(0)
        q, qp = self.params.q, self.params.q_prime
        return comb(self.n, j) * qp**j * q ** (self.n - j)

    def weights(self) -> list[Fraction]:
        n = self.n
        a, b = self.params.q.numerator, self.params.q.denominator
        den = b**n
        out = []
        c = 1  # C(n, j), updated multiplicatively
        for j in range(n + 1):
            out.append(Fraction(c * (b - a) ** j * a ** (n - j), den))
            c = c * (n - j) // (j + 1)
        return out


def ball_probability(params: BernoulliParams, n: int, depth: int, center: int) -> Fraction:
    """P(S_n in the ball of radius p**-depth around center): the exact
    sum of weights over j congruent to center mod p**depth."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    p = params.prime
    mod = p**depth
    r = center % mod
    a, b = params.q.numerator, params.q.denominator
    if a == 0:  # all trials give 1: point mass at j = n
        return Fraction(1 if n % mod == r else 0)
    if a == b:  # all trials give 0: point mass at j = 0
        return Fraction(1 if r == 0 else 0)
    c = 1
    pow_a = a**n
    pow_ba = 1
    acc = 0
    for j in range(n + 1):
        if j % mod == r:
            acc += c * pow_ba * pow_a
        c = c * (n - j) // (j + 1)
        pow_a //= a
        pow_ba *= b - a
    return Fraction(acc, b**n)


def sphere_probability(params: BernoulliParams, n: int, depth: int, center: int) -> Fraction:
    """P(v_p(S_n - center) == depth exactly): ball minus its child ball."""
    return ball_probability(params, n, depth, center) - ball_probability(
        params, n, depth + 1, center
    )


def binomial_limit_weights(m: int) -> dict[int, Fraction]:
    """The limit distribution along N_k -> m: point masses C(m,r)/2**m
    at the atoms r = 0..m."""
    if m < 0:
        raise RangeError("m must be a natural")
    return {r: Fraction(comb(m, r), 2**m) for r in range(m + 1)}


# -- convergence traces ---------------------------------------------------

VERDICT_CONVERGING = "Converging"
VERDICT_INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class TraceRow:
    k: int
    n: int
    value: Fraction
    distance_exponent: object  # v_p(value - target); math.inf when exact


@dataclass
class ConvergenceTrace:
    tag: str
    rows: tuple[TraceRow, ...]
    target: Fraction
    verdict: str
    params: dict = field(default_factory=dict)

    @property
    def final_valuation(self):
        return self.rows[-1].distance_exponent

    def csv_lines(self):
        yield "k,N_k,value_num,value_den,vp_to_limit"
        for r in self.rows:
            yield (
                f"{r.k},{r.n},{r.value.numerator},{r.value.denominator},"
                f"{format_exponent(r.distance_exponent)}"
            )

    def jsonl_lines(self):
        for r in self.rows:
            yield json.dumps(
                {
                    "k": r.k,
                    "N_k": r.n,
                    "value": format_rational(r.value),
                    "vp_to_limit": json_exponent(r.distance_exponent),
                },
                sort_keys=True,
            )

    def verdict_json(self) -> str:
        return json.dumps(
            {
                "theorem": self.tag,
                "params": self.params,
                "verdict": self.verdict,
                "final_valuation": json_exponent(self.final_valuation),
            },
            sort_keys=True,
        )


def _eventually_nondecreasing(vals) -> bool:
    # judged on the second half of the trace, at least the last two entries
    if len(vals) < 2:
        return False
    start = min(len(vals) - 2, len(vals) // 2)
    tail = vals[start:]
    return all(x <= y for x, y in zip(tail, tail[1:]))


def _judge(vals, threshold: int) -> str:
    if _eventually_nondecreasing(vals) and vals[-1] >= threshold:
        return VERDICT_CONVERGING
    return VERDICT_INCONCLUSIVE


def _distance_trace(tag, p, target, terms, value_fn, threshold, params) -> ConvergenceTrace:
    rows = []
    for k, n in enumerate(terms, start=1):
        value = value_fn(n)
        rows.append(TraceRow(k, n, value, vp(value - target, p)))
    verdict = _judge([r.distance_exponent for r in rows], threshold)
    return ConvergenceTrace(tag, tuple(rows), target, verdict, params)


def check_ball_window(p, m: int, r: int, depth: int) -> None:
    """Side conditions for the binomial ball limit: r must be one of the
    atoms 0..m and the ball depth must separate them, i.e. depth >= s
    for some s with m <= p**s - 1. The edge case m == p additionally
    allows depth 1 at the interior atoms 1..p-1."""
    p = Prime(p)
    if m < 0 or not 0 <= r <= m:
        raise HypothesisViolation(f"center r={r} is not an atom of the limit (0..{m})")
    s_min = 0  # least s with m <= p**s - 1; m = 0 admits depth 0
    while p**s_min - 1 < m:
        s_min += 1
    if depth >= s_min:
        return
    if m == p and 1 <= r <= p - 1 and depth >= 1:
        return
    raise HypothesisViolation(
        f"ball depth {depth} cannot separate the atoms 0..{m} (need >= {s_min})"
    )


def binomial_ball_trace(
    prime,
    m: int,
    r: int,
    depth: int,
    *,
    kmax: int = 6,
    t: int = 1,
    selector: SequenceSelector | None = None,
    threshold: int = 4,
) -> ConvergenceTrace:
    """Exact trace of P(S_{N_k} in ball(r, depth)) against the limit
    C(m, r)/2**m along N_k -> m (default affine selector m + t*p**k).

    The standard window requires m <= p**s - 1 with depth >= s; anything
    else raises HypothesisViolation before any computation.
    """
    p = Prime(prime)
    check_ball_window(p, m, r, depth)
    if selector is None:
        selector = SequenceSelector(p, "affine", target=Fraction(m), t=t)
    params = symmetric_params(p)
    target = Fraction(comb(m, r), 2**m)
    terms = selector.terms(kmax)
    meta = {
        "prime": int(p),
        "m": m,
        "r": r,
        "l": depth,
        "selector": selector.describe(),
        "threshold": threshold,
    }
    return _distance_trace(
        "binomial-ball-limit",
        p,
        target,
        terms,
        lambda n: ball_probability(params, n, depth, r),
        threshold,
        meta,
    )


def prime_edge_trace(
    prime,
    r: int,
    depth: int,
    *,
    kmax: int = 6,
    t: int = 1,
    threshold: int = 4,
) -> ConvergenceTrace:
    """The m = p edge of the ball limit: N_k -> p, limit C(p, r)/2**p
    for r = 0..p. The boundary atoms r = 0 and r = p need ball depth
    >= 2; the interior atoms work at depth 1."""
    p = Prime(prime)
    if not 0 <= r <= p:
        raise HypothesisViolation(f"center r={r} is not an atom of the limit (0..{p})")
    need = 2 if r in (0, p) else 1
    if depth < need:
        raise HypothesisViolation(f"edge atom r={r} needs ball depth >= {need}, got {depth}")
    selector = SequenceSelector(p, "affine", target=Fraction(int(p)), t=t)
    params = symmetric_params(p)
    target = Fraction(comb(p, r), 2 ** int(p))
    meta = {
        "prime": int(p),
        "m": int(p),
        "r": r,
        "l": depth,
        "selector": selector.describe(),
        "threshold": threshold,
    }
    return _distance_trace(
        "prime-edge-ball-limit",
        p,
        target,
        selector.terms(kmax),
        lambda n: ball_probability(params, n, depth, r),
        threshold,
        meta,
    )


def divisibility_balance_traces(
    prime, *, kmax: int = 5, t: int = 1, threshold: int = 4
) -> tuple[ConvergenceTrace, ConvergenceTrace]:
    """Along N_k = 1 + t*p**k, both P(p divides S) and its complement
    converge to 1/2. The complement is computed independently as the sum
    over the nonzero residues, then checked against 1 - P exactly."""
    p = Prime(prime)
    selector = SequenceSelector(p, "affine", target=Fraction(1), t=t)
    params = symmetric_params(p)
    terms = selector.terms(kmax)
    half = Fraction(1, 2)

    def complement(n):
        out = sum(
            (ball_probability(params, n, 1, c) for c in range(1, p)), Fraction(0)
        )
        direct = 1 - ball_probability(params, n, 1, 0)
        if out != direct:
            raise AssertionError("residue decomposition broke additivity")
        return out

    meta = {"prime": int(p), "selector": selector.describe(), "threshold": threshold}
    divisible = _distance_trace(
        "divisibility-balance",
        p,
        half,
        terms,
        lambda n: ball_probability(params, n, 1, 0),
        threshold,
        dict(meta, event="divisible"),
    )
    rest = _distance_trace(
        "divisibility-balance",
        p,
        half,
        terms,
        complement,
        threshold,
        dict(meta, event="not-divisible"),
    )
    return divisible, rest


# -- Mahler coefficients and the law of large numbers ---------------------


def charfun_series(params: BernoulliParams, a, order: int) -> FormalSeries:
    """The moment series E exp(z*S) = (1 + q'(e**z - 1))**a, exact
    through the truncation order; a is a natural count of trials or any
    p-adic integer exponent."""
    base = one(order) + (exp_series(order) - one(order)).scale(params.q_prime)
    a = as_fraction(a)
    if a.denominator == 1 and a >= 0:
        return base.integer_power(int(a))
    if vp(a, params.prime) < 0:
        raise DomainError("exponent must be a p-adic integer")
    return base.padic_power(a)


def mahler_lambda(params: BernoulliParams, a, m: int):
    """The m-th Mahler coefficient (1-q)**m * C(a, m) of the limit law;
    exact Fraction for exact a, PadicApprox for approximate a."""
    if m < 0:
        raise RangeError("m must be a natural")
    factor = params.q_prime**m
    if isinstance(a, PadicApprox):
        return padic_binomial_coeff(a, m).mul_rational(factor)
    return factor * falling_binomial(as_fraction(a), m)


def empirical_mahler_row(params: BernoulliParams, n: int, mmax: int) -> list[Fraction]:
    """E[C(S_n, m)] for m = 0..mmax in one pass over the distribution;
    each entry is asserted against the closed form (1-q)**m C(n, m)."""
    if mmax < 0:
        raise RangeError("mmax must be a natural")
    a, b = params.q.numerator, params.q.denominator
    ba = b - a
    pow_a = [1] * (n + 1)
    pow_ba = [1] * (n + 1)
    for i in range(1, n + 1):
        pow_a[i] = pow_a[i - 1] * a
        pow_ba[i] = pow_ba[i - 1] * ba
    acc = [0] * (mmax + 1)
    c = 1  # C(n, j)
    for j in range(n + 1):
        w_num = c * pow_ba[j] * pow_a[n - j]
        if w_num:
            cm = 1  # C(j, m)
            for m in range(min(j, mmax) + 1):
                acc[m] += cm * w_num
                cm = cm * (j - m) // (m + 1)
        c = c * (n - j) // (j + 1)
    den = b**n
    out = [Fraction(x, den) for x in acc]
    for m, got in enumerate(out):
        assert got == params.q_prime**m * comb(n, m), (
            f"Mahler moment identity failed at m={m}, n={n}"
        )
    return out


def empirical_mahler(params: BernoulliParams, n: int, m: int) -> Fraction:
    """E[C(S_n, m)], exact; equals (1-q)**m C(n, m)."""
    if m < 0:
        raise RangeError("m must be a natural")
    return empirical_mahler_row(params, n, m)[m]


def mahler_lln_traces(
    params: BernoulliParams,
    selector: SequenceSelector,
    mmax: int,
    kmax: int,
    *,
    threshold: int = 4,
) -> dict[int, ConvergenceTrace]:
    """Law of large numbers in Mahler coordinates: for each m the
    empirical coefficient along N_k converges p-adically to
    (1-q)**m C(a, m), a the selector's target."""
    if selector.target is None:
        raise ValueError("the selector must carry the limit target a")
    p = params.prime
    if p != selector.prime:
        raise ValueError("selector and parameters disagree on the prime")
    a = selector.target
    terms = selector.terms(kmax)
    rows_by_m: dict[int, list[TraceRow]] = {m: [] for m in range(mmax + 1)}
    targets = {m: mahler_lambda(params, a, m) for m in range(mmax + 1)}
    for k, n in enumerate(terms, start=1):
        empirical = empirical_mahler_row(params, n, mmax)
        for m in range(mmax + 1):
            diff = empirical[m] - targets[m]
            rows_by_m[m].append(TraceRow(k, n, empirical[m], vp(diff, p)))
    out = {}
    for m in range(mmax + 1):
        rows = tuple(rows_by_m[m])
        verdict = _judge([r.distance_exponent for r in rows], threshold)
        out[m] = ConvergenceTrace(
            "mahler-lln",
            rows,
            targets[m],
            verdict,
            {
                "prime": int(p),
                "q": format_rational(params.q),
                "a": format_rational(a),
                "m": m,
                "selector": selector.describe(),
                "threshold": threshold,
            },
        )
    return out


# -- central-limit series --------------------------------------------------


def clt_series(a, order: int, prime=None) -> FormalSeries:
    """(cosh(z/sqrt(a)))**a through the truncation order, built from the
    even-power expansion so no square root is ever taken. Natural a >= 1
    uses the exact integer power; other exponents must be p-adic units
    (the even coefficients divide by a**k)."""
    if order % 2 != 0:
        raise ValueError("truncation order must be even")
    a = as_fraction(a)
    if a.denominator == 1 and a >= 1:
        return cosh_scaled_sq(a, order).integer_power(int(a))
    if prime is None:
        raise ValueError("non-natural exponents need the prime for the unit check")
    if a == 0 or vp(a, Prime(prime)) != 0:
        raise DomainError("exponent must be a p-adic unit")
    return cosh_scaled_sq(a, order).padic_power(a)


@dataclass(frozen=True)
class MahlerSeq:
    """Mahler coefficients lambda_0..lambda_M of a characteristic
    series, from the substitution z = log(1 + w)."""

    coefficients: tuple[Fraction, ...]

    def abs_exponents(self, prime) -> list:
        p = Prime(prime)
        return [vp(c, p) for c in self.coefficients]

    def max_abs(self, prime) -> PadicAbs:
        p = Prime(prime)
        best = PadicAbs.zero(p)
        for c in self.coefficients:
            cand = PadicAbs.from_valuation(p, vp(c, p))
            if cand > best:
                best = cand
        return best


def charfun_to_mahler(phi: FormalSeries, count: int) -> MahlerSeq:
    """Invert a characteristic series phi(z) (phi(0) = 1) into Mahler
    coefficients: the w-expansion of phi(log(1 + w))."""
    if phi.coefficient(0) != 1:
        raise DomainError("characteristic series must have constant term 1")
    if count > phi.order:
        raise OrderError(f"asked for {count} coefficients from order {phi.order}")
    w = phi.compose(log1p_series(phi.order))
    return MahlerSeq(w.coeffs[: count + 1])


BOUND_CHECK_NOTE = "finite coefficient check; evidence on [0, count], not a proof"


@dataclass
class MahlerBoundReport:
    bounded: bool
    max_abs: PadicAbs
    seq: MahlerSeq
    prime: Prime
    count: int
    note: str = BOUND_CHECK_NOTE


def clt_mahler_bound_check(prime, count: int = 30) -> MahlerBoundReport:
    """Finite desk check that the n = 1 central-limit series cosh z has
    Mahler coefficients of p-adic absolute value <= 1 (they are 1, 0 and
    +-1/2). A bounded report is evidence on [0, count], not a theorem
    about the whole tail."""
    p = Prime(prime)
    if p == 2:
        raise DomainError("the half-integer coefficients are unbounded 2-adically")
    order = count if count % 2 == 0 else count + 1
    seq = charfun_to_mahler(clt_series(1, order), count)
    max_abs = seq.max_abs(p)
    return MahlerBoundReport(max_abs <= PadicAbs.one(p), max_abs, seq, p, count)


# -- sphere randomness test -------------------------------------------------


def _binom_residue_counts(n: int, mod: int) -> list[int]:
    out = [0] * mod
    c = 1
    for j in range(n + 1):
        out[j % mod] += c
        c = c * (n - j) // (j + 1)
    return out


def _hit_predicate(p: int, depth: int, center: int, mode: str):
    small = p**depth
    big = small * p

    def sphere_hit(s: int) -> bool:
        d = (s - center) % big
        return d != 0 and d % small == 0

    def residue_hit(s: int) -> bool:
        return 0 < (s - center) % small < p

    if mode == "sphere":
        return sphere_hit
    if mode == "residue":
        return residue_hit
    raise ValueError(f"unknown mode {mode!r}")


def _event_probability(params, n, depth, center, mode) -> Fraction:
    if mode == "sphere":
        return sphere_probability(params, n, depth, center)
    p = params.prime
    return sum(
        (ball_probability(params, n, depth, center + alpha) for alpha in range(1, p)),
        Fraction(0),
    )


@dataclass(frozen=True)
class CheckpointRow:
    k: int
    n: int
    sum_value: int
    hit: bool
    event_prob: Fraction
    prob_exponent: object  # v_p of the event probability


@dataclass
class RandomnessResult:
    verdict: str  # PersistentHit | Rejected | NotRejected
    k_eps: int
    first_hit_k: int | None
    rows: tuple[CheckpointRow, ...]
    eps_exponent: int
    mode: str
    params: dict = field(default_factory=dict)

    @property
    def rejected(self) -> bool:
        return self.verdict in ("PersistentHit", "Rejected")


def sphere_randomness_test(
    collective: Collective,
    prime,
    depth: int,
    center: int,
    selector: SequenceSelector,
    eps_exponent: int,
    kmax: int,
    *,
    kmin: int = 1,
    mode: str = "sphere",
) -> RandomnessResult:
    """Reject a bit sequence whose checkpoint sums keep realizing an
    exactly-small event.

    At each checkpoint N_k the tested event is, in "sphere" mode,
    v_p(S - center) == depth exactly, or in "residue" mode a nonzero
    residue below p of S - center mod p**depth. k_eps is the first k
    from which every computed event probability has |P|_p < p**-E;
    hits at k >= k_eps reject (every k hitting upgrades the verdict to
    PersistentHit). If the window never reaches the significance level,
    DomainError: the test cannot run at this eps.
    """
    p = Prime(prime)
    if depth < 1:
        raise HypothesisViolation("the tested event needs depth >= 1")
    if mode not in ("sphere", "residue"):
        raise ValueError(f"unknown mode {mode!r}")
    if not set(collective.alphabet) <= {"0", "1"}:
        raise ValueError("the sum test runs on 0/1 sequences")
    if kmin < 1 or kmax < kmin:
        raise ValueError("need 1 <= kmin <= kmax")
    params = symmetric_params(p)
    all_terms = selector.terms(kmax)
    if len(all_terms) < kmax:
        raise DomainError("selector yields fewer usable terms than kmax")
    hit = _hit_predicate(p, depth, center, mode)
    rows = []
    for k in range(kmin, kmax + 1):
        n = all_terms[k - 1]
        s = collective.count("1", n)
        prob = _event_probability(params, n, depth, center, mode)
        rows.append(CheckpointRow(k, n, s, hit(s), prob, vp(prob, p)))
    k_eps = None
    for i, row in enumerate(rows):
        if all(r.prob_exponent > eps_exponent for r in rows[i:]):
            k_eps = row.k
            break
    if k_eps is None:
        raise DomainError(
            f"significance p**-{eps_exponent} never reached on k in [{kmin}, {kmax}]"
        )
    late = [r for r in rows if r.k >= k_eps]
    late_hits = [r.k for r in late if r.hit]
    if late_hits and len(late_hits) == len(late):
        verdict = "PersistentHit"
    elif late_hits:
        verdict = "Rejected"
    else:
        verdict = "NotRejected"
    meta = {
        "prime": int(p),
        "l": depth,
        "r": center,
        "selector": selector.describe(),
        "eps_exponent": eps_exponent,
        "mode": mode,
        "kmin": kmin,
        "kmax": kmax,
    }
    return RandomnessResult(
        verdict,
        k_eps,
        late_hits[0] if late_hits else None,
        tuple(rows),
        eps_exponent,
        mode,
        meta,
    )


def checkpoint_pattern_distribution(
    prime, depth: int, center: int, terms, mode: str = "sphere"
) -> dict[tuple[bool, ...], Fraction]:
    """Exact joint law of the hit indicators at the checkpoints, under
    the symmetric null. The partial sums only matter modulo p**(depth+1),
    so the chain over residues stays tiny whatever the checkpoint sizes."""
    p = Prime(prime)
    mod = p ** (depth + 1)
    hit = _hit_predicate(p, depth, center, mode)
    states: dict[tuple[int, tuple[bool, ...]], int] = {(0, ()): 1}
    pos = 0
    for n in terms:
        if n <= pos:
            raise ValueError("checkpoints must be strictly increasing")
        counts = _binom_residue_counts(n - pos, mod)
        nxt: dict[tuple[int, tuple[bool, ...]], int] = defaultdict(int)
        for (res, pat), val in states.items():
            for c, cnt in enumerate(counts):
                if cnt:
                    nres = (res + c) % mod
                    nxt[(nres, pat + (hit(nres),))] += val * cnt
        states = nxt
        pos = n
    den = 2**pos
    out: dict[tuple[bool, ...], Fraction] = defaultdict(lambda: Fraction(0))
    for (_, pat), val in states.items():
        out[pat] += Fraction(val, den)
    return dict(out)


def hit_union_probability(
    prime, depth: int, center: int, terms, from_index: int = 0, mode: str = "sphere"
) -> Fraction:
    """P(some checkpoint at position >= from_index hits), exactly, by
    disjointification of the joint hit law."""
    dist = checkpoint_pattern_distribution(prime, depth, center, terms, mode)
    return sum(
        (prob for pat, prob in dist.items() if any(pat[from_index:])), Fraction(0)
    )
