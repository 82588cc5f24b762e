"""Frequency probabilities along p-adically convergent sample sizes.

A Collective is a finite or unbounded symbol sequence with a declared
alphabet. Relative frequencies nu_N(A) = n(A)/N are exact rationals, and
an s-probability is their limit along sample sizes N_k chosen by a
SequenceSelector whose terms converge p-adically to a target m. Limits
are detected by a Cauchy window on the trace: finite evidence, flagged
as such in every outcome, never a proof.

The same engine runs with the ordinary absolute value instead of the
p-adic one (topology="real"); only the gap measure changes.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ConditioningOnNull,
    InsufficientData,
    InvalidLabel,
    InvalidTarget,
)
from .padic import Ball, PadicApprox, Prime, as_fraction, vp
from .reports import format_exponent, format_rational, json_exponent

LOGGER = logging.getLogger(__name__)

VERDICT_CONVERGED = "Converged"
VERDICT_NO_LIMIT = "NoLimitDetected"
VERDICT_RANGE = "RangeViolation"

#: every outcome carries this reminder
CAUCHY_NOTE = "Cauchy-window heuristic on finite evidence; not a convergence proof"

_WS = set(" \t\n\r\v\f")


class Collective:
    """A symbol sequence over a finite alphabet of single characters.

    Sources: an in-memory string, a file of ASCII symbols (whitespace
    ignored), or a deterministic generator. Prefixes of any requested
    length are served exactly; a finite source that runs short raises
    InsufficientData.
    """

    def __init__(self, alphabet, symbols="", generator=None, description="collective"):
        self.alphabet = tuple(alphabet)
        if any(len(a) != 1 for a in self.alphabet):
            raise ValueError("alphabet entries must be single characters")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet has repeated symbols")
        self._buf = list(symbols)
        self._gen = generator
        self.description = description
        bad = set(self._buf) - set(self.alphabet)
        if bad:
            raise InvalidLabel(f"symbols {sorted(bad)} outside alphabet {self.alphabet}")

    # -- sources --------------------------------------------------------

    @classmethod
    def from_sequence(cls, seq, alphabet=None) -> "Collective":
        seq = "".join(seq)
        if alphabet is None:
            alphabet = "01" if set(seq) <= {"0", "1"} else "".join(sorted(set(seq)))
        return cls(alphabet, symbols=seq, description=f"in-memory[{len(seq)}]")

    @classmethod
    def from_file(cls, path, alphabet) -> "Collective":
        with open(path, "rb") as fh:
            raw = fh.read()
        try:
            text = raw.decode("ascii")
        except UnicodeDecodeError as exc:
            raise InvalidLabel(f"non-ASCII byte in {path}: {exc}") from None
        symbols = "".join(ch for ch in text if ch not in _WS)
        bad = set(symbols) - set(alphabet)
        if bad:
            raise InvalidLabel(f"symbols {sorted(bad)} in {path} outside alphabet {tuple(alphabet)}")
        c = cls(alphabet, symbols=symbols, description=f"file:{path}")
        return c

    @classmethod
    def periodic(cls, word, alphabet=None) -> "Collective":
        if not word:
            raise ValueError("periodic word must be nonempty")
        if alphabet is None:
            alphabet = "01" if set(word) <= {"0", "1"} else "".join(sorted(set(word)))
        return cls(
            alphabet,
            generator=itertools.cycle(word),
            description=f"periodic:{word}",
        )

    @classmethod
    def alternating(cls) -> "Collective":
        return cls.periodic("01")

    @classmethod
    def random_bits(cls, seed: int) -> "Collective":
        import random

        rng = random.Random(seed)

        def bits():
            while True:
                yield "01"[rng.getrandbits(1)]

        return cls("01", generator=bits(), description=f"random:{seed}")

    @classmethod
    def checkpoint_forcing(cls, prime, depth, center, terms, mode="sphere") -> "Collective":
        bits = checkpoint_forcing_bits(prime, depth, center, terms, mode=mode)
        return cls("01", symbols=bits, description="checkpoint-forcing")

    # -- access ----------------------------------------------------------

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValueError("prefix length must be >= 0")
        while len(self._buf) < n and self._gen is not None:
            try:
                self._buf.append(next(self._gen))
            except StopIteration:
                self._gen = None
        if len(self._buf) < n:
            raise InsufficientData(
                f"{self.description} holds {len(self._buf)} symbols, {n} requested"
            )
        return "".join(self._buf[:n])

    def count(self, labels, n: int) -> int:
        labels = self.labelset(labels)
        return sum(1 for ch in self.prefix(n) if ch in labels)

    def labelset(self, labels) -> frozenset:
        out = frozenset(labels)
        bad = out - set(self.alphabet)
        if bad:
            raise InvalidLabel(f"labels {sorted(bad)} outside alphabet {self.alphabet}")
        return out


def relative_frequency(collective: Collective, labels, n: int) -> Fraction:
    """nu_N(A) = (occurrences of A among the first N symbols) / N."""
    if n < 1:
        raise ValueError("frequency needs N >= 1")
    return Fraction(collective.count(labels, n), n)


def checkpoint_forcing_bits(prime, depth, center, terms, mode="sphere") -> str:
    """Forward-fill a 0/1 sequence so that at every checkpoint N in
    terms the partial sum hits the tested event exactly.

    mode "sphere": v_p(S_N - center) == depth at every checkpoint;
    mode "residue": (S_N - center) mod p**depth lands in 1..p-1.
    Raises ValueError if some gap is too short to steer the sum.
    """
    p = Prime(prime)
    l = int(depth)
    r = int(center)
    if mode == "sphere":
        work_mod = p ** (l + 1)
        targets = sorted((r + u * p**l) % work_mod for u in range(1, p))
    elif mode == "residue":
        work_mod = p**l
        targets = sorted((r + a) % work_mod for a in range(1, p))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = []
    s = 0
    pos = 0
    for n in terms:
        if n <= pos:
            raise ValueError("checkpoints must be strictly increasing")
        gap = n - pos
        deltas = sorted((t - s) % work_mod for t in targets)
        delta = next((d for d in deltas if d <= gap), None)
        if delta is None:
            raise ValueError(
                f"cannot steer sum to a target at checkpoint {n}: gap {gap} < {deltas[0]}"
            )
        out.append("1" * delta + "0" * (gap - delta))
        s += delta
        pos = n
    return "".join(out)


# -- selectors ---------------------------------------------------------

_SCHEMES = ("affine", "truncation", "power", "explicit")


@dataclass(frozen=True)
class SequenceSelector:
    """Sample sizes N_k -> m in Z_p.

    Schemes: affine N_k = m + t*p**k (natural m), truncation N_k =
    (m mod p**k) for any p-adic integer m, power N_k = t*p**k toward 0,
    or an explicit term list (target optional).
    """

    prime: Prime
    scheme: str
    target: Fraction | None = None
    t: int = 1
    explicit_terms: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prime", Prime(self.prime))
        if self.scheme not in _SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.target is not None:
            object.__setattr__(self, "target", as_fraction(self.target))
        if self.scheme in ("affine", "truncation", "power") and self.t < 1:
            raise ValueError("t must be a natural >= 1")
        if self.scheme == "affine":
            m = self.target
            if m is None or m.denominator != 1 or m < 0:
                raise InvalidTarget("affine scheme needs a natural target m")
        elif self.scheme == "truncation":
            if self.target is None:
                raise InvalidTarget("truncation scheme needs a target")
            if vp(self.target, self.prime) < 0:
                raise InvalidTarget(
                    f"target {self.target} is not a {self.prime}-adic integer"
                )
        elif self.scheme == "power":
            if self.target not in (None, 0):
                raise InvalidTarget("power scheme converges to 0")
            object.__setattr__(self, "target", Fraction(0))
        else:
            terms = tuple(int(n) for n in self.explicit_terms)
            if not terms:
                raise ValueError("explicit scheme needs terms")
            if any(n < 1 for n in terms):
                raise ValueError("sample sizes must be naturals >= 1")
            if len(set(terms)) != len(terms):
                raise ValueError("sample sizes must be distinct")
            object.__setattr__(self, "explicit_terms", terms)
            if self.target is not None and vp(self.target, self.prime) < 0:
                raise InvalidTarget(
                    f"target {self.target} is not a {self.prime}-adic integer"
                )

    def terms(self, kmax: int) -> list[int]:
        """The first kmax usable sample sizes; zero or repeated
        truncation representatives are skipped with a log note."""
        if kmax < 1:
            raise ValueError("kmax must be >= 1")
        p = self.prime
        if self.scheme == "affine":
            m = int(self.target)
            return [m + self.t * p**k for k in range(1, kmax + 1)]
        if self.scheme == "power":
            return [self.t * p**k for k in range(1, kmax + 1)]
        if self.scheme == "explicit":
            return list(self.explicit_terms[:kmax])
        out: list[int] = []
        seen = set()
        m = self.target
        for k in range(1, kmax + 1):
            mod = p**k
            rep = m.numerator * pow(m.denominator, -1, mod) % mod
            if rep == 0 or rep in seen:
                LOGGER.info("selector skips k=%d (representative %d repeated or zero)", k, rep)
                continue
            seen.add(rep)
            out.append(rep)
        return out

    def describe(self) -> str:
        if self.scheme == "affine":
            return f"{int(self.target)}+{self.t}*{self.prime}^k"
        if self.scheme == "power":
            return f"{self.t}*{self.prime}^k"
        if self.scheme == "truncation":
            return f"trunc({format_rational(self.target)})"
        return "list:" + ",".join(str(n) for n in self.explicit_terms)


_AFFINE_RE = re.compile(r"^(\d+)\s*\+\s*(?:(\d+)\s*\*\s*)?p\s*\^\s*k$")
_POWER_RE = re.compile(r"^(?:(\d+)\s*\*\s*)?p\s*\^\s*k$")
_TRUNC_RE = re.compile(r"^trunc\(\s*(-?\d+(?:/\d+)?)\s*\)$")
_LIST_RE = re.compile(r"^list:(.+)$")


def parse_selector(text: str, prime) -> SequenceSelector:
    """Parse the selector grammar: 'm+t*p^k' | 't*p^k' | 'trunc(m)' |
    'list:N1,N2,...' (the '*t' factors optional)."""
    s = text.strip()
    m = _AFFINE_RE.match(s)
    if m:
        return SequenceSelector(
            prime, "affine", target=Fraction(int(m.group(1))), t=int(m.group(2) or 1)
        )
    m = _POWER_RE.match(s)
    if m:
        return SequenceSelector(prime, "power", t=int(m.group(1) or 1))
    m = _TRUNC_RE.match(s)
    if m:
        return SequenceSelector(prime, "truncation", target=Fraction(m.group(1)))
    m = _LIST_RE.match(s)
    if m:
        try:
            terms = tuple(int(x) for x in m.group(1).split(","))
        except ValueError:
            raise ValueError(f"bad explicit term list in {text!r}") from None
        return SequenceSelector(prime, "explicit", explicit_terms=terms)
    raise ValueError(f"cannot parse selector {text!r}")


def range_ball(selector: SequenceSelector) -> Ball | None:
    """The ball U(0, -v_p(m)) that bounds every s-probability along the
    selector; None means unbounded (target 0 or no target)."""
    m = selector.target
    if m is None or m == 0:
        return None
    return Ball(selector.prime, 0, -vp(m, selector.prime))


# -- traces and limit detection -----------------------------------------


@dataclass(frozen=True)
class FreqRow:
    k: int
    n: int
    nu: Fraction
    gap_exponent: object = None  # int, math.inf, or None on the first row


@dataclass
class FrequencyTrace:
    rows: tuple[FreqRow, ...]
    metric: str  # "padic:<p>" or "real"

    def csv_lines(self):
        yield "k,N_k,nu_num,nu_den,vp_gap"
        for r in self.rows:
            yield f"{r.k},{r.n},{r.nu.numerator},{r.nu.denominator},{format_exponent(r.gap_exponent)}"

    def jsonl_lines(self):
        for r in self.rows:
            yield json.dumps(
                {
                    "k": r.k,
                    "N_k": r.n,
                    "nu": format_rational(r.nu),
                    "vp_gap": json_exponent(r.gap_exponent),
                },
                sort_keys=True,
            )


@dataclass
class LimitOutcome:
    verdict: str
    value: object  # PadicApprox (padic), Fraction (real), or None
    trace: FrequencyTrace
    note: str = CAUCHY_NOTE
    params: dict = field(default_factory=dict)


def _le_pow10(num: int, den: int, e: int) -> bool:
    # num/den <= 10**-e, in integers only
    if e >= 0:
        return num * 10**e <= den
    return num <= den * 10 ** (-e)


def decimal_exponent(x: Fraction) -> int:
    """Largest e with |x| <= 10**-e, computed exactly (x != 0).

    Negative for |x| > 1; the real-topology counterpart of v_p.
    """
    num, den = abs(Fraction(x)).numerator, abs(Fraction(x)).denominator
    if num == 0:
        raise ValueError("zero has no finite decimal exponent")
    e = 0
    if _le_pow10(num, den, 0):
        while _le_pow10(num, den, e + 1):
            e += 1
    else:
        while not _le_pow10(num, den, e):
            e -= 1
    return e


def _gap_exponent(gap: Fraction, prime, topology: str):
    if gap == 0:
        return math.inf
    if topology == "padic":
        return vp(gap, prime)
    return decimal_exponent(gap)


def _frequency_rows(collective, labels, terms, prime, topology):
    rows = []
    prev = None
    for k, n in enumerate(terms, start=1):
        nu = relative_frequency(collective, labels, n)
        gap = None if prev is None else _gap_exponent(nu - prev, prime, topology)
        rows.append(FreqRow(k, n, nu, gap))
        prev = nu
    return tuple(rows)


def _detect(rows, window, threshold):
    gaps = [r.gap_exponent for r in rows[-window:]]
    return all(g is not None and g >= threshold for g in gaps)


def s_probability(
    collective: Collective,
    labels,
    selector: SequenceSelector,
    kmax: int,
    *,
    window: int = 3,
    cauchy_threshold: int = 8,
    topology: str = "padic",
) -> LimitOutcome:
    """Trace nu_{N_k}(A) along the selector and judge convergence by the
    last `window` gaps all having valuation >= cauchy_threshold (decimal
    exponent in the real topology).

    A Converged p-adic outcome carries nu_{kmax} as a PadicApprox at
    absolute precision cauchy_threshold, and is checked against the
    selector's range ball; a violation is reported, not silenced.
    """
    if topology not in ("padic", "real"):
        raise ValueError(f"unknown topology {topology!r}")
    terms = selector.terms(kmax)
    if len(terms) < window + 1:
        raise InsufficientData(
            f"selector yields {len(terms)} usable terms; Cauchy window needs {window + 1}"
        )
    p = selector.prime
    metric = f"padic:{p}" if topology == "padic" else "real"
    rows = _frequency_rows(collective, labels, terms, p, topology)
    trace = FrequencyTrace(rows, metric)
    params = {
        "selector": selector.describe(),
        "labels": "".join(sorted(collective.labelset(labels))),
        "window": window,
        "cauchy_threshold": cauchy_threshold,
        "topology": topology,
    }
    if not _detect(rows, window, cauchy_threshold):
        return LimitOutcome(VERDICT_NO_LIMIT, None, trace, params=params)
    final = rows[-1].nu
    if topology == "real":
        return LimitOutcome(VERDICT_CONVERGED, final, trace, params=params)
    ball = range_ball(selector)
    if ball is not None and not ball.contains(final):
        return LimitOutcome(VERDICT_RANGE, None, trace, params=params)
    value = PadicApprox.from_rational_abs(final, p, cauchy_threshold)
    return LimitOutcome(VERDICT_CONVERGED, value, trace, params=params)


def conditional_s_probability(
    collective: Collective,
    labels_a,
    labels_b,
    selector: SequenceSelector,
    kmax: int,
    *,
    window: int = 3,
    cauchy_threshold: int = 8,
    topology: str = "padic",
) -> LimitOutcome:
    """Trace nu_{N_k}(A intersect B) / nu_{N_k}(A): the exact finite-N
    Bayes quotient. ConditioningOnNull if A never occurs in some prefix."""
    if topology not in ("padic", "real"):
        raise ValueError(f"unknown topology {topology!r}")
    terms = selector.terms(kmax)
    if len(terms) < window + 1:
        raise InsufficientData(
            f"selector yields {len(terms)} usable terms; Cauchy window needs {window + 1}"
        )
    a = collective.labelset(labels_a)
    b = collective.labelset(labels_b)
    ab = a & b
    p = selector.prime
    rows = []
    prev = None
    for k, n in enumerate(terms, start=1):
        n_a = collective.count(a, n)
        if n_a == 0:
            raise ConditioningOnNull(f"conditioning event absent in the first {n} symbols")
        q = Fraction(collective.count(ab, n), n_a)
        gap = None if prev is None else _gap_exponent(q - prev, p, topology)
        rows.append(FreqRow(k, n, q, gap))
        prev = q
    metric = f"padic:{p}" if topology == "padic" else "real"
    trace = FrequencyTrace(tuple(rows), metric)
    params = {
        "selector": selector.describe(),
        "labels_a": "".join(sorted(a)),
        "labels_b": "".join(sorted(b)),
        "window": window,
        "cauchy_threshold": cauchy_threshold,
        "topology": topology,
        "conditional": True,
    }
    if not _detect(rows, window, cauchy_threshold):
        return LimitOutcome(VERDICT_NO_LIMIT, None, trace, params=params)
    final = rows[-1].nu
    if topology == "real":
        return LimitOutcome(VERDICT_CONVERGED, final, trace, params=params)
    value = PadicApprox.from_rational_abs(final, p, cauchy_threshold)
    return LimitOutcome(VERDICT_CONVERGED, value, trace, params=params)
