"""Exception types shared across the package.

Every error raised by the library derives from PadicProbError, so callers
can catch one base class. The CLI maps these onto its documented exit
codes (see cli.EXIT_CODES).
"""

from __future__ import annotations


class PadicProbError(Exception):
    """Base class for all library errors."""


class DomainError(PadicProbError):
    """Input outside a function's mathematical domain (e.g. a series
    argument outside its disc of convergence)."""


class OrderError(PadicProbError):
    """Formal series operands with mismatched truncation orders."""


class PrecisionExhausted(DomainError):
    """An approximate p-adic result retains no significant digits."""


class InvalidTarget(PadicProbError):
    """Selector target is not a p-adic integer (denominator divisible by p)."""


class InsufficientData(PadicProbError):
    """A collective or selector cannot supply the amount of data asked for."""


class ConditioningOnNull(PadicProbError):
    """Conditional frequency requested where the conditioning count is zero."""


class InvalidLabel(PadicProbError):
    """A symbol outside the declared alphabet appeared in a data source."""


class AlphabetMismatch(PadicProbError):
    """Clopen/cylinder operands over different digit alphabets."""


class DigitRange(PadicProbError):
    """A digit outside 0..q-1 appeared in a word or encoding."""


class OscillationMissing(PadicProbError):
    """Riemann integration requested without a declared oscillation bound."""


class HypothesisViolation(PadicProbError):
    """Limit-theorem side conditions not met by the requested parameters."""


class RangeError(PadicProbError):
    """Binomial coefficient requested outside 0 <= r <= n."""


class NoRingStructure(PadicProbError):
    """Convolution requested in a group context without multiplication."""


class NotInvertible(PadicProbError):
    """Conditioning on an event whose probability has no inverse."""


class RegionNotSignificant(PadicProbError):
    """A critical region's probability lies outside its significance
    neighborhood; the test is misconfigured."""
