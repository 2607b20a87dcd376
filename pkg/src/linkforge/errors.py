"""Error types shared across the package.

Every failure mode carries a stable machine-readable ``code`` so the CLI
and tests can dispatch on it without parsing messages.
"""


class LinkForgeError(Exception):
    code = "INTERNAL"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class GenericPositionViolation(LinkForgeError):
    code = "GENERIC_POSITION_VIOLATION"


class RetryExhausted(LinkForgeError):
    code = "RETRY_EXHAUSTED"


class FixtureDegenerate(LinkForgeError):
    code = "FIXTURE_DEGENERATE"


class ExpansionCapExceeded(LinkForgeError):
    code = "EXPANSION_CAP_EXCEEDED"


class SharedEndpoint(LinkForgeError):
    code = "SHARED_ENDPOINT"


class NonuniqueWeights(LinkForgeError):
    code = "NONUNIQUE_WEIGHTS"


class CyclesNotDisjoint(LinkForgeError):
    code = "CYCLES_NOT_DISJOINT"


class ParityError(LinkForgeError):
    code = "PARITY_ERROR"


class NotAKnot(LinkForgeError):
    code = "NOT_A_KNOT"


class OracleCapExceeded(LinkForgeError):
    code = "ORACLE_CAP_EXCEEDED"


class BadShape(LinkForgeError):
    code = "BAD_SHAPE"


class ZeroColumn(LinkForgeError):
    code = "ZERO_COLUMN"


class NotASingleCycle(LinkForgeError):
    code = "NOT_A_SINGLE_CYCLE"


class InconsistentOrientation(LinkForgeError):
    code = "INCONSISTENT_ORIENTATION"


class SpecBroken(LinkForgeError):
    code = "SPEC_BROKEN"


class HypothesisViolation(LinkForgeError):
    code = "HYPOTHESIS_VIOLATION"


class NoWitness(LinkForgeError):
    code = "NO_WITNESS"


class TYViolation(LinkForgeError):
    code = "TY_VIOLATION"


class PatternNotComplete(LinkForgeError):
    code = "PATTERN_NOT_COMPLETE"


class UnsupportedOperation(LinkForgeError):
    code = "UNSUPPORTED"
