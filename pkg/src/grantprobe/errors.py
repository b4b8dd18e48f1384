"""Exception types shared across the harness."""


class GrantProbeError(Exception):
    """Base class for all harness errors."""


# -- corpus -----------------------------------------------------------------

class EmptyCorpus(GrantProbeError):
    pass


class MalformedTable(GrantProbeError):
    def __init__(self, message: str, row_index: int | None = None):
        super().__init__(message)
        self.row_index = row_index


class EmptyGroup(GrantProbeError):
    pass


# -- perturb ----------------------------------------------------------------

class NotApplicable(GrantProbeError):
    """The perturbation's target scope is absent from the bundle."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class TransformFailed(GrantProbeError):
    """The transform rule produced no change; the variant is a no-op."""


# -- model gateway ----------------------------------------------------------

class TransportExhausted(GrantProbeError):
    pass


class ContextOverflow(GrantProbeError):
    pass


class DimensionMismatch(GrantProbeError):
    pass


class NoObjectFound(GrantProbeError):
    pass


class MissingField(GrantProbeError):
    def __init__(self, name: str):
        super().__init__(f"required field missing: {name}")
        self.name = name


# -- review -----------------------------------------------------------------

class ScoreOutOfRange(GrantProbeError):
    pass


class AllGroupsEmpty(GrantProbeError):
    pass


class RankingParseFailed(GrantProbeError):
    pass


class InconsistentLabelSets(GrantProbeError):
    pass


# -- judging ----------------------------------------------------------------

class EmptyInput(GrantProbeError):
    def __init__(self, name: str):
        super().__init__(f"input must be non-empty: {name}")
        self.name = name


class VerdictParseFailed(GrantProbeError):
    pass


class WrongPanelSize(GrantProbeError):
    pass


# -- claims -----------------------------------------------------------------

class EmptyClaims(GrantProbeError):
    pass


class UnknownCategory(GrantProbeError):
    pass


class OverlongAspect(GrantProbeError):
    pass


class UnknownRelation(GrantProbeError):
    pass


# -- stats ------------------------------------------------------------------

class DegenerateMatrix(GrantProbeError):
    pass


class AllZeroVariance(GrantProbeError):
    pass


class InsufficientData(GrantProbeError):
    pass


class UnequalRaterCounts(GrantProbeError):
    pass


class TooFewGroups(GrantProbeError):
    pass


class LengthMismatch(GrantProbeError):
    pass


class MismatchedPair(GrantProbeError):
    pass


# -- harness ----------------------------------------------------------------

class ConstraintViolation(GrantProbeError):
    pass


class DuplicateAnnotation(GrantProbeError):
    pass
