"""Exception types raised across the package.

Every error carries a stable ``code`` string so callers (and the CLI) can
branch on the failure kind without matching on messages.
"""


class FlowError(Exception):
    code = "flow-error"


class CompositionError(FlowError, TypeError):
    code = "bad-composition"


class TargetNotInScenario(FlowError, LookupError):
    code = "target-not-in-scenario"


class MissingOptions(FlowError, ValueError):
    code = "missing-options"


class HostExists(FlowError, KeyError):
    code = "host-exists"

    def __str__(self):
        return Exception.__str__(self)


class UnknownStateType(FlowError, TypeError):
    code = "unknown-state-type"


class EncodingShapeError(FlowError, ValueError):
    code = "encoding-shape"


class ScenarioError(FlowError, ValueError):
    code = "scenario-invalid"
