"""Exception hierarchy with machine-readable categories.

Every failure path in the pipeline raises a PipelineError subclass; the
`category` string is surfaced in CLI/service error payloads so callers can
dispatch without parsing messages.
"""


class PipelineError(Exception):
    category = "internal"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class ConfigError(PipelineError):
    category = "config"


class ValidationFailure(PipelineError):
    """A structural check on the assembled system failed (norm conditions,
    Edelstein sampling, invariant rectangle, endpoint identities)."""

    category = "validation"


class OperatorDomainError(PipelineError):
    """Input function handed to the interpolation operator was outside its
    admissible space (endpoint membership violated)."""

    category = "validation"


class ConvergenceError(PipelineError):
    category = "convergence"

    def __init__(self, message, diagnostics=None, **details):
        super().__init__(message, **details)
        self.diagnostics = diagnostics


class AnalysisError(PipelineError):
    category = "analysis"


class MissingArtifactError(PipelineError):
    """A pipeline stage needs output files a previous stage did not write."""

    category = "io"
