"""HTTP service exposing the core operations, plus the shared handler layer
the CLI calls in process."""

from .handlers import (
    ServiceError,
    handle_check,
    handle_closure,
    handle_explain,
    handle_sanitize,
)
from .schemas import (
    CheckRequest,
    CheckResponse,
    ClosureRequest,
    ClosureResponse,
    ExplainRequest,
    ExplainResponse,
    FactMinsets,
    HealthResponse,
    SanitizeRequest,
    SanitizeResponse,
)

__all__ = [
    "CheckRequest",
    "CheckResponse",
    "ClosureRequest",
    "ClosureResponse",
    "ExplainRequest",
    "ExplainResponse",
    "FactMinsets",
    "HealthResponse",
    "SanitizeRequest",
    "SanitizeResponse",
    "ServiceError",
    "handle_check",
    "handle_closure",
    "handle_explain",
    "handle_sanitize",
]
