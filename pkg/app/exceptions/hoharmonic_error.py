from typing import Any, Dict, Optional

from app.schemas.error import ErrorPayload


class HoharmonicError(Exception):
    """Base class for every domain error raised by the library."""

    code: str = "domain_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_payload(self) -> Dict[str, Any]:
        return ErrorPayload(
            error=type(self).__name__,
            code=self.code,
            message=self.message,
            details=self.details,
        ).model_dump()
