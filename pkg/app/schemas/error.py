from typing import Any, Dict

from pydantic import BaseModel


class ErrorPayload(BaseModel):
    """What a failed command writes to stderr."""

    error: str
    """Exception class name."""

    code: str
    message: str
    details: Dict[str, Any] = {}
