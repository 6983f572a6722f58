from enum import Enum
from typing import List

from pydantic import BaseModel


class ValidationStatus(str, Enum):
    OK = "ok"
    ERROR = "error"


class ValidationStep(BaseModel):
    """A single named check inside a validation report."""

    name: str
    status: ValidationStatus
    message: str

    @classmethod
    def check(cls, name: str, passed: bool, message: str = "") -> "ValidationStep":
        return cls(
            name=name,
            status=ValidationStatus.OK if passed else ValidationStatus.ERROR,
            message=message or ("passed" if passed else "failed"),
        )

    @property
    def passed(self) -> bool:
        return self.status == ValidationStatus.OK


class ValidationReport(BaseModel):
    """Outcome of a list of checks; valid iff every step passed."""

    valid: bool
    message: str
    details: List[ValidationStep]

    @classmethod
    def from_steps(cls, steps: List[ValidationStep], subject: str) -> "ValidationReport":
        failed = [s.name for s in steps if not s.passed]
        if failed:
            message = f"{subject} failed: {', '.join(failed)}"
        else:
            message = f"{subject} passed"
        return cls(valid=not failed, message=message, details=steps)

    def step(self, name: str) -> ValidationStep:
        for s in self.details:
            if s.name == name:
                return s
        raise KeyError(name)

    def failed_steps(self) -> List[str]:
        return [s.name for s in self.details if not s.passed]
