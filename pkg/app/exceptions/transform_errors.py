from app.exceptions.hoharmonic_error import HoharmonicError


class NonnegativityViolated(HoharmonicError):
    """Inversion was requested for a multiplicity with a negative orbit."""

    code = "nonnegativity_violated"
