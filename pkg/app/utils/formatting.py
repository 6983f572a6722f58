import math
from numbers import Number


def format_complex(z: Number) -> str:
    """Serialize a complex number as an "a+bi" string."""
    z = complex(z)
    real, imag = z.real, z.imag
    if imag == 0 and not math.copysign(1.0, imag) < 0:
        return f"{real!r}+0.0i"
    sign = "-" if math.copysign(1.0, imag) < 0 else "+"
    return f"{real!r}{sign}{abs(imag)!r}i"


def parse_complex(text: str) -> complex:
    """Parse "0.3+1.2i", "1.0", "-2i" (also accepts a trailing j)."""
    cleaned = text.strip().replace(" ", "").replace("I", "i")
    if cleaned.endswith("i"):
        cleaned = cleaned[:-1] + "j"
        # "i" alone or "+i" means a unit imaginary part
        if cleaned in ("j", "+j", "-j") or cleaned[-2:] in ("+j", "-j"):
            cleaned = cleaned[:-1] + "1j"
    return complex(cleaned)
