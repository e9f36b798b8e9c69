"""Named law instances shared by the command line and the acceptance suite."""

from __future__ import annotations

from .errors import CobcalcError
from .exactalg.poly import QQ, ZZ, PolyRing
from .fgl import FormalGroupLaw, additive, multiplicative
from .lazard import build, classifying_map, universal

LAW_NAMES = ("additive", "multiplicative", "universal")


def parse_law_name(label: str) -> tuple[str, int | None]:
    """``"universal:8"`` -> ``("universal", 8)``."""
    name, _, order = label.partition(":")
    if name not in LAW_NAMES:
        raise CobcalcError(f"unknown law {name!r}; choose from {', '.join(LAW_NAMES)}")
    if order:
        try:
            return name, int(order)
        except ValueError:
            raise CobcalcError(f"bad order in law {label!r}") from None
    return name, None


def make_law(label: str, order: int | None = None, ring: str = "Z", beta=None) -> FormalGroupLaw:
    """Build a named law.

    ``ring`` selects ZZ or QQ coefficients for the additive and
    multiplicative laws; the universal law is always over the Lazard ring.
    """
    name, inline = parse_law_name(label)
    order = order or inline or (8 if name == "universal" else 10)
    domain = {"Z": ZZ, "Q": QQ}.get(ring.upper())
    if domain is None:
        raise CobcalcError(f"ring must be Z or Q, not {ring!r}")
    if name == "additive":
        return additive(order, PolyRing((), domain))
    if name == "multiplicative":
        return multiplicative(order, domain, beta)
    if domain == QQ:
        raise CobcalcError("the universal law is defined over the Lazard ring (use --ring Z)")
    return universal(order)


def theta(target: FormalGroupLaw, max_degree: int):
    """Classifying map from the Lazard ring presented up to ``max_degree``."""
    return classifying_map(build(max_degree), target)
