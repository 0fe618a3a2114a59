"""Feature-column grammar for race tables.

Cost columns: ``<Prog|Bound|Prox><i>_<n>_<m>_<r>`` — player i's cost matrix
entry (n, m) at round r. State columns: ``State<i>_<var>_<r>`` with var in
{x, y, v, phi, beta}. Actions (``Act<i>_<r>``) and the fixed meta/outcome
names are targets or identifiers, never features.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

COST_NAMES = ("Prog", "Bound", "Prox")
STATE_VARS = ("x", "y", "v", "phi", "beta")

META_NAMES = frozenset({
    "race_id", "scenario", "method", "structure", "seed",
    "theta1_1", "theta1_2", "theta1_3", "theta2_1", "theta2_2", "theta2_3",
    "passed", "out_of_bounds", "collided", "min_distance", "lead_fraction",
})

_COST_RE = re.compile(r"^(Prog|Bound|Prox)([12])_([1-9]\d*)_([1-9]\d*)_([1-9]\d*)$")
_STATE_RE = re.compile(r"^State([12])_(x|y|v|phi|beta)_([1-9]\d*)$")
_ACTION_RE = re.compile(r"^Act([12])_([1-9]\d*)$")


class ColumnError(ValueError):
    """Malformed column name; the message pinpoints the column and character."""

    def __init__(self, name: str, index: int, position: int, reason: str):
        self.name, self.index, self.position, self.reason = name, index, position, reason
        super().__init__(f"column {index} {name!r}: {reason} (at character {position})")


@dataclass(frozen=True)
class ColumnInfo:
    kind: str  # "cost" | "state" | "action" | "meta"
    name: str
    cost_name: str | None = None
    player: int | None = None
    row: int | None = None
    col: int | None = None
    var: str | None = None
    round: int | None = None

    @property
    def is_feature(self) -> bool:
        return self.kind in ("cost", "state")


def _diagnose(name: str, index: int) -> ColumnError:
    """Build a precise error for a name that matches no grammar rule."""
    for prefix in COST_NAMES:
        if name.startswith(prefix):
            rest = name[len(prefix):]
            if not rest or rest[0] not in "12":
                return ColumnError(name, index, len(prefix), "player must be 1 or 2")
            parts = rest[1:].split("_")
            if len(parts) != 4 or parts[0] != "":
                return ColumnError(name, index, len(prefix) + 1,
                                   "expected _<row>_<col>_<round> after the player digit")
            return ColumnError(name, index, len(prefix) + 2,
                               "row/col/round must be positive integers")
    if name.startswith("State"):
        rest = name[5:]
        if not rest or rest[0] not in "12":
            return ColumnError(name, index, 5, "player must be 1 or 2")
        parts = rest[1:].split("_")
        if len(parts) != 3 or parts[0] != "":
            return ColumnError(name, index, 6, "expected _<var>_<round> after the player digit")
        if parts[1] not in STATE_VARS:
            return ColumnError(name, index, 7, f"state var must be one of {STATE_VARS}")
        return ColumnError(name, index, 8 + len(parts[1]), "round must be a positive integer")
    if name.startswith("Act"):
        return ColumnError(name, index, 3, "expected Act<player>_<round>")
    return ColumnError(name, index, 0, "unknown column family")


def parse_column(name: str, index: int = 0) -> ColumnInfo:
    m = _COST_RE.match(name)
    if m:
        return ColumnInfo("cost", name, cost_name=m.group(1), player=int(m.group(2)),
                          row=int(m.group(3)), col=int(m.group(4)), round=int(m.group(5)))
    m = _STATE_RE.match(name)
    if m:
        return ColumnInfo("state", name, player=int(m.group(1)), var=m.group(2),
                          round=int(m.group(3)))
    m = _ACTION_RE.match(name)
    if m:
        return ColumnInfo("action", name, player=int(m.group(1)), round=int(m.group(2)))
    if name in META_NAMES:
        return ColumnInfo("meta", name)
    raise _diagnose(name, index)


def validate_header(names) -> dict[str, ColumnInfo]:
    """Parse every column name; raises the first offender with position info."""
    return {name: parse_column(name, index) for index, name in enumerate(names)}
