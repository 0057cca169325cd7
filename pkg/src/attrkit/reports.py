"""Pass/fail report entries for the inequality checks.

Every entry is oriented so that the inequality reads `lhs REL rhs` and the
stored margin is nonnegative exactly when it is satisfied.  Exact rational
sides stay exact; sides that needed a square root are doubles and get an
interval-style boundary classification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import format_rational, is_exact

BOUNDARY_MARGIN_TOL = 1e-9

_FLIP = {"<=": ">=", "<": ">", ">=": "<=", ">": "<"}


@dataclass(frozen=True)
class BoundEntry:
    key: str
    lhs: object
    relation: str
    rhs: object
    note: str = ""

    def __post_init__(self):
        if self.relation not in _FLIP:
            raise ValueError(f"unknown relation {self.relation!r}")

    @property
    def strict(self) -> bool:
        return self.relation in ("<", ">")

    @property
    def margin(self):
        if self.relation in ("<=", "<"):
            return self.rhs - self.lhs
        return self.lhs - self.rhs

    @property
    def exact(self) -> bool:
        return is_exact(self.lhs) and is_exact(self.rhs)

    @property
    def status(self) -> str:
        m = self.margin
        if self.exact:
            if m == 0:
                return "boundary"
        elif abs(m) < BOUNDARY_MARGIN_TOL:
            return "boundary"
        return "satisfied" if m > 0 else "violated"

    @property
    def satisfied(self) -> bool:
        m = self.margin
        return m > 0 if self.strict else m >= 0

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "lhs": format_rational(self.lhs),
            "relation": self.relation,
            "rhs": format_rational(self.rhs),
            "margin": format_rational(self.margin),
            "status": self.status,
            "satisfied": self.satisfied,
            "note": self.note,
        }


@dataclass(frozen=True)
class NotApplicableEntry:
    """Placeholder for a check whose hypotheses fail on the given input."""

    key: str
    note: str

    status = "not_applicable"
    satisfied = True

    def to_dict(self) -> dict:
        return {"key": self.key, "status": self.status, "note": self.note}


@dataclass
class BoundsReport:
    entries: list = field(default_factory=list)

    def add(self, entry) -> None:
        self.entries.append(entry)

    def extend(self, entries) -> None:
        self.entries.extend(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, key):
        if isinstance(key, str):
            for e in self.entries:
                if e.key == key:
                    return e
            raise KeyError(key)
        return self.entries[key]

    @property
    def all_satisfied(self) -> bool:
        return all(e.satisfied for e in self.entries)

    def violated_keys(self) -> list[str]:
        return [e.key for e in self.entries if not e.satisfied]

    def to_dict(self) -> dict:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "all_satisfied": self.all_satisfied,
        }
