from __future__ import annotations

from enum import Enum


class RoleCategory(str, Enum):
    """Semantic role of a PP.  Declaration order is the priority order."""

    LOC = "LOC"  # locative
    TMP = "TMP"  # temporal
    DIR = "DIR"  # direction
    MNR = "MNR"  # manner
    PRP = "PRP"  # purpose
    EXT = "EXT"  # extent
    BNF = "BNF"  # beneficiary
    NONE = "NONE"

    @property
    def priority(self) -> int:
        """Rank by treebank frequency; 0 is the most frequent (LOC)."""
        return _ORDER.index(self)

    @property
    def pp_label(self) -> str:
        return "PP" if self is RoleCategory.NONE else f"PP-{self.value}"

    @classmethod
    def parse(cls, text: str) -> "RoleCategory":
        text = text.strip().upper()
        if text.startswith("PP-"):
            text = text[3:]
        elif text == "PP":
            text = "NONE"
        return cls(text)


_ORDER = list(RoleCategory)
CATEGORIES = tuple(c for c in RoleCategory if c is not RoleCategory.NONE)
PP_LABELS = {c.pp_label: c for c in CATEGORIES}

# treebank occurrence counts of the augmented PP labels
TREEBANK_FREQUENCIES = {
    RoleCategory.LOC: 17220,
    RoleCategory.TMP: 10572,
    RoleCategory.DIR: 5453,
    RoleCategory.MNR: 1811,
    RoleCategory.PRP: 1096,
    RoleCategory.EXT: 280,
    RoleCategory.BNF: 44,
}


def highest_priority(categories) -> RoleCategory:
    """Most frequent category among ``categories``; NONE when empty."""
    best = RoleCategory.NONE
    for cat in categories:
        if cat is not RoleCategory.NONE and (best is RoleCategory.NONE or cat.priority < best.priority):
            best = cat
    return best
