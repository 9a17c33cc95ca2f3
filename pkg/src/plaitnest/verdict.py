"""Classification outcomes shared by the analytic and geometric classifiers."""

from enum import Enum


class Verdict(str, Enum):
    PLAITED = "plaited"
    NESTED = "nested"
    UNLINKED = "unlinked"

    def __str__(self) -> str:  # keep CLI/JSON output bare
        return self.value
