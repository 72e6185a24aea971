"""Longest common subsequence similarity and the cognate decision rule."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .corpus import Token


@dataclass(frozen=True)
class LcsrParams:
    """Cognate test parameters: subsequence-ratio cutoff and the minimum
    length for alphabetic words to qualify at all."""

    cutoff: float = 0.58
    min_alpha_len: int = 2

    def __post_init__(self):
        # cutoffs above 1 are allowed: they turn off alphabetic matching
        # while identical numbers and punctuation still count
        if self.cutoff < 0.0:
            raise ValueError(f"cutoff must be >= 0, got {self.cutoff}")
        if self.min_alpha_len < 1:
            raise ValueError(f"min_alpha_len must be >= 1, got {self.min_alpha_len}")


def lcs_length(a: str, b: str) -> int:
    """Length of the longest (not necessarily contiguous) common subsequence,
    by exact dynamic programming in O(len(a) * len(b))."""
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if ca == cb else max(cur[-1], prev[j]))
        prev = cur
    return prev[-1]


def lcsr(a: str, b: str) -> float:
    """Longest common subsequence length divided by the longer length."""
    if not a and not b:
        raise ValueError("lcsr is undefined for two empty strings")
    return lcs_length(a, b) / max(len(a), len(b))


@lru_cache(maxsize=1 << 20)
def _surfaces_are_cognate(a: str, b: str, cutoff: float, min_alpha_len: int) -> bool:
    if a.isalpha() and b.isalpha():
        if len(a) < min_alpha_len or len(b) < min_alpha_len:
            return False
        return lcsr(a, b) >= cutoff
    # numbers and punctuation act as their own translations
    return a == b and not a.isalpha()


def is_cognate(a: Token, b: Token, params: LcsrParams) -> bool:
    """True when two tokens look like translations on spelling alone:
    alphabetic words of sufficient length whose LCSR clears the cutoff, or
    identical non-alphabetic tokens."""
    return _surfaces_are_cognate(a.surface, b.surface, params.cutoff, params.min_alpha_len)
