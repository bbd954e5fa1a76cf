"""Bundles as integer bitmasks: bit g set <=> good g is in the bundle."""

from collections.abc import Iterable, Iterator

TABULAR_MAX_GOODS = 20  # hard cap for 2**m tables and exhaustive scans


def mask_of(goods: Iterable[int]) -> int:
    mask = 0
    for g in goods:
        mask |= 1 << g
    return mask


def bits_of(mask: int) -> Iterator[int]:
    """Yield the set good indices in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def full_mask(m: int) -> int:
    return (1 << m) - 1


def subsets_of(mask: int) -> Iterator[int]:
    """All submasks of `mask`, including 0 and `mask` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask
