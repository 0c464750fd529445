"""Finite region abstraction of clock and age valuations.

A region records, for a finite set of items (clocks, stack symbols, and
a reference item), each item's integral value up to a cap `cmax` plus
the ordering of their fractional parts.  It is a sequence of groups:
the first group holds the items with fractional part zero (it is the
only group allowed to be empty), and the remaining groups hold items
with equal fractional parts, ordered by increasing fractional part.
Integral values above the cap collapse to the symbol omega, rendered
``w``: beyond every constant of the model, magnitudes stop mattering.

Items come in two flavours.  A plain item stands for a live clock, the
age of the topmost stack symbol, or the reference item ``R`` that is
held at zero while time rotates around it.  A shadow item (rendered
with a trailing dot, e.g. ``x.``) records where the corresponding plain
item of the region one level down sat when the current region was
pushed, and ages along with everything else.

Passing time is a rotation of the group sequence: either the items with
fractional part zero step off together to form the smallest positive
fractional part (case A), or the group closest to the next integer
wraps around, incrementing its values (case B).  The reference item can
be pinned (move_ref=False) so rotation enumerates time successors, or
released (move_ref=True) so a whole region can be replayed forward.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Iterable, Iterator, Optional, Union

from .tpda import Interval


class RegionError(ValueError):
    """A region operation was applied outside its domain."""


class _Omega:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "w"


OMEGA = _Omega()
Val = Union[int, _Omega]

_KIND_RANK = {"ref": 0, "clock": 1, "sym": 2}


@dataclass(frozen=True)
class Item:
    kind: str  # "ref" | "clock" | "sym"
    name: str  # "" for the reference item
    shadow: bool = False

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise RegionError(f"unknown item kind {self.kind!r}")

    def render(self) -> str:
        base = "R" if self.kind == "ref" else self.name
        return base + "." if self.shadow else base


def ref_item(shadow: bool = False) -> Item:
    return Item("ref", "", shadow)


def clock_item(name: str, shadow: bool = False) -> Item:
    return Item("clock", name, shadow)


def sym_item(name: str, shadow: bool = False) -> Item:
    return Item("sym", name, shadow)


def item_key(it: Item):
    return (_KIND_RANK[it.kind], it.name, it.shadow)


def _val_ok(v, cmax: int) -> bool:
    return v is OMEGA or (isinstance(v, int) and 0 <= v <= cmax)


Group = tuple[tuple[Item, Val], ...]


@dataclass(frozen=True)
class Region:
    """Canonical form: groups are tuples sorted by item, values in range."""

    sets: tuple[Group, ...]
    cmax: int

    def __post_init__(self):
        if not self.sets:
            raise RegionError("a region needs at least its first group")
        if self.cmax < 0:
            raise RegionError("cmax must be nonnegative")
        seen = set()
        for i, group in enumerate(self.sets):
            if i > 0 and not group:
                raise RegionError(f"group {i} is empty (only the first may be)")
            keys = [item_key(it) for it, _v in group]
            if keys != sorted(keys):
                raise RegionError(f"group {i} is not in canonical item order")
            for it, v in group:
                if it in seen:
                    raise RegionError(f"item {it.render()} appears twice")
                seen.add(it)
                if not _val_ok(v, self.cmax):
                    raise RegionError(
                        f"value {v!r} of {it.render()} outside 0..{self.cmax}")
        # Regions are dict keys throughout the search; hashing the nested
        # tuples on every probe dominates runtime, so do it once here.
        object.__setattr__(self, "_hash", hash((self.sets, self.cmax)))

    def __hash__(self):
        return self._hash

    @staticmethod
    def make(groups: Iterable[Iterable[tuple[Item, Val]]], cmax: int) -> "Region":
        return Region(tuple(tuple(sorted(g, key=lambda p: item_key(p[0])))
                            for g in groups), cmax)

    def items(self) -> Iterator[Item]:
        for group in self.sets:
            for it, _v in group:
                yield it

    def position_of(self, it: Item) -> tuple[int, Val]:
        """(group index, value) of `it`; RegionError if absent."""
        for i, group in enumerate(self.sets):
            for jt, v in group:
                if jt == it:
                    return i, v
        raise RegionError(f"item {it.render()} does not occur in the region")

    def has_item(self, it: Item) -> bool:
        return any(jt == it for jt in self.items())

    def without(self, it: Item) -> "Region":
        groups = []
        for i, group in enumerate(self.sets):
            kept = tuple(p for p in group if p[0] != it)
            if kept or i == 0:
                groups.append(kept)
        return Region(tuple(groups), self.cmax)

    def plain_symbol(self) -> Optional[Item]:
        for it in self.items():
            if it.kind == "sym" and not it.shadow:
                return it
        return None


def region_sort_key(r: Region):
    def vk(v):
        return (1, 0) if v is OMEGA else (0, v)
    return tuple(tuple((item_key(it), vk(v)) for it, v in g) for g in r.sets)


def is_bottom_shape(r: Region) -> bool:
    """Plain clocks plus the plain reference item, nothing else."""
    has_ref = False
    for it in r.items():
        if it.shadow or it.kind == "sym":
            return False
        if it.kind == "ref":
            has_ref = True
    return has_ref


def is_stack_shape(r: Region) -> bool:
    """One plain stack symbol, shadows mirroring the region below."""
    plain_syms = [it for it in r.items() if it.kind == "sym" and not it.shadow]
    shadow_syms = [it for it in r.items() if it.kind == "sym" and it.shadow]
    if len(plain_syms) != 1 or len(shadow_syms) > 1:
        return False
    plain_clocks = {it.name for it in r.items()
                    if it.kind == "clock" and not it.shadow}
    shadow_clocks = {it.name for it in r.items()
                     if it.kind == "clock" and it.shadow}
    if plain_clocks != shadow_clocks:
        return False
    return r.has_item(ref_item()) and r.has_item(ref_item(shadow=True))


def region_of(valuation: dict[Item, Union[int, Fraction]], cmax: int) -> Region:
    """Abstract a concrete valuation into its region.

    Items with fractional part zero form the first group; the rest are
    grouped by equal fractional part in increasing order.  The integral
    value is kept when it is at most cmax and collapses to omega above;
    an omega item with a positive fractional part is still placed by
    that fractional part.
    """
    by_frac: dict[Fraction, list] = {}
    for it, raw in valuation.items():
        v = Fraction(raw)
        if v < 0:
            raise RegionError(f"negative value {raw} for {it.render()}")
        integral = math.floor(v)
        val: Val = integral if integral <= cmax else OMEGA
        by_frac.setdefault(v - integral, []).append((it, val))
    groups = [by_frac.get(Fraction(0), [])]
    for frac in sorted(f for f in by_frac if f != 0):
        groups.append(by_frac[frac])
    return Region.make(groups, cmax)


def rotate(r: Region, move_ref: bool) -> Region:
    """One rotation step of the fractional ordering.

    move_ref=False pins the plain reference item (it must sit in the
    first group); move_ref=True lets every item move.  Case A: the
    movable items with fractional part zero step out to form the new
    smallest positive fractional part, values unchanged.  Case B: the
    group nearest the next integer wraps into the first group, each
    value incremented, capping at omega past cmax.
    """
    ref = ref_item()
    if not move_ref:
        if not r.has_item(ref):
            raise RegionError("cannot pin the reference item: it is absent")
        if all(it != ref for it, _v in r.sets[0]):
            raise RegionError("pinned reference item must be in the first group")
    movable_in_first = [p for p in r.sets[0] if move_ref or p[0] != ref]
    if movable_in_first:
        # Case A
        pinned = tuple(p for p in r.sets[0] if p not in movable_in_first)
        groups = (pinned, tuple(movable_in_first)) + r.sets[1:]
        return Region.make(groups, r.cmax)
    if len(r.sets) == 1:
        return r  # nothing movable at all
    # Case B

    def bump(v: Val) -> Val:
        if v is OMEGA:
            return OMEGA
        return v + 1 if v + 1 <= r.cmax else OMEGA

    wrapped = tuple((it, bump(v)) for it, v in r.sets[-1])
    groups = (r.sets[0] + wrapped,) + r.sets[1:-1]
    return Region.make(groups, r.cmax)


def time_successors(r: Region) -> list[Region]:
    """All regions reachable by letting time pass, the input first.

    Iterates pinned rotation until a region repeats; the repeat itself
    is not included.
    """
    out = [r]
    seen = {r}
    cur = r
    while True:
        cur = rotate(cur, move_ref=False)
        if cur in seen:
            return out
        out.append(cur)
        seen.add(cur)


def satisfies(r: Region, it: Item, iv: Interval) -> bool:
    """Whether every concrete value consistent with `it`'s position lies
    in `iv`.

    First group, value n: the value is exactly n.  Later group, value n:
    the value lies strictly between n and n+1.  Omega: the value exceeds
    cmax, so only an unbounded interval is satisfied.
    """
    idx, v = r.position_of(it)
    if v is OMEGA:
        return iv.hi is None
    if idx == 0:
        return iv.contains(v)
    if iv.lo > v:
        return False
    return iv.hi is None or iv.hi >= v + 1


def insert_placements(r: Region, it: Item, iv: Interval) -> list[Region]:
    """Every region that places the absent item `it` so it satisfies `iv`.

    Candidate positions: join any existing group, or form a new
    singleton group at any point after the first; candidate values are
    0..cmax and omega.  Results are canonical and sorted.
    """
    if r.has_item(it):
        raise RegionError(f"item {it.render()} already occurs in the region")
    if iv.is_empty():
        raise RegionError(f"empty interval {iv.render()}")
    values: list[Val] = list(range(r.cmax + 1)) + [OMEGA]
    out = set()
    for v in values:
        for i in range(len(r.sets)):
            cand = Region.make(
                tuple(g + ((it, v),) if j == i else g
                      for j, g in enumerate(r.sets)), r.cmax)
            if satisfies(cand, it, iv):
                out.add(cand)
        for i in range(1, len(r.sets) + 1):
            cand = Region.make(r.sets[:i] + (((it, v),),) + r.sets[i:], r.cmax)
            if satisfies(cand, it, iv):
                out.add(cand)
    return sorted(out, key=region_sort_key)


def reset_insert(r: Region, it: Item, iv: Interval) -> list[Region]:
    """Every region obtained by removing `it` and re-inserting it at a
    position and value satisfying `iv`."""
    return insert_placements(r.without(it), it, iv)


def render_region(r: Region) -> str:
    def group(g: Group) -> str:
        return "{" + ", ".join(f"{it.render()}:{v!r}" for it, v in g) + "}"
    return " < ".join(group(g) for g in r.sets)


_ITEM_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*|R)(\.?):(w|\d+)$")


def parse_region(text: str, cmax: int,
                 symbols: AbstractSet[str] = frozenset()) -> Region:
    """Parse the render_region format.  ``R`` is the reference item and
    names listed in `symbols` become stack-symbol items; every other
    bare name becomes a clock (the text form itself does not mark the
    difference)."""
    groups = []
    for part in text.split("<"):
        part = part.strip()
        if not (part.startswith("{") and part.endswith("}")):
            raise RegionError(f"expected a {{...}} group, got {part!r}")
        body = part[1:-1].strip()
        group = []
        if body:
            for entry in body.split(","):
                m = _ITEM_RE.match(entry.strip())
                if not m:
                    raise RegionError(f"bad item entry {entry.strip()!r}")
                name, dot, val = m.groups()
                if name == "R":
                    it = ref_item(bool(dot))
                elif name in symbols:
                    it = sym_item(name, bool(dot))
                else:
                    it = clock_item(name, bool(dot))
                group.append((it, OMEGA if val == "w" else int(val)))
        groups.append(group)
    return Region.make(groups, cmax)
