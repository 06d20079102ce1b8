"""Closed-form orientability for flag manifolds of the split classical algebras.

Flags are given by their dimension sequences ``1 <= d_1 < ... < d_k``.  For
so(l, l) the two families of maximal isotropic subspaces are marked ``l+``
(drops alpha_l from Theta) and ``l-`` (drops alpha_{l-1}).

Two deciders live here:

* :func:`orientable_closed_form` is the decider the package stands behind.
  Its rules come from adding up the subdiagram contributions around each
  simple root outside Theta, and :func:`cross_validate` checks them
  exhaustively against the general root criterion.
* :func:`published_closed_form` transcribes the published case list verbatim.  It
  is kept for comparison only; several of its cases disagree with the general
  criterion (see ``cross_validate(..., rule="published")``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

from .orientability import flag_orientable_full
from .rootsys import ParabolicSubset, RootSystemError, RootSystemSpec, build_root_system

CLASSICAL = ("A", "B", "C", "D")
HALF_SPIN = ("l+", "l-")


@dataclass(frozen=True)
class FlagDims:
    family: str
    l: int
    dims: tuple[int, ...]
    half_spin: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "half_spin", frozenset(self.half_spin))
        if self.family not in CLASSICAL:
            raise RootSystemError(f"flag dimensions are only defined for {CLASSICAL}, got {self.family!r}")
        RootSystemSpec(self.family, self.l)
        if any(b <= a for a, b in zip(self.dims, self.dims[1:])):
            raise RootSystemError(f"dimensions must be strictly increasing: {self.dims}")
        top = self.l - 2 if self.family == "D" else self.l
        if self.dims and not (1 <= self.dims[0] and self.dims[-1] <= top):
            raise RootSystemError(f"dimensions for {self.family}{self.l} must lie in [1, {top}]: {self.dims}")
        if self.half_spin and self.family != "D":
            raise RootSystemError("l+ / l- markers only apply to family D")
        if not self.half_spin <= set(HALF_SPIN):
            raise RootSystemError(f"unknown half-spin markers {sorted(self.half_spin - set(HALF_SPIN))}")
        if not self.dims and not self.half_spin:
            raise RootSystemError("a flag needs at least one dimension")

    @property
    def type_name(self) -> str:
        return f"{self.family}{self.l}"

    def __str__(self) -> str:
        parts = [str(d) for d in self.dims] + [h for h in HALF_SPIN if h in self.half_spin]
        return f"{self.type_name}:{','.join(parts)}"


_FLAG_RE = re.compile(r"^([A-D])(\d+):(.*)$")


def parse_flag_dims(token: str) -> FlagDims:
    """Parse ``B3:1,3`` or ``D5:2,l+,l-``."""
    m = _FLAG_RE.match(token.strip())
    if not m:
        raise RootSystemError(f"cannot parse flag token {token!r}; expected e.g. B3:1,3 or D5:2,l+")
    family, l, rest = m.group(1), int(m.group(2)), m.group(3)
    dims, half = [], set()
    for part in filter(None, (p.strip() for p in rest.split(","))):
        if part in HALF_SPIN:
            half.add(part)
        elif part.isdigit():
            dims.append(int(part))
        else:
            raise RootSystemError(f"bad flag dimension {part!r} in {token!r}")
    return FlagDims(family, l, tuple(dims), frozenset(half))


def dims_to_theta(fd: FlagDims) -> ParabolicSubset:
    removed = set(fd.dims)
    if "l+" in fd.half_spin:
        removed.add(fd.l)
    if "l-" in fd.half_spin:
        removed.add(fd.l - 1)
    return ParabolicSubset(frozenset(range(1, fd.l + 1)) - removed)


def theta_to_dims(family: str, l: int, theta: ParabolicSubset) -> FlagDims:
    """Inverse of :func:`dims_to_theta` (Theta must be a proper subset)."""
    outside = sorted(set(range(1, l + 1)) - set(theta))
    if family != "D":
        return FlagDims(family, l, tuple(outside))
    half = {"l+"} if l in outside else set()
    if l - 1 in outside:
        half.add("l-")
    return FlagDims(family, l, tuple(d for d in outside if d <= l - 2), frozenset(half))


def differences(seq: Sequence[int]) -> list[int]:
    return [b - a for a, b in zip(seq, seq[1:])]


def mod2_condition(seq: Sequence[int]) -> bool:
    """True iff the consecutive differences of ``seq`` (starting at 0) all share a parity."""
    if not seq or seq[0] != 0:
        raise ValueError("sequence must start at 0")
    diffs = differences(seq)
    if any(d <= 0 for d in diffs):
        raise ValueError("sequence must be strictly increasing")
    return len({d % 2 for d in diffs}) <= 1


def _all_odd(seq: Sequence[int]) -> bool:
    return all(d % 2 for d in differences(seq))


def _all_even(seq: Sequence[int]) -> bool:
    return all(d % 2 == 0 for d in differences(seq))


def orientable_closed_form(fd: FlagDims) -> bool:
    seq = (0,) + fd.dims
    l = fd.l
    if fd.family == "A":
        return mod2_condition(seq + (l + 1,))
    if fd.family == "B":
        if fd.dims[-1] == l:
            # alpha_l is short: it only sees even contributions
            return mod2_condition(seq)
        # the B_{l-d_k} tail contributes an odd amount to alpha_{d_k}
        return _all_even(seq)
    if fd.family == "C":
        return _all_odd(seq)
    # D
    if not fd.half_spin:
        return _all_odd(seq)
    if len(fd.half_spin) == 1:
        return mod2_condition(seq + (l,))
    return _all_odd(seq) and (l - seq[-1]) % 2 == 0


def published_closed_form(fd: FlagDims) -> bool:
    """The published case list read literally (comparison only)."""
    seq = (0,) + fd.dims
    d = fd.dims
    k = len(d)
    l = fd.l
    if fd.family == "A":
        return mod2_condition(seq + (l + 1,))
    if fd.family == "B":
        if d[-1] == l:
            return mod2_condition(seq)
        return mod2_condition(seq + (l,))
    if fd.family == "C":
        return mod2_condition(seq)
    if k == 0:
        return True
    diffs = differences(seq)
    if not fd.half_spin:
        if d[-1] <= l - 4:
            return mod2_condition(seq)
        if d[-1] == l - 3:
            return all(x % 2 == 0 for x in diffs)
        return all(x % 2 for x in diffs)
    if len(fd.half_spin) == 1:
        if d[-1] == l - 2:
            return all(x % 2 == 0 for x in diffs[: k - 1])
        return all(x % 2 for x in diffs[: k - 1]) and diffs[-1] % 2 == 0
    if d[-1] == l - 2:
        return mod2_condition(seq[: max(k - 1, 1)])
    return all(x % 2 for x in diffs[: k - 1])


def enumerate_flag_dims(family: str, l: int) -> list[FlagDims]:
    top = l - 2 if family == "D" else l
    spins = [frozenset(c) for r in range(3) for c in combinations(HALF_SPIN, r)] if family == "D" else [frozenset()]
    out = []
    for r in range(top + 1):
        for dims in combinations(range(1, top + 1), r):
            for half in spins:
                if dims or half:
                    out.append(FlagDims(family, l, dims, half))
    return out


@dataclass(frozen=True)
class Discrepancy:
    flag: FlagDims
    closed_form: bool
    general: bool

    def to_dict(self) -> dict:
        return {"flag": str(self.flag), "closed_form": self.closed_form, "general": self.general}


_RULES: dict[str, Callable[[FlagDims], bool]] = {
    "verified": orientable_closed_form,
    "published": published_closed_form,
}


def cross_validate(family: str, l_max: int, rule: str = "verified", l_min: int | None = None) -> list[Discrepancy]:
    """Compare a closed-form rule with the general criterion on every flag type up to rank ``l_max``."""
    decide = _RULES[rule]
    start = l_min or {"A": 1, "B": 2, "C": 3, "D": 4}[family]
    out = []
    for l in range(start, l_max + 1):
        rs = build_root_system(RootSystemSpec(family, l))
        for fd in enumerate_flag_dims(family, l):
            general = flag_orientable_full(rs, dims_to_theta(fd)).orientable
            closed = decide(fd)
            if closed != general:
                out.append(Discrepancy(fd, closed, general))
    return out
