"""Orientability of flag manifolds and of stable/unstable bundles over fixed-point components.

Every verdict reduces to parities of ``sum_{beta in Gamma} n_beta <alpha^vee, beta>``
for a root set Gamma and a set of simple roots alpha to check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .rootsys import (
    DEFAULT_WEYL_LIMIT,
    ParabolicSubset,
    Root,
    RootSystem,
    RootSystemError,
    WeylWord,
    span_subset,
    weyl_enumerate,
)

STABLE = "stable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class ChamberElement:
    """H in the closed positive chamber, given by ``values[i] = alpha_{i+1}(H)``."""

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        vals = tuple(Fraction(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise RootSystemError("H must lie in the closed positive chamber (all alpha_i(H) >= 0)")
        object.__setattr__(self, "values", vals)

    @classmethod
    def parse(cls, text: str) -> ChamberElement:
        parts = [p for p in text.replace(" ", "").split(",") if p]
        try:
            return cls(tuple(Fraction(p) for p in parts))
        except (ValueError, ZeroDivisionError) as exc:
            raise RootSystemError(f"cannot parse chamber element {text!r}: {exc}") from None

    @classmethod
    def canonical(cls, theta: ParabolicSubset | Iterable[int], rank: int) -> ChamberElement:
        """H_Theta: value 0 on Theta and 1 elsewhere."""
        th = ParabolicSubset.of(theta)
        return cls(tuple(Fraction(0 if i in th else 1) for i in range(1, rank + 1)))

    @property
    def theta(self) -> ParabolicSubset:
        return ParabolicSubset(frozenset(i + 1 for i, v in enumerate(self.values) if v == 0))

    def validate(self, rank: int) -> ChamberElement:
        if len(self.values) != rank:
            raise RootSystemError(f"H needs {rank} values (one per simple root), got {len(self.values)}")
        return self

    def __call__(self, beta: Root | Sequence[int]) -> Fraction:
        coeffs = beta.coeffs if isinstance(beta, Root) else beta
        return sum((c * v for c, v in zip(coeffs, self.values)), Fraction(0))


@dataclass(frozen=True)
class BundleQuery:
    theta: ParabolicSubset
    H: ChamberElement
    w: WeylWord = WeylWord()
    sign: str = STABLE

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", ParabolicSubset.of(self.theta))
        if self.sign not in (STABLE, UNSTABLE):
            raise RootSystemError(f"sign must be {STABLE!r} or {UNSTABLE!r}, got {self.sign!r}")

    def validate(self, rank: int) -> BundleQuery:
        self.theta.validate(rank)
        self.H.validate(rank)
        self.w.validate(rank)
        return self


@dataclass(frozen=True)
class OrientabilityReport:
    orientable: bool
    sums: dict[int, int]
    failing: tuple[int, ...]
    checked_roots: tuple[Root, ...]
    criterion: str = ""
    # True when no simple root had to be checked
    vacuous: bool = False

    @property
    def fiber_dimension(self) -> int:
        return sum(r.mult for r in self.checked_roots)

    def to_dict(self) -> dict:
        return {
            "orientable": self.orientable,
            "criterion": self.criterion,
            "vacuous": self.vacuous,
            "sums": {str(k): v for k, v in sorted(self.sums.items())},
            "failing": list(self.failing),
            "checked_roots": [list(r.coeffs) for r in self.checked_roots],
            "fiber_dimension": self.fiber_dimension,
        }


def determinant_sum(rs: RootSystem, alpha_index: int, gamma_set: Iterable[Root]) -> int:
    """``sum_{beta in Gamma} n_beta <alpha_i^vee, beta>``."""
    return sum(b.mult * rs.pairing(alpha_index, b.coeffs) for b in gamma_set)


def gamma_det_sign(rs: RootSystem, alpha_index: int, gamma_set: Iterable[Root]) -> int:
    """Sign of det(gamma_alpha) on the sum of the root spaces in ``gamma_set``."""
    rs._check_index(alpha_index)
    return -1 if determinant_sum(rs, alpha_index, gamma_set) % 2 else 1


def _report(rs: RootSystem, alphas: Iterable[int], gamma: Sequence[Root], criterion: str) -> OrientabilityReport:
    alphas = sorted(alphas)
    sums = {a: determinant_sum(rs, a, gamma) for a in alphas}
    failing = tuple(a for a in alphas if sums[a] % 2)
    return OrientabilityReport(
        orientable=not failing,
        sums=sums,
        failing=failing,
        checked_roots=tuple(gamma),
        criterion=criterion,
        vacuous=not alphas,
    )


def flag_orientable_full(rs: RootSystem, theta: ParabolicSubset | Iterable[int]) -> OrientabilityReport:
    """Check every simple root against the tangent roots Pi+ minus <Theta>."""
    th = ParabolicSubset.of(theta).validate(rs.rank)
    inside = {r.coeffs for r in span_subset(rs, th)}
    gamma = [r for r in rs.positive_roots if r.coeffs not in inside]
    return _report(rs, range(1, rs.rank + 1), gamma, "full")


def flag_orientable_reduced(rs: RootSystem, theta: ParabolicSubset | Iterable[int]) -> OrientabilityReport:
    """Check only the simple roots outside Theta, summing over <Theta>+."""
    th = ParabolicSubset.of(theta).validate(rs.rank)
    return _report(rs, th.complement(rs.rank), span_subset(rs, th), "reduced")


def flag_orientable(rs: RootSystem, theta: ParabolicSubset | Iterable[int], variant: str = "full") -> OrientabilityReport:
    if variant == "full":
        return flag_orientable_full(rs, theta)
    if variant == "reduced":
        return flag_orientable_reduced(rs, theta)
    raise RootSystemError(f"unknown criterion variant {variant!r}")


def _root_set(
    rs: RootSystem,
    H: ChamberElement,
    sign: str,
    inverse_letters: Sequence[int],
    theta_values: Sequence[Fraction],
) -> list[Root]:
    out = []
    for beta in rs.roots:
        h = H(beta)
        if (h < 0) if sign == STABLE else (h > 0):
            # beta(w H_Theta) = (w^-1 beta)(H_Theta)
            c = list(beta.coeffs)
            for i in reversed(inverse_letters):
                c[i - 1] -= rs.pairing(i, c)
            if sum((x * v for x, v in zip(c, theta_values)), Fraction(0)) < 0:
                out.append(beta)
    return out


def stable_root_set(
    rs: RootSystem,
    q: BundleQuery,
    theta_values: Sequence[Fraction] | None = None,
) -> list[Root]:
    """Pi_Theta^-(H, w) (or Pi_Theta^+ for the unstable sign).

    ``theta_values`` overrides the canonical H_Theta; any chamber element that
    vanishes exactly on Theta gives the same set.
    """
    q.validate(rs.rank)
    if theta_values is None:
        theta_values = ChamberElement.canonical(q.theta, rs.rank).values
    else:
        hv = ChamberElement(tuple(theta_values)).validate(rs.rank)
        if hv.theta != q.theta:
            raise RootSystemError("theta_values must vanish exactly on Theta")
        theta_values = hv.values
    return _root_set(rs, q.H, q.sign, q.w.inverse().letters, theta_values)


def bundle_orientable(rs: RootSystem, q: BundleQuery) -> OrientabilityReport:
    """Orientability of V_Theta^{-/+}(H, w): check alpha in Theta(H) against Pi_Theta^{-/+}(H, w)."""
    gamma = stable_root_set(rs, q)
    return _report(rs, q.H.theta, gamma, f"bundle-{q.sign}")


@dataclass(frozen=True)
class FixedComponent:
    word: WeylWord
    stable: OrientabilityReport
    unstable: OrientabilityReport

    @property
    def stable_dimension(self) -> int:
        return self.stable.fiber_dimension

    @property
    def unstable_dimension(self) -> int:
        return self.unstable.fiber_dimension

    def to_dict(self) -> dict:
        return {
            "w": str(self.word),
            "stable": self.stable.to_dict(),
            "unstable": self.unstable.to_dict(),
            "stable_dimension": self.stable_dimension,
            "unstable_dimension": self.unstable_dimension,
        }


def fixed_components_scan(
    rs: RootSystem,
    theta: ParabolicSubset | Iterable[int],
    H: ChamberElement,
    limit: int = DEFAULT_WEYL_LIMIT,
    elements=None,
) -> list[FixedComponent]:
    """One entry per distinct (stable set, unstable set) pair over all w in W.

    Representatives are the first w met in BFS order, so they carry shortest words.
    ``elements`` may pass a pre-enumerated (e.g. cached) Weyl group.
    """
    th = ParabolicSubset.of(theta).validate(rs.rank)
    H.validate(rs.rank)
    if elements is None:
        elements = weyl_enumerate(rs, limit)
    seen = set()
    out = []
    for elem in elements:
        st = bundle_orientable(rs, BundleQuery(th, H, elem.word, STABLE))
        un = bundle_orientable(rs, BundleQuery(th, H, elem.word, UNSTABLE))
        key = (frozenset(r.coeffs for r in st.checked_roots), frozenset(r.coeffs for r in un.checked_roots))
        if key in seen:
            continue
        seen.add(key)
        out.append(FixedComponent(elem.word, st, un))
    return out
