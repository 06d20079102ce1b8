"""Restricted root systems (types A-G and non-reduced BC) in exact arithmetic.

Simple roots follow the usual diagram labels: for B/C/D the special end of the
diagram sits at the high indices, G2 has the long root first, F4 has the long
roots alpha_1, alpha_2, and E6/E7/E8 hang their extra node off the chain at
alpha_3 / alpha_4 / alpha_5 respectively.

Cartan matrix convention: ``cartan[i][j] = <alpha_i^vee, alpha_j>``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Sequence

Coeffs = tuple[int, ...]
Vector = tuple[Fraction, ...]

FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "BC")
PRESETS = ("split", "complex", "custom")
LENGTH_CLASSES = ("short", "long", "double")
DEFAULT_WEYL_LIMIT = 10**6

_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4, "BC": 1}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


class RootSystemError(ValueError):
    """Invalid root-system input (bad family/rank, unknown root, bad word)."""


class WeylLimitError(RootSystemError):
    """Raised when a Weyl group is larger than the caller's enumeration guard."""

    def __init__(self, order: int, limit: int, token: str):
        self.order = order
        self.limit = limit
        super().__init__(
            f"|W({token})| = {order} exceeds the enumeration limit {limit}; "
            f"a limit of at least {order} is required"
        )


@dataclass(frozen=True)
class RootSystemSpec:
    family: str
    rank: int
    multiplicity_preset: str = "split"
    # sorted (length_class, multiplicity) pairs; only used with the custom preset
    custom_multiplicities: tuple[tuple[str, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise RootSystemError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise RootSystemError(f"rank must be a positive integer, got {self.rank!r}")
        if self.family in _FIXED_RANKS:
            allowed = _FIXED_RANKS[self.family]
            if self.rank not in allowed:
                raise RootSystemError(
                    f"{self.family}{self.rank} is not a root system: "
                    f"family {self.family} exists only in rank {', '.join(map(str, allowed))}"
                )
        elif self.rank < _MIN_RANK[self.family]:
            raise RootSystemError(
                f"{self.family}{self.rank} is not allowed: family {self.family} "
                f"requires rank >= {_MIN_RANK[self.family]}"
            )
        if self.multiplicity_preset not in PRESETS:
            raise RootSystemError(f"unknown multiplicity preset {self.multiplicity_preset!r}")
        if self.multiplicity_preset == "custom":
            if not self.custom_multiplicities:
                raise RootSystemError("custom preset needs custom_multiplicities")
            mults = dict(self.custom_multiplicities)
            if isinstance(self.custom_multiplicities, dict):
                object.__setattr__(self, "custom_multiplicities", tuple(sorted(mults.items())))
            for key, value in mults.items():
                if key not in LENGTH_CLASSES:
                    raise RootSystemError(f"unknown root-length class {key!r}")
                if not isinstance(value, int) or value < 1:
                    raise RootSystemError(f"multiplicity for {key} must be a positive integer")
        elif self.custom_multiplicities is not None:
            raise RootSystemError("custom_multiplicities given without the custom preset")

    @property
    def type_name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def token(self) -> str:
        """Normalized token in the input grammar, e.g. ``B3:complex``."""
        if self.multiplicity_preset == "split":
            return self.type_name
        if self.multiplicity_preset == "complex":
            return f"{self.type_name}:complex"
        mults = dict(self.custom_multiplicities or ())
        parts = [str(mults.get("short", 1)), str(mults.get("long", 1))]
        if "double" in mults:
            parts.append(str(mults["double"]))
        return f"{self.type_name}:mult={','.join(parts)}"

    def multiplicity(self, length_class: str) -> int:
        if self.multiplicity_preset == "split":
            return 1
        if self.multiplicity_preset == "complex":
            return 2
        mults = dict(self.custom_multiplicities or ())
        if length_class not in mults:
            raise RootSystemError(
                f"{self.type_name} has {length_class} roots but no multiplicity was given for them"
            )
        return mults[length_class]


_TOKEN_RE = re.compile(r"^(BC|[A-G])(\d+)(?::(split|complex|mult=(\d+),(\d+)(?:,(\d+))?))?$")


def parse_type(token: str) -> RootSystemSpec:
    """Parse ``<family><rank>[:split|:complex|:mult=<short>,<long>[,<double>]]``."""
    m = _TOKEN_RE.match(token.strip())
    if not m:
        raise RootSystemError(f"cannot parse root-system token {token!r}")
    family, rank, suffix, short, long_, double = m.groups()
    if suffix is None or suffix == "split":
        return RootSystemSpec(family, int(rank))
    if suffix == "complex":
        return RootSystemSpec(family, int(rank), "complex")
    mults = {"short": int(short), "long": int(long_)}
    if double is not None:
        mults["double"] = int(double)
    return RootSystemSpec(family, int(rank), "custom", tuple(sorted(mults.items())))


@dataclass(frozen=True)
class Root:
    coeffs: Coeffs
    ambient: Vector
    mult: int
    length2: Fraction

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def is_positive(self) -> bool:
        return any(c > 0 for c in self.coeffs)

    def __neg__(self) -> Root:
        return Root(tuple(-c for c in self.coeffs), tuple(-x for x in self.ambient), self.mult, self.length2)

    def __str__(self) -> str:
        return format_coeffs(self.coeffs)


@dataclass(frozen=True)
class DynkinEdge:
    i: int
    j: int
    bond: int
    # 1-based index of the shorter root for multiple bonds, else None
    arrow_to: int | None


@dataclass(frozen=True)
class ParabolicSubset:
    """A set of 1-based simple-root indices."""

    indices: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "indices", frozenset(self.indices))

    @classmethod
    def of(cls, theta: ParabolicSubset | Iterable[int]) -> ParabolicSubset:
        if isinstance(theta, ParabolicSubset):
            return theta
        return cls(frozenset(theta))

    @classmethod
    def from_mask(cls, mask: int, rank: int) -> ParabolicSubset:
        return cls(frozenset(i + 1 for i in range(rank) if mask >> i & 1))

    @property
    def mask(self) -> int:
        return sum(1 << (i - 1) for i in self.indices)

    def validate(self, rank: int) -> ParabolicSubset:
        bad = sorted(i for i in self.indices if not 1 <= i <= rank)
        if bad:
            raise RootSystemError(f"simple-root indices {bad} out of range 1..{rank}")
        return self

    def complement(self, rank: int) -> ParabolicSubset:
        return ParabolicSubset(frozenset(range(1, rank + 1)) - self.indices)

    def __contains__(self, i: object) -> bool:
        return i in self.indices

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.indices))

    def __len__(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"


@dataclass(frozen=True)
class WeylWord:
    """Product ``s_{l1} s_{l2} ... s_{lk}``; acts on roots right-to-left."""

    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))

    def inverse(self) -> WeylWord:
        return WeylWord(self.letters[::-1])

    def validate(self, rank: int) -> WeylWord:
        bad = [i for i in self.letters if not 1 <= i <= rank]
        if bad:
            raise RootSystemError(f"Weyl word letters {bad} out of range 1..{rank}")
        return self

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return ".".join(f"s{i}" for i in self.letters)


def parse_word(text: str) -> WeylWord:
    """Parse ``s1.s2.s1`` (or ``1.2.1`` / ``1,2,1``); ``""``, ``e`` and ``id`` are the identity."""
    text = text.strip()
    if not text or text in ("e", "id"):
        return WeylWord()
    letters = []
    for part in re.split(r"[.,\s]+", text):
        m = re.fullmatch(r"s?(\d+)", part)
        if not m:
            raise RootSystemError(f"cannot parse Weyl word {text!r}: bad letter {part!r}")
        letters.append(int(m.group(1)))
    return WeylWord(tuple(letters))


def format_coeffs(coeffs: Sequence[int]) -> str:
    terms = []
    for j, c in enumerate(coeffs, start=1):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        terms.append(f"{sign}{mag}a{j}")
    if not terms:
        return "0"
    out = "".join(terms)
    return out[1:] if out.startswith("+") else out


def _dot(x: Vector, y: Vector) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def _unit(n: int, *entries: tuple[int, Fraction | int]) -> Vector:
    v = [Fraction(0)] * n
    for k, val in entries:
        v[k] = Fraction(val)
    return tuple(v)


def _e8_chain() -> list[Vector]:
    # weights of sl(9) projected to the trace-zero hyperplane:
    # lambda_i - lambda_j and lambda_i + lambda_j + lambda_k
    third = Fraction(1, 3)
    chain = [_unit(9, (i, 1), (i + 1, -1)) for i in range(7)]
    triple = tuple(Fraction(1 if k in (5, 6, 7) else 0) - third for k in range(9))
    return chain + [triple]


def _simple_ambient(family: str, rank: int) -> list[Vector]:
    n = rank
    if family == "A":
        return [_unit(n + 1, (i, 1), (i + 1, -1)) for i in range(n)]
    if family in ("B", "BC", "C", "D"):
        roots = [_unit(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        if family in ("B", "BC"):
            roots.append(_unit(n, (n - 1, 1)))
        elif family == "C":
            roots.append(_unit(n, (n - 1, 2)))
        else:
            roots.append(_unit(n, (n - 2, 1), (n - 1, 1)))
        return roots
    if family == "G":
        return [_unit(3, (0, -2), (1, 1), (2, 1)), _unit(3, (0, 1), (1, -1))]
    if family == "F":
        half = Fraction(1, 2)
        return [
            _unit(4, (1, 1), (2, -1)),
            _unit(4, (2, 1), (3, -1)),
            _unit(4, (3, 1)),
            (half, -half, -half, -half),
        ]
    if family == "E":
        e8 = _e8_chain()
        # drop leading chain nodes; the branch node e8[7] stays attached to the right place
        drop = 8 - rank
        return e8[drop:7] + [e8[7]]
    raise RootSystemError(f"unknown family {family!r}")


def _cartan_from_ambient(simple: Sequence[Vector]) -> tuple[tuple[int, ...], ...]:
    rows = []
    for a in simple:
        aa = _dot(a, a)
        row = []
        for b in simple:
            val = 2 * _dot(a, b) / aa
            if val.denominator != 1:
                raise AssertionError("non-integral Cartan entry")
            row.append(int(val))
        rows.append(tuple(row))
    return tuple(rows)


def _positive_coeffs(cartan: Sequence[Sequence[int]]) -> list[Coeffs]:
    """Positive roots of a reduced system by root-string closure from the simple roots."""
    rank = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    known = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(rank):
                pairing = sum(cartan[i][j] * beta[j] for j in range(rank))
                p = 0
                while True:
                    down = beta[:i] + (beta[i] - p - 1,) + beta[i + 1:]
                    if down in known:
                        p += 1
                    else:
                        break
                if p - pairing > 0:
                    up = beta[:i] + (beta[i] + 1,) + beta[i + 1:]
                    if up not in known:
                        known.add(up)
                        nxt.append(up)
        layer = nxt
    return list(known)


def _sort_key(c: Coeffs) -> tuple[int, Coeffs]:
    return (sum(c), c)


@dataclass(frozen=True)
class RootSystem:
    spec: RootSystemSpec
    rank: int
    simple_ambient: tuple[Vector, ...]
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Root, ...]
    reduced: bool
    _index: dict[Coeffs, Root] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {}
        for r in self.positive_roots:
            index[r.coeffs] = r
            neg = -r
            index[neg.coeffs] = neg
        object.__setattr__(self, "_index", index)

    @property
    def family(self) -> str:
        return self.spec.family

    @property
    def type_name(self) -> str:
        return self.spec.type_name

    @property
    def token(self) -> str:
        return self.spec.token

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(self._index[self.unit(i)] for i in range(1, self.rank + 1))

    def simple_root(self, i: int) -> Root:
        self._check_index(i)
        return self._index[self.unit(i)]

    @property
    def negative_roots(self) -> tuple[Root, ...]:
        return tuple(-r for r in self.positive_roots)

    @property
    def roots(self) -> tuple[Root, ...]:
        """All roots: positive roots followed by their negatives, same order."""
        return self.positive_roots + self.negative_roots

    def unit(self, i: int) -> Coeffs:
        return tuple(1 if j == i - 1 else 0 for j in range(self.rank))

    def is_root(self, coeffs: Sequence[int]) -> bool:
        return tuple(coeffs) in self._index

    def root(self, coeffs: Sequence[int]) -> Root:
        try:
            return self._index[tuple(coeffs)]
        except KeyError:
            raise RootSystemError(f"{format_coeffs(coeffs)} is not a root of {self.type_name}") from None

    def pairing(self, i: int, coeffs: Sequence[int]) -> int:
        """``<alpha_i^vee, beta>`` for beta given by simple-root coefficients."""
        row = self.cartan[i - 1]
        return sum(a * c for a, c in zip(row, coeffs))

    def evaluate(self, coeffs: Sequence[int], values: Sequence[Fraction]) -> Fraction:
        """``beta(H)`` where ``values[i] = alpha_{i+1}(H)``."""
        return sum((c * v for c, v in zip(coeffs, values)), Fraction(0))

    @property
    def adjacency(self) -> tuple[DynkinEdge, ...]:
        edges = []
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                a, b = self.cartan[i][j], self.cartan[j][i]
                if a == 0:
                    continue
                bond = a * b
                arrow = None
                if bond > 1:
                    li = self.simple_ambient[i]
                    lj = self.simple_ambient[j]
                    arrow = i + 1 if _dot(li, li) < _dot(lj, lj) else j + 1
                edges.append(DynkinEdge(i + 1, j + 1, bond, arrow))
        return tuple(edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(j + 1 for j in range(self.rank) if j != i - 1 and self.cartan[i - 1][j] != 0)

    def _check_index(self, i: int) -> None:
        if not isinstance(i, int) or not 1 <= i <= self.rank:
            raise RootSystemError(f"simple-root index {i!r} out of range 1..{self.rank}")


def _length_classes(coeff_list: Sequence[Coeffs], lengths: dict[Coeffs, Fraction]) -> dict[Coeffs, str]:
    coeff_set = set(coeff_list)
    doubles = {c for c in coeff_list if all(x % 2 == 0 for x in c) and tuple(x // 2 for x in c) in coeff_set}
    plain = [lengths[c] for c in coeff_list if c not in doubles]
    lo, hi = min(plain), max(plain)
    out = {}
    for c in coeff_list:
        if c in doubles:
            out[c] = "double"
        elif lo != hi and lengths[c] == lo:
            out[c] = "short"
        else:
            # single-length systems count as long
            out[c] = "long"
    return out


def build_root_system(spec: RootSystemSpec | str) -> RootSystem:
    """Build the positive roots, Cartan matrix and multiplicities for ``spec``."""
    if isinstance(spec, str):
        spec = parse_type(spec)
    simple = _simple_ambient(spec.family, spec.rank)
    cartan = _cartan_from_ambient(simple)
    coeff_list = _positive_coeffs(cartan)
    if spec.family == "BC":
        # 2*lambda_i for every short root lambda_i
        shorts = [c for c in coeff_list if _dot(_ambient(c, simple), _ambient(c, simple)) == 1]
        coeff_list += [tuple(2 * x for x in c) for c in shorts]
    coeff_list.sort(key=_sort_key)
    ambients = {c: _ambient(c, simple) for c in coeff_list}
    lengths = {c: _dot(v, v) for c, v in ambients.items()}
    classes = _length_classes(coeff_list, lengths)
    roots = tuple(Root(c, ambients[c], spec.multiplicity(classes[c]), lengths[c]) for c in coeff_list)
    return RootSystem(spec, spec.rank, tuple(simple), cartan, roots, spec.family != "BC")


def _ambient(coeffs: Sequence[int], simple: Sequence[Vector]) -> Vector:
    dim = len(simple[0])
    return tuple(sum((c * s[k] for c, s in zip(coeffs, simple)), Fraction(0)) for k in range(dim))


def root_length_class(rs: RootSystem, beta: Root) -> str:
    coeffs = [r.coeffs for r in rs.positive_roots]
    lengths = {r.coeffs: r.length2 for r in rs.positive_roots}
    key = beta.coeffs if beta.is_positive else tuple(-c for c in beta.coeffs)
    return _length_classes(coeffs, lengths)[key]


def _as_root(rs: RootSystem, beta: Root | Sequence[int]) -> Root:
    if isinstance(beta, Root):
        found = rs._index.get(beta.coeffs)
        if found is None or found.ambient != beta.ambient:
            raise RootSystemError(f"{beta} is not a root of {rs.type_name}")
        return found
    return rs.root(beta)


def cartan_integer(rs: RootSystem, alpha: Root | Sequence[int], beta: Root | Sequence[int]) -> int:
    """``<alpha^vee, beta> = 2<alpha, beta>/<alpha, alpha>``, asserted integral."""
    a = _as_root(rs, alpha)
    b = beta if isinstance(beta, Root) else Root(tuple(beta), _ambient(beta, rs.simple_ambient), 1, Fraction(1))
    val = 2 * _dot(a.ambient, b.ambient) / a.length2
    if val.denominator != 1:
        raise AssertionError(f"non-integral Cartan integer <{a}^vee, {b}> = {val}")
    return int(val)


def reflect(rs: RootSystem, i: int, beta: Root | Sequence[int]) -> Root:
    """``s_i(beta) = beta - <alpha_i^vee, beta> alpha_i``."""
    rs._check_index(i)
    b = _as_root(rs, beta)
    k = rs.pairing(i, b.coeffs)
    coeffs = list(b.coeffs)
    coeffs[i - 1] -= k
    return rs.root(coeffs)


def _apply_letters(rs: RootSystem, letters: Sequence[int], coeffs: Coeffs) -> Coeffs:
    out = list(coeffs)
    for i in reversed(letters):
        out[i - 1] -= rs.pairing(i, out)
    return tuple(out)


def weyl_apply(rs: RootSystem, w: WeylWord | Sequence[int], beta: Root | Sequence[int]) -> Root:
    """Apply the word's reflections right-to-left; the empty word is the identity."""
    word = w if isinstance(w, WeylWord) else WeylWord(tuple(w))
    word.validate(rs.rank)
    b = _as_root(rs, beta)
    return rs.root(_apply_letters(rs, word.letters, b.coeffs))


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element stored as the images of the simple roots."""

    word: WeylWord
    images: tuple[Coeffs, ...]

    def act(self, coeffs: Sequence[int]) -> Coeffs:
        rank = len(self.images)
        out = [0] * rank
        for c, img in zip(coeffs, self.images):
            if c:
                for k in range(rank):
                    out[k] += c * img[k]
        return tuple(out)

    @property
    def length(self) -> int:
        return len(self.word)


def signed_permutation(rs: RootSystem, w: WeylElement) -> tuple[tuple[int, int], ...]:
    """For each positive root (in order) the pair (sign, index) with ``w(beta_k) = sign * beta_index``."""
    pos = {r.coeffs: k for k, r in enumerate(rs.positive_roots)}
    out = []
    for r in rs.positive_roots:
        img = w.act(r.coeffs)
        if img in pos:
            out.append((1, pos[img]))
        else:
            out.append((-1, pos[tuple(-c for c in img)]))
    return tuple(out)


def weyl_order(rs: RootSystem | RootSystemSpec) -> int:
    spec = rs.spec if isinstance(rs, RootSystem) else rs
    f, n = spec.family, spec.rank
    if f == "A":
        return factorial(n + 1)
    if f in ("B", "C", "BC"):
        return 2**n * factorial(n)
    if f == "D":
        return 2 ** (n - 1) * factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}[(f, n)]


def identity_element(rs: RootSystem) -> WeylElement:
    return WeylElement(WeylWord(), tuple(rs.unit(i) for i in range(1, rs.rank + 1)))


def _times_simple(rs: RootSystem, w: WeylElement, i: int) -> tuple[Coeffs, ...]:
    # (w s_i)(alpha_j) = w(alpha_j) - A[i][j] w(alpha_i)
    row = rs.cartan[i - 1]
    wi = w.images[i - 1]
    out = []
    for j, img in enumerate(w.images):
        a = row[j]
        out.append(img if a == 0 else tuple(x - a * y for x, y in zip(img, wi)))
    return tuple(out)


def weyl_enumerate(rs: RootSystem, limit: int = DEFAULT_WEYL_LIMIT) -> list[WeylElement]:
    """All Weyl group elements in BFS order, each tagged with a reduced word."""
    order = weyl_order(rs)
    if order > limit:
        raise WeylLimitError(order, limit, rs.type_name)
    start = identity_element(rs)
    seen = {start.images}
    out = [start]
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(1, rs.rank + 1):
            images = _times_simple(rs, w, i)
            if images not in seen:
                seen.add(images)
                nw = WeylElement(WeylWord(w.word.letters + (i,)), images)
                out.append(nw)
                queue.append(nw)
    if len(out) != order:
        raise AssertionError(f"enumerated {len(out)} elements, expected {order}")
    return out


def element_from_word(rs: RootSystem, w: WeylWord | Sequence[int]) -> WeylElement:
    word = w if isinstance(w, WeylWord) else WeylWord(tuple(w))
    word.validate(rs.rank)
    images = tuple(_apply_letters(rs, word.letters, rs.unit(i)) for i in range(1, rs.rank + 1))
    return WeylElement(word, images)


def longest_element(rs: RootSystem) -> WeylWord:
    """Reduced word for w0, found by extending w while some w(alpha_i) stays positive."""
    w = identity_element(rs)
    while True:
        for i in range(1, rs.rank + 1):
            if any(c > 0 for c in w.images[i - 1]):
                w = WeylElement(WeylWord(w.word.letters + (i,)), _times_simple(rs, w, i))
                break
        else:
            return w.word


def span_subset(rs: RootSystem, theta: ParabolicSubset | Iterable[int]) -> list[Root]:
    """Positive roots supported on ``theta``."""
    th = ParabolicSubset.of(theta).validate(rs.rank)
    return [r for r in rs.positive_roots if all(c == 0 or (j + 1) in th for j, c in enumerate(r.coeffs))]
