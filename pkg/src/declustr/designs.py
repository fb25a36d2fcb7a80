"""t-(n,k,lambda) designs: validation, construction, and block counting.

A design is a collection of k-subsets (blocks) of {0,...,n-1} such that every
t-subset of points lies in exactly lambda blocks. Blocks are stored sorted and
in input order (layout construction refers to blocks by index); repeated
blocks are permitted.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import BlockSizeError, CoverageError, FormatError, ParamError

DESIGN_JSON_FIELDS = ("t", "n", "k", "lambda", "blocks")


@dataclass(frozen=True)
class DesignParams:
    """Parameter quadruple of a t-(n,k,lam) design."""

    t: int
    n: int
    k: int
    lam: int

    def __post_init__(self):
        if not (1 <= self.t <= self.k <= self.n):
            raise ParamError(
                f"need 1 <= t <= k <= n, got t={self.t}, k={self.k}, n={self.n}"
            )
        if self.lam < 1:
            raise ParamError(f"lambda must be >= 1, got {self.lam}")
        if (self.lam * comb(self.n, self.t)) % comb(self.k, self.t) != 0:
            raise ParamError(
                f"block count lam*C(n,t)/C(k,t) is not an integer for "
                f"t={self.t}, n={self.n}, k={self.k}, lambda={self.lam}"
            )

    @property
    def block_count(self) -> int:
        return self.lam * comb(self.n, self.t) // comb(self.k, self.t)


@dataclass(frozen=True)
class Design:
    """A validated design: params plus an ordered collection of sorted blocks."""

    params: DesignParams
    blocks: tuple[tuple[int, ...], ...]

    @property
    def t(self) -> int:
        return self.params.t

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def lam(self) -> int:
        return self.params.lam


def validate_design(blocks, t: int, n: int, k: int, lam: int) -> Design:
    """Check a raw block collection exhaustively and return a Design.

    Every block must be a k-subset of {0,...,n-1} and every t-subset of the
    point set must occur in exactly lam blocks (all C(n,t) subsets are
    checked).
    """
    params = DesignParams(t=t, n=n, k=k, lam=lam)
    normalized = []
    for block in blocks:
        members = tuple(sorted(block))
        if len(members) != k or len(set(members)) != k:
            raise BlockSizeError(f"block {tuple(block)} is not a {k}-subset")
        if any(not isinstance(x, int) or not 0 <= x < n for x in members):
            raise BlockSizeError(
                f"block {tuple(block)} has points outside 0..{n - 1}"
            )
        normalized.append(members)
    # Coverage is the authoritative check: a wrong block count always breaks
    # coverage somewhere, and the first deviating subset is the useful report.
    counts = {}
    for members in normalized:
        for subset in combinations(members, t):
            counts[subset] = counts.get(subset, 0) + 1
    for subset in combinations(range(n), t):
        found = counts.get(subset, 0)
        if found != lam:
            raise CoverageError(subset, found, lam)
    return Design(params=params, blocks=tuple(normalized))


def complete_design(n: int, k: int, t: int) -> Design:
    """The design whose blocks are all C(n,k) k-subsets, in lexicographic order."""
    if not (1 <= t <= k <= n):
        raise ParamError(f"need 1 <= t <= k <= n, got t={t}, k={k}, n={n}")
    params = DesignParams(t=t, n=n, k=k, lam=comb(n - t, k - t))
    return Design(params=params, blocks=tuple(combinations(range(n), k)))


def hadamard_3design(n: int) -> Design:
    """A 3-(n, n/2, n/4-1) design from the rows of a Sylvester matrix of order n.

    Row r of the order-n Sylvester matrix has entry (-1)^popcount(r & c) in
    column c. For each non-constant row, the +1 support and the -1 support
    each contribute one block, giving 2(n-1) blocks.
    """
    if n < 8 or n & (n - 1) != 0:
        raise ParamError(f"order must be a power of two >= 8, got {n}")
    blocks = []
    for row in range(1, n):
        plus = tuple(c for c in range(n) if bin(row & c).count("1") % 2 == 0)
        minus = tuple(c for c in range(n) if c not in set(plus))
        blocks.append(plus)
        blocks.append(minus)
    params = DesignParams(t=3, n=n, k=n // 2, lam=n // 4 - 1)
    return Design(params=params, blocks=tuple(blocks))


def is_self_complementary(design: Design) -> bool:
    """True iff the block multiset is invariant under complementation in the point set."""
    if 2 * design.k != design.n:
        raise ParamError(
            f"complementation needs 2k = n, got k={design.k}, n={design.n}"
        )
    points = set(range(design.n))
    tally: dict[tuple[int, ...], int] = {}
    for block in design.blocks:
        tally[block] = tally.get(block, 0) + 1
        complement = tuple(sorted(points - set(block)))
        tally[complement] = tally.get(complement, 0) - 1
    return all(v == 0 for v in tally.values())


def count_lambda(params: DesignParams, i: int, j: int) -> int:
    """Blocks containing a fixed i-set of points and avoiding a disjoint j-set.

    The value lam * C(n-i-j, k-i) / C(n-t, k-t) is the same for every choice
    of the two disjoint point sets.
    """
    if i < 0 or j < 0 or i + j > params.t:
        raise ParamError(f"need i >= 0, j >= 0, i + j <= t, got i={i}, j={j}")
    value = Fraction(
        params.lam * comb(params.n - i - j, params.k - i),
        comb(params.n - params.t, params.k - params.t),
    )
    if value.denominator != 1:
        raise ParamError(
            f"block count for i={i}, j={j} is not an integer; no "
            f"{params.t}-({params.n},{params.k},{params.lam}) design exists"
        )
    return int(value)


def reduce_design(design: Design, s: int) -> Design:
    """Reinterpret a t-design as an s-design (s <= t) with the induced lambda."""
    if not (1 <= s <= design.t):
        raise ParamError(f"need 1 <= s <= t={design.t}, got s={s}")
    lam_s = count_lambda(design.params, s, 0)
    params = DesignParams(t=s, n=design.n, k=design.k, lam=lam_s)
    return Design(params=params, blocks=design.blocks)


def design_to_json(design: Design) -> dict:
    """Plain-dict form of a design, matching the documented file format."""
    return {
        "t": design.t,
        "n": design.n,
        "k": design.k,
        "lambda": design.lam,
        "blocks": [list(block) for block in design.blocks],
    }


def design_from_json(obj) -> Design:
    """Parse and fully validate a design from its plain-dict form.

    Unknown trailing fields are ignored with a warning, not an error.
    """
    if not isinstance(obj, dict):
        raise FormatError(f"design must be a JSON object, got {type(obj).__name__}")
    missing = [f for f in DESIGN_JSON_FIELDS if f not in obj]
    if missing:
        raise FormatError(f"design object is missing fields: {', '.join(missing)}")
    unknown = [f for f in obj if f not in DESIGN_JSON_FIELDS]
    if unknown:
        warnings.warn(
            f"ignoring unknown design fields: {', '.join(sorted(unknown))}",
            stacklevel=2,
        )
    for field in ("t", "n", "k", "lambda"):
        if not isinstance(obj[field], int) or isinstance(obj[field], bool):
            raise FormatError(f"design field {field!r} must be an integer")
    if not isinstance(obj["blocks"], list) or any(
        not isinstance(b, list)
        or any(not isinstance(x, int) or isinstance(x, bool) for x in b)
        for b in obj["blocks"]
    ):
        raise FormatError("design field 'blocks' must be a list of integer lists")
    return validate_design(
        obj["blocks"], t=obj["t"], n=obj["n"], k=obj["k"], lam=obj["lambda"]
    )
