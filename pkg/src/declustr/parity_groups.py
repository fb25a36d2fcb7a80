"""Parity groups built from horizontal codes by stacking label arrangements.

An extended row is one way of placing the parity labels P1..Pdelta among the
k column positions (data everywhere else); stacking r codeword rows per
extended row and all chosen extended rows vertically yields an m x k group,
m = r * len(extended_rows). Stacking every one of the delta! * C(k, delta)
placements produces a balanced group: any failure of at most delta columns
then loads every surviving column equally.

Balance is a verified property, not a type: the same ParityGroup class also
carries deliberately unbalanced families (a single arrangement, or the k
cyclic rotations of the canonical one) used to demonstrate skew.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb, factorial

from .erasure_codes import (
    DATA,
    HorizontalCode,
    canonical_labels,
    parity_label,
    reconstruction_rule,
)
from .errors import ParamError, UnbalancedGroup

FAMILIES = ("full", "single", "rotations")


@dataclass(frozen=True)
class ParityGroup:
    """A horizontal code plus an ordered family of label arrangements."""

    code: HorizontalCode
    extended_rows: tuple[tuple[str, ...], ...]
    family: str = "custom"

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def delta(self) -> int:
        return self.code.delta

    @property
    def r(self) -> int:
        return self.code.r

    @property
    def m(self) -> int:
        return self.r * len(self.extended_rows)


@dataclass(frozen=True)
class ArrangementCounts:
    """Arrangement tallies for an ordered column pair (i, j), delta=2 only.

    r_dq counts extended rows with data at i and P2 at j, r_pq those with P1
    at i and P2 at j, r_qp those with P2 at i and P1 at j.
    """

    r_dq: int
    r_pq: int
    r_qp: int


@dataclass
class BalanceReport:
    """Outcome of the four balance conditions plus the raw enumeration data.

    row_reads maps (failure set, surviving column) to the number of extended
    rows that read the column; entry counts are r times that. taus maps each
    failure size to the common per-column entry count, or None when the
    counts differ.
    """

    c1: bool
    c2: bool
    c3: bool
    c4: bool
    k: int
    delta: int
    r: int
    m: int
    parity_per_column: tuple[int, ...]
    row_reads: dict[tuple[tuple[int, ...], int], int]
    taus: dict[int, int | None]

    @property
    def balanced(self) -> bool:
        return self.c1 and self.c2 and self.c3 and self.c4


def _all_arrangements(k: int, delta: int) -> tuple[tuple[str, ...], ...]:
    rows = []
    for positions in combinations(range(k), delta):
        for order in permutations(range(1, delta + 1)):
            row = [DATA] * k
            for pos, idx in zip(positions, order):
                row[pos] = parity_label(idx)
            rows.append(tuple(row))
    return tuple(rows)


def balance_horizontal_code(code: HorizontalCode) -> ParityGroup:
    """Stack all delta! * C(k, delta) parity placements of the code.

    Placements are enumerated in lexicographic order of the parity position
    tuple, then of the parity index order within those positions.
    """
    return ParityGroup(
        code=code,
        extended_rows=_all_arrangements(code.k, code.delta),
        family="full",
    )


def single_arrangement_group(code: HorizontalCode) -> ParityGroup:
    """Just the canonical arrangement: data columns first, then P1..Pdelta."""
    return ParityGroup(
        code=code,
        extended_rows=(canonical_labels(code.k, code.delta),),
        family="single",
    )


def cyclic_rotation_group(code: HorizontalCode) -> ParityGroup:
    """The k successive right-rotations of the canonical arrangement."""
    base = canonical_labels(code.k, code.delta)
    k = code.k
    rows = tuple(base[-shift:] + base[:-shift] if shift else base for shift in range(k))
    return ParityGroup(code=code, extended_rows=rows, family="rotations")


def group_family(code: HorizontalCode, family: str) -> ParityGroup:
    if family == "full":
        return balance_horizontal_code(code)
    if family == "single":
        return single_arrangement_group(code)
    if family == "rotations":
        return cyclic_rotation_group(code)
    raise ParamError(f"unknown arrangement family {family!r}")


def _check_arrangements(group: ParityGroup):
    expected = set(canonical_labels(group.k, group.delta))
    for row in group.extended_rows:
        if len(row) != group.k:
            raise ParamError(f"arrangement {row} does not have {group.k} positions")
        placed = [lab for lab in row if lab != DATA]
        if sorted(placed) != sorted(expected - {DATA}):
            raise ParamError(
                f"arrangement {row} must place each of P1..P{group.delta} exactly once"
            )


def _row_read_counts(group: ParityGroup, failed: tuple[int, ...], rule) -> dict[int, int]:
    """Extended rows that read each surviving column when `failed` columns are lost."""
    counts = {c: 0 for c in range(group.k) if c not in failed}
    for row in group.extended_rows:
        need = rule(group.delta, [row[c] for c in failed])
        for c in counts:
            if row[c] in need:
                counts[c] += 1
    return counts


def verify_balance(group: ParityGroup, max_s: int, rule=reconstruction_rule) -> BalanceReport:
    """Evaluate the four balance conditions up to failure size max_s.

    The first two conditions are structural. Every arrangement is a column
    permutation of an MDS codeword, so the data/parity entry split is fixed
    (condition one) and any loss of at most delta columns stays decodable
    (condition two). The read-uniformity condition is checked by exhaustive
    enumeration of failure sets, the parity-placement condition by a
    per-column tally.
    """
    if not 1 <= max_s <= group.delta:
        raise ParamError(f"need 1 <= max_s <= delta={group.delta}, got {max_s}")
    _check_arrangements(group)
    k, r, m = group.k, group.r, group.m
    c1 = True
    c2 = True

    parity_per_column = tuple(
        r * sum(1 for row in group.extended_rows if row[c] != DATA) for c in range(k)
    )
    c4 = len(set(parity_per_column)) == 1

    row_reads: dict[tuple[tuple[int, ...], int], int] = {}
    taus: dict[int, int | None] = {}
    c3 = True
    for s in range(1, max_s + 1):
        size_values = set()
        for failed in combinations(range(k), s):
            counts = _row_read_counts(group, failed, rule)
            for c, rows_read in counts.items():
                row_reads[(failed, c)] = rows_read
                size_values.add(rows_read)
        if len(size_values) == 1:
            taus[s] = r * size_values.pop()
        else:
            taus[s] = None
            c3 = False
    return BalanceReport(
        c1=c1, c2=c2, c3=c3, c4=c4,
        k=k, delta=group.delta, r=r, m=m,
        parity_per_column=parity_per_column,
        row_reads=row_reads,
        taus=taus,
    )


def arrangement_counts(group: ParityGroup, i: int, j: int) -> ArrangementCounts:
    """Tally (label at i, label at j) patterns over the extended rows, delta=2 only."""
    if group.delta != 2:
        raise ParamError(f"arrangement counts are defined for delta=2, got {group.delta}")
    if i == j:
        raise ParamError("need two distinct columns")
    if not (0 <= i < group.k and 0 <= j < group.k):
        raise ParamError(f"columns out of range: {i}, {j}")
    p1, p2 = parity_label(1), parity_label(2)
    r_dq = sum(1 for row in group.extended_rows if row[i] == DATA and row[j] == p2)
    r_pq = sum(1 for row in group.extended_rows if row[i] == p1 and row[j] == p2)
    r_qp = sum(1 for row in group.extended_rows if row[i] == p2 and row[j] == p1)
    return ArrangementCounts(r_dq=r_dq, r_pq=r_pq, r_qp=r_qp)


def tau(group: ParityGroup, s: int, rule=reconstruction_rule) -> int:
    """Entries read from each surviving column when any s columns are lost.

    Raises UnbalancedGroup when the count depends on the failure set or the
    column, in which case no single number exists.
    """
    if not 1 <= s <= group.delta:
        raise ParamError(f"need 1 <= s <= delta={group.delta}, got {s}")
    _check_arrangements(group)
    values = set()
    for failed in combinations(range(group.k), s):
        values.update(_row_read_counts(group, failed, rule).values())
    if len(values) != 1:
        raise UnbalancedGroup(
            f"per-column read counts differ across size-{s} failures: {sorted(values)}"
        )
    return group.r * values.pop()


def expected_full_depth(code: HorizontalCode) -> int:
    """Depth m of the fully stacked group: r * delta! * C(k, delta)."""
    return code.r * factorial(code.delta) * comb(code.k, code.delta)
