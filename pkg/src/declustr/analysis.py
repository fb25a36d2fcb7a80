"""Reconstruction-workload accounting for declustered layouts.

Workload is counted the way the balance conditions define it: when a group
instance loses columns, every surviving column of that instance is either
read in full (all r rows of an extended row whose label the reconstruction
rule names) or left untouched. Enumeration walks every instance and extended
row; the closed forms combine the design's block-counting numbers with the
group's per-instance read counts and must agree exactly.

All arithmetic is in exact integers and Fractions; rounding happens only in
display helpers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .designs import Design, DesignParams, count_lambda
from .erasure_codes import reconstruction_rule
from .errors import ParamError, TooManyFailures
from .layout import DeclusteredLayout, build_layout
from .parity_groups import ParityGroup, tau

#: Named (k -> lambda) tables for the trade-off report. The "fig13" preset is
#: fixture data: the smallest published design index for each k at n=20,
#: taken from a design-table handbook. This package does not construct those
#: designs; the preset exists so the trade-off report can be reproduced.
TRADEOFF_LAMBDA_PRESETS = {
    "fig13": {
        3: 1, 4: 1, 5: 6, 6: 10, 7: 35, 8: 14, 9: 28, 10: 4, 11: 55,
        12: 55, 13: 286, 14: 182, 15: 273, 16: 140, 17: 680, 18: 136,
        19: 17, 20: 1,
    },
}


@dataclass(frozen=True)
class WorkloadReport:
    """Per-surviving-disk read counts for one failure set."""

    failed: frozenset[int]
    reads: dict[int, int]
    uniform: bool
    closed_form: int | None
    fraction: Fraction | None


@dataclass(frozen=True)
class TradeoffRow:
    """One k row of the declustering trade-off report, exact rationals."""

    k: int
    lam: int
    pct_one_failure: Fraction
    pct_two_failures: Fraction
    parity_disks: Fraction
    depth_over_m: Fraction


@dataclass(frozen=True)
class CounterexampleReport:
    """Column-unit access table for one failure set, instance by instance.

    labels maps (block index, disk) to the label held there, or "mixed" when
    the group's arrangements disagree at that position. accessed marks units
    that participate in reconstruction (read on survivors, rebuilt on failed
    disks). The tallies cover surviving disks only.
    """

    failed: frozenset[int]
    n: int
    block_count: int
    labels: dict[tuple[int, int], str]
    accessed: dict[tuple[int, int], bool]
    units_accessed: dict[int, int]
    entries_read: dict[int, int]
    uniform_units: bool
    uniform_entries: bool


def _check_failed(failed, n: int, delta: int) -> frozenset[int]:
    failed = frozenset(failed)
    if len(failed) > delta:
        raise TooManyFailures(
            f"{len(failed)} failed disks exceed the tolerance delta={delta}"
        )
    if any(not isinstance(d, int) or not 0 <= d < n for d in failed):
        raise ParamError(f"failed disks must be in 0..{n - 1}, got {sorted(failed)}")
    return failed


def reconstruction_workload(layout: DeclusteredLayout, failed) -> WorkloadReport:
    """Count units read per surviving disk, by exhaustive enumeration.

    When the layout uses the fully stacked arrangement family over a
    strength-3 design and one or two disks fail, the matching closed form is
    attached for comparison; the fraction field is the uniform per-disk count
    over the disk size.
    """
    group = layout.group
    failed = _check_failed(failed, layout.n, group.delta)
    reads = {d: 0 for d in range(layout.n) if d not in failed}
    r = group.r
    rule_cache: dict[tuple[str, ...], frozenset[str]] = {}
    for placement in layout.placements:
        failed_positions = tuple(
            pos for pos, disk in enumerate(placement) if disk in failed
        )
        if not failed_positions:
            continue
        for row in group.extended_rows:
            lost = tuple(sorted(row[pos] for pos in failed_positions))
            need = rule_cache.get(lost)
            if need is None:
                need = reconstruction_rule(group.delta, lost)
                rule_cache[lost] = need
            for pos, disk in enumerate(placement):
                if disk not in failed and row[pos] in need:
                    reads[disk] += r
    counts = set(reads.values())
    uniform = len(counts) <= 1
    fraction = (
        Fraction(counts.pop(), layout.rows_per_disk) if uniform and reads else None
    )
    closed_form = None
    if (
        layout.design.t == 3
        and group.delta == 2
        and group.family == "full"
        and len(failed) in (1, 2)
    ):
        closed_form = closed_form_workload(
            layout.design.params, group, len(failed)
        )
    return WorkloadReport(
        failed=failed,
        reads=reads,
        uniform=uniform,
        closed_form=closed_form,
        fraction=fraction,
    )


def closed_form_workload(params: DesignParams, group: ParityGroup, s: int) -> int:
    """Units read per surviving disk, from block counting alone.

    One failed disk costs lambda_2 * tau_1: it shares lambda_2 blocks with
    each survivor, and each such instance reads tau_1 entries per surviving
    column. Two failed disks cost lambda * tau_2 + 2 * lambda_2^(1) * tau_1:
    instances containing both failures read tau_2, instances containing
    exactly one of the two read tau_1.
    """
    if params.t != 3:
        raise ParamError(
            f"closed-form workload needs a design of strength 3, got t={params.t}"
        )
    if s not in (1, 2):
        raise ParamError(f"closed-form workload covers 1 or 2 failures, got {s}")
    if group.delta != 2:
        raise ParamError(
            f"closed-form workload needs a two-parity group, got delta={group.delta}"
        )
    if group.k != params.k:
        raise ParamError(
            f"group size k={group.k} does not match design block size k={params.k}"
        )
    tau_1 = tau(group, 1)
    if s == 1:
        return count_lambda(params, 2, 0) * tau_1
    return params.lam * tau(group, 2) + 2 * count_lambda(params, 2, 1) * tau_1


def single_failure_fraction(n: int, k: int) -> Fraction:
    """Per-disk fraction read after one failure: (k-2)/(n-1)."""
    _check_tradeoff_params(n, k)
    return Fraction(k - 2, n - 1)


def double_failure_fraction(n: int, k: int) -> Fraction:
    """Per-disk fraction read after two failures: (k-2)(2n-k-1)/((n-1)(n-2))."""
    _check_tradeoff_params(n, k)
    return Fraction((k - 2) * (2 * n - k - 1), (n - 1) * (n - 2))


def _check_tradeoff_params(n: int, k: int):
    if not 3 <= k <= n:
        raise ParamError(f"need 3 <= k <= n, got k={k}, n={n}")


def tradeoff_table(n: int, rows) -> list[TradeoffRow]:
    """Evaluate the trade-off columns for each (k, lambda) pair, exactly.

    Per-disk read fractions after one and two failures are returned as
    percentages; parity_disks is 2n/k (two-parity groups); depth_over_m is
    the per-disk column-unit count lambda*(n-1)(n-2)/((k-1)(k-2)).
    """
    table = []
    for k, lam in rows:
        _check_tradeoff_params(n, k)
        if lam < 1:
            raise ParamError(f"lambda must be >= 1, got {lam}")
        table.append(
            TradeoffRow(
                k=k,
                lam=lam,
                pct_one_failure=100 * single_failure_fraction(n, k),
                pct_two_failures=100 * double_failure_fraction(n, k),
                parity_disks=Fraction(2 * n, k),
                depth_over_m=Fraction(lam * (n - 1) * (n - 2), (k - 1) * (k - 2)),
            )
        )
    return table


def round_half_up(value, decimals: int = 1) -> str:
    """Render a nonnegative rational to fixed decimals, ties rounding up.

    Built on integer arithmetic; float formatting and round() (ties to even)
    both disagree with the required display on .5 boundaries.
    """
    frac = Fraction(value)
    if frac < 0:
        raise ParamError(f"display rounding expects nonnegative values, got {frac}")
    if decimals < 0:
        raise ParamError(f"decimals must be >= 0, got {decimals}")
    num = frac.numerator * 10**decimals
    den = frac.denominator
    q = (2 * num + den) // (2 * den)
    if decimals == 0:
        return str(q)
    digits = str(q).rjust(decimals + 1, "0")
    return f"{digits[:-decimals]}.{digits[-decimals:]}"


def counterexample_report(
    group: ParityGroup, design: Design, failed
) -> CounterexampleReport:
    """Tabulate which column-units each disk touches for one failure set.

    Works for any arrangement family, balanced or not; unbalanced families
    show up as unequal per-disk tallies.
    """
    layout = build_layout(group, design)
    failed = _check_failed(failed, layout.n, group.delta)
    r = group.r
    labels: dict[tuple[int, int], str] = {}
    accessed: dict[tuple[int, int], bool] = {}
    units_accessed = {d: 0 for d in range(layout.n) if d not in failed}
    entries_read = {d: 0 for d in range(layout.n) if d not in failed}
    for index, placement in enumerate(layout.placements):
        failed_positions = tuple(
            pos for pos, disk in enumerate(placement) if disk in failed
        )
        rows_read = [0] * group.k
        for row in group.extended_rows:
            if failed_positions:
                lost = tuple(sorted(row[pos] for pos in failed_positions))
                need = reconstruction_rule(group.delta, lost)
                for pos in range(group.k):
                    if pos not in failed_positions and row[pos] in need:
                        rows_read[pos] += 1
        for pos, disk in enumerate(placement):
            seen = {row[pos] for row in group.extended_rows}
            labels[index, disk] = seen.pop() if len(seen) == 1 else "mixed"
            if disk in failed:
                accessed[index, disk] = bool(failed_positions)
            else:
                accessed[index, disk] = rows_read[pos] > 0
                if rows_read[pos]:
                    units_accessed[disk] += 1
                    entries_read[disk] += r * rows_read[pos]
    return CounterexampleReport(
        failed=failed,
        n=layout.n,
        block_count=len(layout.placements),
        labels=labels,
        accessed=accessed,
        units_accessed=units_accessed,
        entries_read=entries_read,
        uniform_units=len(set(units_accessed.values())) <= 1,
        uniform_entries=len(set(entries_read.values())) <= 1,
    )
