"""Byte-level materialization, failure injection, and recovery checking.

A layout becomes an array of n byte vectors (one byte per unit). Every group
instance is filled and encoded independently; on failure, each affected
instance is decoded from exactly the columns the reconstruction rule names,
and the rebuilt bytes go to fresh replacement disks. Measured reads must
match the analysis module's enumeration unit for unit.

Data bytes come from a 64-bit xorshift stream (shifts 13, 7, 17; low byte of
each state is emitted), so fixtures are portable: same seed, same array.
Seed 0 is the generator's fixed point and yields the all-zero fill.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from .erasure_codes import DATA, parity_index, reconstruction_rule
from .errors import InvariantError, ParamError, TooManyFailures
from .layout import DeclusteredLayout
from .analysis import reconstruction_workload

_MASK64 = (1 << 64) - 1


def byte_stream(seed: int):
    """Endless deterministic byte generator (xorshift64, low byte)."""
    state = seed & _MASK64
    while True:
        state ^= (state << 13) & _MASK64
        state ^= state >> 7
        state ^= (state << 17) & _MASK64
        yield state & 0xFF


@dataclass
class DiskArray:
    """n byte vectors of equal length plus the layout that shaped them."""

    layout: DeclusteredLayout
    disks: list[bytearray]

    @property
    def n(self) -> int:
        return self.layout.n

    @property
    def rows_per_disk(self) -> int:
        return self.layout.rows_per_disk

    def copy(self) -> "DiskArray":
        return DiskArray(self.layout, [bytearray(d) for d in self.disks])


@dataclass(frozen=True)
class IOStats:
    """Units read per surviving disk and written per replacement disk."""

    reads: dict[int, int]
    writes: dict[int, int]


@dataclass(frozen=True)
class SetResult:
    """One failure set's outcome inside an exhaustive sweep."""

    failed: tuple[int, ...]
    recovered: bool
    min_reads: int
    max_reads: int


@dataclass(frozen=True)
class VerifySummary:
    """Aggregate of an exhaustive sweep over all size-s failure sets."""

    s: int
    total: int
    passed: int
    results: tuple[SetResult, ...]
    min_reads: int
    max_reads: int
    uniform: bool

    @property
    def reads_per_disk(self) -> int | None:
        return self.min_reads if self.uniform else None


@dataclass(frozen=True)
class UnitProvenance:
    """Where one stored byte lives in group coordinates."""

    block_index: int
    extended_row: int
    inner_row: int
    label: str


def _canonical_columns(row, k: int, delta: int) -> list[int]:
    """Map each position of an arrangement to its codeword column."""
    columns = []
    data_seen = 0
    for label in row:
        if label == DATA:
            columns.append(data_seen)
            data_seen += 1
        else:
            columns.append(k - delta + parity_index(label) - 1)
    return columns


def materialize(layout: DeclusteredLayout, seed: int) -> DiskArray:
    """Fill every instance from the seeded stream and encode it.

    Fill order is fixed: instances in block order, extended rows top to
    bottom, inner rows in order, data slots left to right. A disk stacks its
    column-units contiguously in ascending block index, m bytes each.
    """
    group = layout.group
    code = group.code
    k, delta, r, m = group.k, group.delta, group.r, group.m
    disks = [bytearray(layout.rows_per_disk) for _ in range(layout.n)]
    stream = byte_stream(seed)
    canon = [_canonical_columns(row, k, delta) for row in group.extended_rows]
    base = [0] * layout.n
    for placement in layout.placements:
        for e, row in enumerate(group.extended_rows):
            data = [
                [next(stream) for _ in range(k - delta)] for _ in range(r)
            ]
            codeword = code.encode(data)
            for pos, disk in enumerate(placement):
                column = canon[e][pos]
                offset = base[disk] + e * r
                for j in range(r):
                    disks[disk][offset + j] = codeword[j][column]
        for disk in placement:
            base[disk] += m
    return DiskArray(layout, disks)


def _instance_grid(array: DiskArray, placement, base, e: int, columns) -> list[list[int]]:
    """Pull one extended row's full codeword back out of the disks."""
    group = array.layout.group
    grid = [[0] * group.k for _ in range(group.r)]
    for pos, disk in enumerate(placement):
        offset = base[disk] + e * group.r
        for j in range(group.r):
            grid[j][columns[pos]] = array.disks[disk][offset + j]
    return grid


def check_parity_invariant(array: DiskArray) -> bool:
    """True iff every stored codeword re-encodes to itself from its data part."""
    layout = array.layout
    group = layout.group
    code = group.code
    canon = [_canonical_columns(row, group.k, group.delta) for row in group.extended_rows]
    base = [0] * layout.n
    for placement in layout.placements:
        for e in range(len(group.extended_rows)):
            grid = _instance_grid(array, placement, base, e, canon[e])
            data = [grid_row[: group.k - group.delta] for grid_row in grid]
            if code.encode(data) != grid:
                return False
        for disk in placement:
            base[disk] += group.m
    return True


def fail_and_reconstruct(array: DiskArray, failed) -> tuple[DiskArray, IOStats]:
    """Rebuild the failed disks onto replacements, reading per the rule.

    Returns the recovered array (surviving disks copied, failed disks
    rebuilt) and per-disk read/write unit counts. Instances that lost no
    column are never touched.
    """
    layout = array.layout
    group = layout.group
    code = group.code
    k, delta, r, m = group.k, group.delta, group.r, group.m
    failed = frozenset(failed)
    if len(failed) > delta:
        raise TooManyFailures(
            f"{len(failed)} failed disks exceed the tolerance delta={delta}"
        )
    if any(not isinstance(d, int) or not 0 <= d < layout.n for d in failed):
        raise ParamError(
            f"failed disks must be in 0..{layout.n - 1}, got {sorted(failed)}"
        )
    recovered = DiskArray(
        layout,
        [
            bytearray(layout.rows_per_disk) if d in failed else bytearray(array.disks[d])
            for d in range(layout.n)
        ],
    )
    reads = {d: 0 for d in range(layout.n) if d not in failed}
    writes = {d: 0 for d in failed}
    canon = [_canonical_columns(row, k, delta) for row in group.extended_rows]
    rule_cache: dict[tuple[str, ...], frozenset[str]] = {}
    base = [0] * layout.n
    for placement in layout.placements:
        failed_positions = tuple(
            pos for pos, disk in enumerate(placement) if disk in failed
        )
        if failed_positions:
            for e, row in enumerate(group.extended_rows):
                lost = tuple(sorted(row[pos] for pos in failed_positions))
                need = rule_cache.get(lost)
                if need is None:
                    need = reconstruction_rule(delta, lost)
                    rule_cache[lost] = need
                grid: list[list[int | None]] = [[None] * k for _ in range(r)]
                filled = []
                for pos, disk in enumerate(placement):
                    if disk in failed or row[pos] not in need:
                        continue
                    column = canon[e][pos]
                    filled.append(column)
                    offset = base[disk] + e * r
                    for j in range(r):
                        grid[j][column] = array.disks[disk][offset + j]
                    reads[disk] += r
                erased = sorted(set(range(k)) - set(filled))
                out, decoder_reads = code.decode(grid, erased)
                if sorted(decoder_reads) != sorted(filled):
                    raise InvariantError(
                        f"decoder read columns {sorted(decoder_reads)}, "
                        f"planned {sorted(filled)}"
                    )
                for pos in failed_positions:
                    disk = placement[pos]
                    column = canon[e][pos]
                    offset = base[disk] + e * r
                    for j in range(r):
                        recovered.disks[disk][offset + j] = out[j][column]
                    writes[disk] += r
        for disk in placement:
            base[disk] += m
    return recovered, IOStats(reads=reads, writes=writes)


def exhaustive_verify(
    layout: DeclusteredLayout, s: int, seed: int = 1, jobs: int = 1
) -> VerifySummary:
    """Run fail_and_reconstruct over every size-s failure set.

    Each set is checked for byte-exact recovery and its per-disk read range
    recorded; the sweep is uniform when every set reads the same count from
    every survivor. Sets are independent, so jobs > 1 spreads them over a
    thread pool; the result order is always the sorted failure-set order.
    """
    delta = layout.group.delta
    if not 0 <= s <= delta:
        raise ParamError(f"need 0 <= s <= delta={delta}, got {s}")
    if jobs < 1:
        raise ParamError(f"jobs must be >= 1, got {jobs}")
    array = materialize(layout, seed)
    failure_sets = list(combinations(range(layout.n), s))

    def check(failed: tuple[int, ...]) -> SetResult:
        rebuilt, stats = fail_and_reconstruct(array, failed)
        counts = stats.reads.values()
        return SetResult(
            failed=failed,
            recovered=rebuilt.disks == array.disks,
            min_reads=min(counts),
            max_reads=max(counts),
        )

    if jobs == 1:
        results = [check(failed) for failed in failure_sets]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(check, failure_sets))
    low = min(result.min_reads for result in results)
    high = max(result.max_reads for result in results)
    return VerifySummary(
        s=s,
        total=len(results),
        passed=sum(1 for result in results if result.recovered),
        results=tuple(results),
        min_reads=low,
        max_reads=high,
        uniform=low == high,
    )


def unit_provenance(layout: DeclusteredLayout, disk: int, offset: int) -> UnitProvenance:
    """Group coordinates of the byte at (disk, offset)."""
    group = layout.group
    if not 0 <= disk < layout.n:
        raise ParamError(f"disk must be in 0..{layout.n - 1}, got {disk}")
    if not 0 <= offset < layout.rows_per_disk:
        raise ParamError(
            f"offset must be in 0..{layout.rows_per_disk - 1}, got {offset}"
        )
    stack_index, rem = divmod(offset, group.m)
    e, j = divmod(rem, group.r)
    holders = [
        index for index, placement in enumerate(layout.placements) if disk in placement
    ]
    block_index = holders[stack_index]
    pos = layout.placements[block_index].index(disk)
    return UnitProvenance(
        block_index=block_index,
        extended_row=e,
        inner_row=j,
        label=group.extended_rows[e][pos],
    )


def dump_disk(array: DiskArray, disk: int) -> str:
    """Hex dump of one disk with provenance per byte (debugging aid only)."""
    lines = []
    for offset in range(array.rows_per_disk):
        who = unit_provenance(array.layout, disk, offset)
        lines.append(
            f"{offset:6d}  {array.disks[disk][offset]:02x}  "
            f"block={who.block_index} row={who.extended_row}.{who.inner_row} "
            f"label={who.label}"
        )
    return "\n".join(lines)


def measured_matches_predicted(array: DiskArray, failed) -> bool:
    """True iff simulated reads equal the enumeration's predicted counts."""
    _, stats = fail_and_reconstruct(array, failed)
    return stats.reads == reconstruction_workload(array.layout, failed).reads
