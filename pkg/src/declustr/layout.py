"""Placement of parity-group instances onto n disks via a block design.

Each design block spawns one group instance; group column c lands on the
c-th smallest block element, and a disk stacks its column-units in ascending
block index. With a design of strength matching the group (t = delta + 1),
every disk ends up holding the same number of column-units and the same
number of parity entries.

The delta=1 path mirrors classic single-parity declustering: a one-row group
whose parity column is last, hence placed on the largest block element, with
an optional cyclic rotation step to even out parity placement.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .designs import (
    Design,
    DesignParams,
    count_lambda,
    design_from_json,
    design_to_json,
    validate_design,
)
from .erasure_codes import DATA, rdp_code, rs_code
from .errors import (
    DeclustrError,
    FormatError,
    InvariantError,
    MismatchError,
    ParamError,
)
from .parity_groups import FAMILIES, ParityGroup, group_family

LAYOUT_JSON_FIELDS = ("n", "design", "group", "placements")


@dataclass(frozen=True)
class DeclusteredLayout:
    """n disks holding one column-unit per (block, block element) incidence."""

    n: int
    design: Design
    group: ParityGroup
    placements: tuple[tuple[int, ...], ...]

    @property
    def units_per_disk(self) -> int:
        return count_lambda(self.design.params, 1, 0)

    @property
    def rows_per_disk(self) -> int:
        return self.group.m * self.units_per_disk


@dataclass(frozen=True)
class LayoutGeometry:
    """Unit tallies plus the exact data/parity disk fractions."""

    rows_per_disk: int
    column_units_per_disk: int
    parity_units_per_disk: tuple[int, ...]
    parity_uniform: bool
    data_disks: Fraction
    parity_disks: Fraction


def build_layout(group: ParityGroup, design: Design) -> DeclusteredLayout:
    """Instantiate the group once per block, columns on sorted block elements."""
    if group.k != design.k:
        raise MismatchError(
            f"group size k={group.k} does not match design block size k={design.k}"
        )
    if design.t != group.delta + 1:
        raise MismatchError(
            f"group with delta={group.delta} needs a design of strength "
            f"{group.delta + 1}, got t={design.t}"
        )
    return DeclusteredLayout(
        n=design.n,
        design=design,
        group=group,
        placements=tuple(design.blocks),
    )


def rotate_layout(layout: DeclusteredLayout) -> DeclusteredLayout:
    """Stack n cyclically disk-shifted copies of a single-parity layout.

    Afterwards every disk holds the same number of parity units. Shifting
    relabels disks, so each copy of a placement keeps its column order while
    the blocks become the shifted point sets.
    """
    if layout.group.delta != 1:
        raise ParamError(
            "rotation applies to single-parity layouts; groups with delta >= 2 "
            "already place parity evenly"
        )
    n = layout.n
    params = layout.design.params
    blocks = []
    placements = []
    for shift in range(n):
        for placement in layout.placements:
            shifted = tuple((d + shift) % n for d in placement)
            placements.append(shifted)
            blocks.append(tuple(sorted(shifted)))
    design = validate_design(
        blocks, t=params.t, n=n, k=params.k, lam=params.lam * n
    )
    return DeclusteredLayout(
        n=n, design=design, group=layout.group, placements=tuple(placements)
    )


def disk_column_units(layout: DeclusteredLayout, disk: int) -> list[tuple[int, int]]:
    """(block index, column position) pairs stored on a disk, in stack order."""
    units = []
    for index, placement in enumerate(layout.placements):
        for position, d in enumerate(placement):
            if d == disk:
                units.append((index, position))
    return units


def layout_geometry(layout: DeclusteredLayout) -> LayoutGeometry:
    """Tally units per disk and derive the exact data/parity disk counts."""
    group = layout.group
    parity_rows_per_column = [
        group.r * sum(1 for row in group.extended_rows if row[c] != DATA)
        for c in range(group.k)
    ]
    unit_counts = [0] * layout.n
    parity_counts = [0] * layout.n
    for placement in layout.placements:
        for position, disk in enumerate(placement):
            unit_counts[disk] += 1
            parity_counts[disk] += parity_rows_per_column[position]
    if len(set(unit_counts)) != 1:
        raise InvariantError(f"column-unit counts differ per disk: {unit_counts}")
    rows_per_disk = group.m * unit_counts[0]
    total_parity = sum(parity_counts)
    parity_disks = Fraction(total_parity, rows_per_disk)
    expected = Fraction(group.delta * layout.n, group.k)
    if parity_disks != expected:
        raise InvariantError(
            f"parity tally {parity_disks} does not match delta*n/k = {expected}"
        )
    return LayoutGeometry(
        rows_per_disk=rows_per_disk,
        column_units_per_disk=unit_counts[0],
        parity_units_per_disk=tuple(parity_counts),
        parity_uniform=len(set(parity_counts)) == 1,
        data_disks=Fraction((group.k - group.delta) * layout.n, group.k),
        parity_disks=parity_disks,
    )


def group_descriptor(group: ParityGroup) -> dict:
    """JSON form of a group: code parameters plus the arrangement family."""
    if group.family not in FAMILIES:
        raise FormatError(
            f"group family {group.family!r} has no serialized form; "
            f"serializable families are {', '.join(FAMILIES)}"
        )
    if group.code.kind == "rdp":
        descriptor = {"code": "rdp", "p": group.code.p}
    elif group.code.kind == "rs":
        descriptor = {"code": "rs", "k": group.code.k, "delta": group.code.delta}
    else:
        raise FormatError(f"unknown code kind {group.code.kind!r}")
    if group.family != "full":
        descriptor["family"] = group.family
    return descriptor


def group_from_descriptor(obj) -> ParityGroup:
    """Rebuild a group from its JSON form; extended rows are regenerated."""
    if not isinstance(obj, dict) or "code" not in obj:
        raise FormatError("group descriptor must be an object with a 'code' field")
    family = obj.get("family", "full")
    if family not in FAMILIES:
        raise FormatError(f"unknown arrangement family {family!r}")
    kind = obj["code"]
    try:
        if kind == "rdp":
            if "p" not in obj:
                raise FormatError("rdp group descriptor needs field 'p'")
            code = rdp_code(obj["p"])
        elif kind == "rs":
            if "k" not in obj or "delta" not in obj:
                raise FormatError("rs group descriptor needs fields 'k' and 'delta'")
            code = rs_code(obj["k"], obj["delta"])
        else:
            raise FormatError(f"unknown code kind {kind!r}")
    except ParamError as exc:
        raise FormatError(f"bad group descriptor: {exc}") from exc
    return group_family(code, family)


def serialize_layout(layout: DeclusteredLayout) -> str:
    """JSON text for a layout; placements are redundant but cross-checked on load."""
    payload = {
        "n": layout.n,
        "design": design_to_json(layout.design),
        "group": group_descriptor(layout.group),
        "placements": [list(p) for p in layout.placements],
    }
    return json.dumps(payload, indent=2) + "\n"


def deserialize_layout(text) -> DeclusteredLayout:
    """Parse layout JSON and revalidate every invariant.

    Structural problems (bad JSON, missing fields) raise FormatError; semantic
    violations (invalid design, placement/block mismatch, duplicated disks in
    one placement) raise InvariantError.
    """
    if isinstance(text, (str, bytes)):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"layout file is not valid JSON: {exc}") from exc
    else:
        obj = text
    if not isinstance(obj, dict):
        raise FormatError("layout must be a JSON object")
    missing = [f for f in LAYOUT_JSON_FIELDS if f not in obj]
    if missing:
        raise FormatError(f"layout object is missing fields: {', '.join(missing)}")
    unknown = [f for f in obj if f not in LAYOUT_JSON_FIELDS]
    if unknown:
        warnings.warn(
            f"ignoring unknown layout fields: {', '.join(sorted(unknown))}",
            stacklevel=2,
        )
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise FormatError("layout field 'n' must be an integer")
    try:
        design = design_from_json(obj["design"])
    except FormatError:
        raise
    except DeclustrError as exc:
        raise InvariantError(f"embedded design is invalid: {exc}") from exc
    group = group_from_descriptor(obj["group"])
    if n != design.n:
        raise InvariantError(f"layout n={n} but design has n={design.n}")
    if group.k != design.k or design.t != group.delta + 1:
        raise InvariantError(
            f"group (k={group.k}, delta={group.delta}) does not fit a "
            f"{design.t}-({design.n},{design.k},{design.lam}) design"
        )
    placements_raw = obj["placements"]
    if not isinstance(placements_raw, list) or any(
        not isinstance(p, list) for p in placements_raw
    ):
        raise FormatError("layout field 'placements' must be a list of lists")
    if len(placements_raw) != len(design.blocks):
        raise InvariantError(
            f"{len(placements_raw)} placements for {len(design.blocks)} blocks"
        )
    placements = []
    for index, (placement, block) in enumerate(zip(placements_raw, design.blocks)):
        disks = tuple(placement)
        if len(set(disks)) != len(disks):
            raise InvariantError(
                f"placement {index} stores two columns of one group on one disk: {disks}"
            )
        if any(not isinstance(d, int) or not 0 <= d < n for d in disks):
            raise InvariantError(f"placement {index} names disks outside 0..{n - 1}")
        if tuple(sorted(disks)) != block:
            raise InvariantError(
                f"placement {index} disks {disks} do not match block {block}"
            )
        placements.append(disks)
    return DeclusteredLayout(
        n=n, design=design, group=group, placements=tuple(placements)
    )
