"""Shared fixtures: the two reference designs and their frozen facts."""

from __future__ import annotations

import pytest

from declustr import (
    balance_horizontal_code,
    build_layout,
    rdp_code,
    validate_design,
)

# 3-(8,4,1) on 8 points, block order frozen: the layout's disk-by-disk group
# index table below depends on it.
REFERENCE_BLOCKS_3_8_4_1 = (
    (0, 1, 2, 3),
    (0, 1, 4, 5),
    (0, 1, 6, 7),
    (0, 2, 4, 6),
    (0, 2, 5, 7),
    (0, 3, 4, 7),
    (0, 3, 5, 6),
    (4, 5, 6, 7),
    (2, 3, 6, 7),
    (2, 3, 4, 5),
    (1, 3, 5, 7),
    (1, 3, 4, 6),
    (1, 2, 5, 6),
    (1, 2, 4, 7),
)

# 2-(5,4,3): all 4-subsets of 5 points.
BIBD_BLOCKS_2_5_4_3 = (
    (0, 1, 2, 3),
    (0, 1, 2, 4),
    (0, 1, 3, 4),
    (0, 2, 3, 4),
    (1, 2, 3, 4),
)

# Which group instances store a column-unit on each disk, in stack order,
# for the reference design above.
GROUPS_PER_DISK_3_8_4_1 = {
    0: (0, 1, 2, 3, 4, 5, 6),
    1: (0, 1, 2, 10, 11, 12, 13),
    2: (0, 3, 4, 8, 9, 12, 13),
    3: (0, 5, 6, 8, 9, 10, 11),
    4: (1, 3, 5, 7, 9, 11, 13),
    5: (1, 4, 6, 7, 9, 10, 12),
    6: (2, 3, 6, 7, 8, 11, 12),
    7: (2, 4, 5, 7, 8, 10, 13),
}


@pytest.fixture(scope="session")
def reference_design():
    return validate_design(REFERENCE_BLOCKS_3_8_4_1, t=3, n=8, k=4, lam=1)


@pytest.fixture(scope="session")
def bibd_design():
    return validate_design(BIBD_BLOCKS_2_5_4_3, t=2, n=5, k=4, lam=3)


@pytest.fixture(scope="session")
def reference_layout(reference_design):
    """8 disks, 14 groups of the fully stacked RDP p=3 family, M=168."""
    return build_layout(balance_horizontal_code(rdp_code(3)), reference_design)
