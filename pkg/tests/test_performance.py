from __future__ import annotations

import time

import pytest

from harmonia.constructions import triangulated_grid
from harmonia.harmonic import canonical_barcode, rank_table


@pytest.mark.slow
def test_canonical_barcode_on_the_grid() -> None:
    filtration = triangulated_grid(8)
    assert len(filtration) == 323
    assert len(filtration.critical_times) == 50

    started = time.perf_counter()
    barcode = canonical_barcode(filtration, 1)
    elapsed = time.perf_counter() - started

    assert elapsed < 60
    # Every square opens one cycle at its step and closes it at the next.
    assert len(barcode) == 49
    assert all(bar.death - bar.birth == 1 for bar in barcode)
    assert max(rank_table(filtration, 1).h) <= 1
