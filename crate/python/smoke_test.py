#!/usr/bin/env python3
"""Smoke test for the tropcone_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/
(release preferred), exposes it as an importable module in a temp
directory, and exercises the main entry points against known values.

Usage:
    cargo build -p tropcone-py --release
    python3 python/smoke_test.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libtropcone_py.so", "tropcone_py.dll", "libtropcone_py.dylib")
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "tropcone_py cdylib not found; run `cargo build -p tropcone-py` first"
    )


def import_module():
    lib = locate_cdylib()
    staging = Path(tempfile.mkdtemp(prefix="tropcone-py-"))
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy2(lib, staging / f"tropcone_py{suffix}")
    sys.path.insert(0, str(staging))
    import tropcone_py

    return tropcone_py


def main() -> None:
    tp = import_module()

    # Path counting on the reference 2x3 pattern.
    pattern = tp.SignPattern("+-+\n+-+\n")
    assert (pattern.p, pattern.d) == (2, 3)
    assert pattern.count_tropical() == 5
    assert pattern.count_allowed() == 5
    assert pattern.is_negative(0, 1) and not pattern.is_negative(1, 2)

    # Extreme rays of the polar, default t = (0, 1).
    rays = tp.enumerate_rays(pattern)
    coords = {tuple(r["coords"]) for r in rays}
    assert coords == {
        (0, None, None),
        (None, None, 0),
        (1, 0, None),
        (1, 1, 0),
        (None, 0, 0),
    }, coords
    staircase = next(r for r in rays if r["coords"] == [1, 1, 0])
    assert staircase["I"] == [1, 2] and staircase["J"] == [1, 2, 3]

    # The brute-force oracle agrees.
    assert {tuple(c) for c in tp.oracle_rays(pattern)} == coords

    # Rescaling t rescales coordinates.
    rays_t = tp.enumerate_rays(pattern, t=[0, 3])
    assert {tuple(r["coords"]) for r in rays_t} == {
        (0, None, None),
        (None, None, 0),
        (3, 0, None),
        (3, 3, 0),
        (None, 0, 0),
    }

    # The five-row variant has eight extreme rays.
    tall = tp.SignPattern("+-+\n" * 5)
    assert len(tp.enumerate_rays(tall)) == 8

    # Bounds and named patterns.
    assert tp.mcmullen_u(5, 2) == 5
    assert tp.mcmullen_u(8, 2) == 8
    assert tp.trop_upper_bound(5, 3) == 44
    assert tp.checkerboard_pattern(1, 3).text() == "+-+\n"
    assert tp.natural_pattern(14, 7).count_tropical() >= 210
    assert tp.attained_pattern(4, 6).count_tropical() == tp.mcmullen_u(10, 5) == 42
    assert len(tp.gale_subsets(5, 2)) == 5

    # Exhaustive search over all 2^6 patterns of shape 2x3.
    result = tp.max_ntrop(2, 3)
    assert result["max"] == 5 and result["exhaustive"]
    assert all(
        tp.SignPattern(w).count_tropical() == 5 for w in result["witnesses"]
    )

    # Path rendering, 1-based indices.
    art = pattern.render_path([1, 2], [1, 2, 3])
    assert art == "+-.\n.-+\n", repr(art)

    # Errors surface as Python exceptions.
    try:
        tp.SignPattern("+x\n")
    except ValueError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("expected ValueError for a bad pattern")

    print("tropcone_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
