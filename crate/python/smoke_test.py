"""Builds the extension module and exercises it from Python.

    python3 python/smoke_test.py            # build with cargo, then test
    python3 python/smoke_test.py --lib X.so # test an already built library
"""

import argparse
import importlib
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build() -> pathlib.Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "asymcover-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    for name in ("libasymcover_py.so", "libasymcover_py.dylib"):
        path = ROOT / "target" / "release" / name
        if path.exists():
            return path
    sys.exit("built library not found under target/release")


def load(lib: pathlib.Path, workdir: str):
    shutil.copy(lib, pathlib.Path(workdir) / "asymcover_py.so")
    sys.path.insert(0, workdir)
    return importlib.import_module("asymcover_py")


def run(ac) -> None:
    code = ac.Code(3, ["111", "011", "100"], 1)
    assert code.covers() and code.covering_radius() == 1
    assert code.level_profile() == [0, 1, 1, 1]
    assert ac.Code.parse(code.to_json()) == code

    assert ac.asym_sphere_bound(4, 1) == 5
    assert ac.ip_plus(9, 3) == 14
    res = ac.exact_kplus(5, 1)
    assert res["status"] == "exact" and res["upper"] == 10
    assert res["witness"].covers(1)

    rec = ac.best_bounds(4, 1, ip=True, exact=True)
    assert (rec["lower"], rec["upper"], rec["lower_tag"], rec["upper_tag"]) == (6, 6, "i", "e")

    greedy = ac.greedy_code(8, 2)
    assert greedy.covers() and 20 <= len(greedy) <= 25 * 1.5
    random = ac.random_code_nu(8, 2, seed=1)
    assert random.covers(2)

    basis, span = ac.a_code(6, 2)
    assert len(basis) == ac.k_plus(6, 2) == 4
    assert span.covers(2) and "111111" in span.words
    assert ac.min_linear_dim(5, 2, exhaustive=True) == 3

    try:
        ac.Code(3, ["01"])
    except ValueError:
        pass
    else:
        raise AssertionError("short word accepted")
    print("python smoke test passed:", repr(greedy))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lib", type=pathlib.Path, help="prebuilt extension library")
    args = parser.parse_args()
    lib = args.lib or build()
    with tempfile.TemporaryDirectory() as tmp:
        run(load(lib, tmp))


if __name__ == "__main__":
    main()
