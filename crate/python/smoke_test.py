"""Smoke test for the `unwind` extension module.

Uses an installed module if present, otherwise the shared library built by
`cargo build -p unwind-py [--release]`.
"""

import importlib.machinery
import importlib.util
import json
import math
import pathlib
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import unwind

        return unwind
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libunwind.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("unwind", str(lib))
            spec = importlib.util.spec_from_file_location("unwind", lib, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            sys.modules["unwind"] = module
            return module
    sys.exit("unwind extension not found; run `cargo build -p unwind-py` first")


CONFIG = """
[model]
kind = "spin-chain"
sites = 1
deltas = [1.0]
omega = 6.0
gamma = 0.01

[axis1]
name = "E"
min = 0.5
max = 1.0
count = 2

[axis2]
name = "omega"
min = 5.0
max = 6.0
count = 1

[methods]
list = ["principal", "unwound"]

[numerics]
n_steps = 256
n_t = 64

[output]
path = "smoke.csv"
timing = false
"""


def max_diff(a, b):
    return max(abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def main():
    uw = load()

    freq, period = 1.3, 10.0
    h = [[freq / 2, 0], [0, -freq / 2]]
    lower = [[0, 0], [1, 0]]
    gen = uw.lindbladian(h, [(lower, 0.05)])
    assert len(gen) == 4 and all(len(r) == 4 for r in gen)
    assert uw.mu(gen) == 0.0
    assert len(uw.choi(gen)) == 4

    # A rotation by 13 rad wraps twice past the principal branch; exactly one
    # branch shift recovers the true generator.
    hits = [x for x in range(-5, 6) if max_diff(uw.branch_generator(gen, period, [x]), gen) < 1e-6]
    assert len(hits) == 1, hits
    assert abs(hits[0]) == round(freq * period / (2 * math.pi))

    report = json.loads(uw.evaluate_static(gen, period, methods=["principal", "unwound"]))
    assert report["status"] == "ok" and report["n_c"] == 1, report
    assert report["mu"] == 0.0

    doc = json.loads(uw.point_report(CONFIG, 1, 0))
    assert doc["result"]["status"] == "ok"
    assert len(doc["eigenvalues"]) == 4

    with tempfile.TemporaryDirectory() as tmp:
        cfg = pathlib.Path(tmp) / "smoke.toml"
        cfg.write_text(CONFIG)
        path, rows, failures = uw.run_sweep(str(cfg))
        assert (rows, failures) == (2, 0)
        lines = [l for l in pathlib.Path(path).read_text().splitlines() if not l.startswith("#")]
        assert lines[0].split(",")[:4] == ["idx1", "idx2", "E", "omega"]
        assert len(lines) == 3

    try:
        uw.mu([[1, 2, 3]])
    except ValueError:
        pass
    else:
        raise AssertionError("non-square input accepted")

    print(f"unwind {uw.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
