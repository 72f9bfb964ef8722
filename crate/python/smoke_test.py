"""Smoke test for the covrep_py extension.

Run after `maturin develop -m crates/python/Cargo.toml`, or point
COVREP_PY_PATH at a directory holding a built `covrep_py` module.
"""

import json
import os
import sys

import numpy as np

if os.environ.get("COVREP_PY_PATH"):
    sys.path.insert(0, os.environ["COVREP_PY_PATH"])

import covrep_py as cv  # noqa: E402


def arr(rows):
    return np.array(rows, dtype=complex)


def main():
    rng = np.random.default_rng(3)
    h, n = 3, 2
    v = rng.standard_normal((h, n * h)) + 1j * rng.standard_normal((h, n * h))
    rep = cv.Rep(h, n, v.tolist())
    assert (rep.dim_h, rep.n) == (h, n)

    # Moore-Penrose inverse and Cauchy dual against numpy.
    assert np.allclose(arr(rep.pinv()), np.linalg.pinv(v), atol=1e-10)
    dual = cv.Rep(h, n, v.tolist()).cauchy_dual()
    want = v @ np.linalg.pinv(v.conj().T @ v)
    assert np.allclose(arr(dual.v_tilde), want, atol=1e-10)

    # Second power: V (I_n kron V).
    v2 = v @ np.kron(np.eye(n), v)
    assert np.allclose(arr(rep.power(2)), v2, atol=1e-12)

    # JSON round trip is bit exact.
    back = cv.Rep.from_json(rep.to_json())
    assert back.v_tilde == rep.v_tilde
    assert json.loads(rep.to_json())["dim_h"] == h

    # Surjective dense rep: regular, bi-regular, no falsifications.
    assert rep.is_regular() and rep.is_bi_regular()
    checks = rep.check()
    assert checks and not any(c["falsification"] for c in checks)

    # Truncated unilateral shift: not regular, Dirichlet weights concave.
    shift = cv.weighted_shift("unilateral", 1, (0, 6), "dirichlet")
    assert not shift.is_regular()
    assert shift.property("concave")["holds"]
    unit = cv.weighted_shift("unilateral", 1, (0, 4))
    wold = unit.wold()
    assert wold["dims"][0] == 1

    # Plain pinv and a tiny fuzz run.
    assert np.allclose(arr(cv.pinv([[2.0, 0.0], [0.0, 0.0]])), [[0.5, 0], [0, 0]])
    out = cv.fuzz(12, seed=42)
    assert out["falsifications"] == 0, out

    print(f"covrep_py {cv.__version__}: smoke test ok ({len(checks)} checks, {out['pass']} fuzz passes)")


if __name__ == "__main__":
    main()
