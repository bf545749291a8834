"""Smoke tests for the python bindings.

Runnable under pytest or directly: ``python3 tests/python/test_smoke.py``.
"""

import json
import math

import solvembed as sv


def test_catalog_names():
    names = sv.catalog_names()
    assert len(names) == 11
    for expected in ("rh(2)", "heisenberg_ext", "filiform4_ext", "triangular_iwasawa(3)"):
        assert expected in names


def test_algebra_object():
    ex = sv.example("heisenberg_ext")
    alg = ex["alg"]
    assert alg.dim == 4
    assert alg.labels[0] == "A"
    ad0 = alg.ad(0)
    assert abs(ad0[1][1] - 1.0) < 1e-12
    assert abs(ad0[3][3] - 2.0) < 1e-12

    report = sv.validate_algebra(alg)
    assert report["solvable"]
    assert report["completely_solvable"]

    checks = sv.validate_split(alg, ex["split"])
    assert len(checks) == 7
    assert all(c["passed"] for c in checks)


def test_construct_from_brackets():
    alg = sv.MetricLieAlgebra.from_brackets(
        3,
        [(0, 1, 2, 1.0)],
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        ["X", "Y", "Z"],
    )
    assert alg.dim == 3
    assert abs(alg.ip([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]) - 1.0) < 1e-12
    z = alg.bracket([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
    assert abs(z[2] - 1.0) < 1e-12


def test_embed():
    ex = sv.example("heisenberg_ext")
    res = sv.embed(ex["alg"], ex["split"])
    assert res["certificate"]["accepted"]
    assert res["N"] <= 8
    assert abs(res["certificate"]["achieved_c"] - 16.0) < 1e-8
    assert len(res["mats"]) == 4
    assert abs(res["stage_scales"][0] - math.log(2.0) / 2.0) < 1e-9


def test_embed_rejects_bad_scale():
    ex = sv.example("heisenberg_ext")
    try:
        sv.embed(ex["alg"], ex["split"], scale=0.5)
    except sv.SolvembedError:
        pass
    else:
        raise AssertionError("expected SolvembedError for an infeasible scale")


def test_ricci_and_einstein():
    ex = sv.example("rh(3)")
    frame, ric = sv.ricci(ex["alg"])
    for i in range(3):
        for j in range(3):
            expected = -2.0 if i == j else 0.0
            assert abs(ric[i][j] - expected) < 1e-9
    ok, residual = sv.einstein_check(ex["alg"])
    assert ok
    assert residual < 1e-10


def test_soliton():
    ex = sv.example("heisenberg(3)")
    data = sv.soliton_data(ex["alg"])
    assert abs(data["c"] + 1.5) < 1e-9
    D = data["derivation"]
    assert abs(D[0][0] - 1.0) < 1e-9
    assert abs(D[2][2] - 2.0) < 1e-9

    ext, split = sv.soliton_extension(ex["alg"])
    assert ext.dim == 4
    ok, _ = sv.einstein_check(ext)
    assert ok


def test_two_step_pipeline():
    two = sv.random_two_step(3, 3, 1)
    D = sv.two_step_canonical_derivation(two)
    ext, split = sv.rank_one_extension(two, D)
    res = sv.embed(ext, split)
    assert res["certificate"]["accepted"]


def test_json_round_trip():
    ex = sv.example("rh(2)")
    text = sv.algebra_to_json(ex["alg"], ex["split"])
    parsed = json.loads(text)
    assert parsed["dim"] == 2

    alg2, split2 = sv.algebra_from_json(text)
    assert alg2.dim == 2
    assert split2 is not None
    text2 = sv.algebra_to_json(alg2, split2)
    assert text == text2

    emb_text = sv.embedding_to_json(ex["alg"], ex["split"])
    cert = sv.verify_embedding(emb_text, text)
    assert cert["accepted"]
    assert abs(cert["achieved_c"] - 2.0) < 1e-9


def test_error_types():
    try:
        sv.example("no_such_entry")
    except sv.SolvembedError:
        pass
    else:
        raise AssertionError("expected SolvembedError for an unknown name")

    try:
        sv.algebra_from_json("{not json")
    except sv.SolvembedError:
        pass
    else:
        raise AssertionError("expected SolvembedError for malformed json")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"ok   {name}")
            except Exception as exc:  # noqa: BLE001
                failures += 1
                print(f"FAIL {name}: {exc!r}")
    raise SystemExit(failures)
