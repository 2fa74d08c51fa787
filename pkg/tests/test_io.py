import json
from fractions import Fraction

import numpy as np
import pytest

from perimin.io import (
    ScenarioFormatError,
    encode_runs,
    exact,
    from_exact,
    load_scenario,
    parse_rational,
    read_masks,
    scenario_from_document,
    write_masks,
)
from perimin.scenarios import tripod
from perimin.space import CapacityScaleError


def _custom(**over):
    doc = {"version": 1, "capacity_scale": 64,
           "custom": {"grids": [[3, 2, "1/2", 1], [2, 2, "1/2", [[1, 2], [0, "1/2"]]]],
                      "atoms": [[0, 1, 2, "1/4"]],
                      "gluings": [[[0, 0, 2], [1, 0, 0]]],
                      "omega": [[1, 4, 1], [0, 2, 2]]}}
    doc["custom"].update(over)
    return doc


def test_parse_rational():
    assert parse_rational("3/8") == Fraction(3, 8)
    assert parse_rational(0.25) == Fraction(1, 4)
    assert parse_rational(2) == 2
    for bad in ("x", True, float("nan"), None, "1/0"):
        with pytest.raises(ScenarioFormatError):
            parse_rational(bad)


def test_exact_round_trip():
    doc = exact(Fraction(3, 8), 64)
    assert doc == {"numerator": 24, "scale": 64, "decimal": "0.375"}
    assert from_exact(doc) == Fraction(3, 8)
    grown = exact(Fraction(1, 3), 64)
    assert grown["scale"] == 192 and from_exact(grown) == Fraction(1, 3)


def test_runs_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(20):
        mask = rng.random(17) < 0.5
        runs = encode_runs(mask)
        assert sum(runs) == 17
        assert np.array_equal(np.repeat(np.arange(len(runs)) % 2 == 1, runs), mask)


def test_custom_scenario():
    scn = scenario_from_document(_custom())
    sp = scn.space
    assert sp.n == 6 + 4 - 1
    assert sp.scale == 64
    glued = int(sp.charts[0][0, 2])
    assert glued == int(sp.charts[1][0, 0])
    assert sp.measure[glued] == 16 + 16  # two quarter-cells merged
    assert sp.measure[int(sp.charts[0][1, 2])] == 16 + 16  # atom of 1/4
    assert scn.omega.sum() == 4 + 2 - 1


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(version=2),
    lambda d: d.update(builtin={"name": "square"}),
    lambda d: d.pop("custom"),
    lambda d: d.update(capacity_scale=-1),
    lambda d: d["custom"].update(omega=[[1, 4], [0, 2, 2]]),
    lambda d: d["custom"].update(omega=[[6]]),
    lambda d: d["custom"].update(grids=[[3, 2, "1/2", [[1, 1]]]]),
    lambda d: d["custom"].update(grids=[[0, 2, "1/2", 1]]),
    lambda d: d["custom"].update(grids=[[3, 2, "-1/2", 1]]),
    lambda d: d["custom"].update(atoms=[[0, 5, 0, 1]]),
    lambda d: d["custom"].update(atoms=[[0, 0, 0, -1]]),
    lambda d: d["custom"].update(gluings=[[[0, 0, 0], [0, 0, 1]]]),
])
def test_malformed_documents(mutate):
    doc = _custom()
    mutate(doc)
    with pytest.raises(ScenarioFormatError):
        scenario_from_document(doc)


def test_builtin_document_and_scale_override(monkeypatch):
    doc = {"version": 1, "builtin": {"name": "square", "params": {"n": 4, "pad": 1}}}
    assert scenario_from_document(doc).space.scale == 65536
    monkeypatch.setenv("PERIMIN_SCALE", "4096")
    assert scenario_from_document(doc).space.scale == 4096
    monkeypatch.setenv("PERIMIN_SCALE", "3")
    # builtins raise the scale to fit their own values; custom grids must fit as given
    assert scenario_from_document(doc).space.scale % 3 == 0
    with pytest.raises(CapacityScaleError):
        scenario_from_document(_custom())


def test_unknown_builtin_is_malformed():
    with pytest.raises(ScenarioFormatError):
        scenario_from_document({"version": 1, "builtin": {"name": "disk"}})
    with pytest.raises(ScenarioFormatError):
        scenario_from_document({"version": 1, "builtin": {"name": "square", "params": {"size": 3}}})


def test_load_scenario_errors(tmp_path):
    with pytest.raises(ScenarioFormatError):
        load_scenario(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ScenarioFormatError):
        load_scenario(bad)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(_custom()))
    scn, doc = load_scenario(good)
    assert doc["version"] == 1 and scn.space.n == 9


def test_masks_round_trip(tmp_path):
    scn = scenario_from_document(_custom())
    rng = np.random.default_rng(1)
    mask = rng.random(scn.space.n) < 0.5
    paths = write_masks(scn.space, mask, tmp_path / "out" / "m")
    assert [p.name for p in paths] == ["m-chart0.pgm", "m-chart1.pgm"]
    assert paths[0].read_text().startswith("P2\n3 2\n255\n")
    assert np.array_equal(read_masks(scn.space, tmp_path / "out" / "m"), mask)


def test_masks_round_trip_with_hidden_vertices(tmp_path):
    # slits narrower than a column leave line pieces that no chart shows
    scn = tripod(1, Fraction(1, 32), strict=False)
    mask = scn.omega
    paths = write_masks(scn.space, mask, tmp_path / "t")
    assert len(paths) == 4  # three sheets plus the hidden line pieces
    assert np.array_equal(read_masks(scn.space, tmp_path / "t"), mask)


def test_mask_mismatch_errors(tmp_path):
    scn = scenario_from_document(_custom())
    write_masks(scn.space, scn.omega, tmp_path / "m")
    with pytest.raises(ScenarioFormatError):
        read_masks(scn.space, tmp_path / "other")
    # flip the glued vertex on one chart only
    p = tmp_path / "m-chart1.pgm"
    lines = p.read_text().splitlines()
    last = lines[-1].split()
    last[0] = "0" if last[0] == "255" else "255"
    lines[-1] = " ".join(last)
    p.write_text("\n".join(lines) + "\n")
    with pytest.raises(ScenarioFormatError):
        read_masks(scn.space, tmp_path / "m")
    p.write_text("P2\n3 3\n255\n" + "0 " * 9)
    with pytest.raises(ScenarioFormatError):
        read_masks(scn.space, tmp_path / "m")
    p.write_text("P5\n")
    with pytest.raises(ScenarioFormatError):
        read_masks(scn.space, tmp_path / "m")
