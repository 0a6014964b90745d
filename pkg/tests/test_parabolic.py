import pytest

from invbraid.coxeter import InvalidSystem, preset
from invbraid.engine import build_forest, extract_relations
from invbraid.parabolic import (
    BoundedSystem,
    case_configs,
    case_target,
    catalog_config,
    covering_cases,
    covering_report,
    find_bounded_embedding,
    is_parabolic_config,
    load_catalog,
)


def test_window_must_cover_with_boundary():
    with pytest.raises(InvalidSystem):
        BoundedSystem(preset("A6"), frozenset({2, 3}))


def test_window_must_be_twist_stable():
    with pytest.raises(InvalidSystem):
        BoundedSystem(preset("A5", twist="reverse"), frozenset({1, 2, 3}))


def test_catalog_windows_are_bounded():
    for entry in load_catalog()["configurations"]:
        cfg = catalog_config(entry["name"])
        assert cfg.s in cfg.J and cfg.t in cfg.J


@pytest.mark.parametrize("name", ["A5", "A6", "B5", "A8"])
def test_catalog_configs_are_parabolic(name):
    cfg = catalog_config(name)
    ok, built = is_parabolic_config(cfg.bounded, cfg.s, cfg.t, name=name)
    assert ok, built.failures
    assert built.relations()


def test_embedding_into_affine_a():
    cfg = catalog_config("A8")
    phi = find_bounded_embedding(cfg, preset("~A10"), 3, 4)
    assert phi is not None and phi[4] == 3 and phi[5] == 4
    assert len(set(phi.values())) == 8


def test_no_embedding_into_smaller_system():
    assert find_bounded_embedding(catalog_config("A8"), preset("A5"), 1, 2) is None


def test_end_anchored_window():
    # A5 has J = {2..5}, so s5 must land on an end of the target chain
    cfg = catalog_config("A5")
    assert find_bounded_embedding(cfg, preset("~A8"), 0, 1) is None
    assert find_bounded_embedding(cfg, preset("A7"), 6, 7) is not None


def test_relations_transport_along_embedding():
    cfg = catalog_config("A5")
    ok, cfg = is_parabolic_config(cfg.bounded, cfg.s, cfg.t)
    target = preset("A7")
    phi = find_bounded_embedding(cfg, target, 6, 7)
    moved = {r.relabel(phi) for r in cfg.relations()}
    assert moved == extract_relations(build_forest(target, 6, 7))


def _case(name):
    return next(c for c in covering_cases() if c["case"] == name)


@pytest.mark.parametrize("name", ["A1", "A3", "C1"])
def test_covering_cases(name):
    case = _case(name)
    n = case["covered_from"]
    report = covering_report(case_target(case, n), case_configs(case, n))
    assert report and all(report.values())


def test_affine_a_covered_by_a8():
    report = covering_report(preset("~A9"), [catalog_config("A8")])
    assert len(report) == 10
    assert {hit[0] for hit in report.values()} == {"A8"}


def test_rank_two_target_uncovered():
    report = covering_report(preset("~G2"), [catalog_config("A8")])
    assert set(report.values()) == {None}
