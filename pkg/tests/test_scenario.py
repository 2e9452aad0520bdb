"""Schema strictness, resolution, and preset integrity."""

from __future__ import annotations

import json
import logging

import numpy as np
import pytest

from hmp import potential, scenario
from hmp.errors import ParseError, UnknownPreset, ValidationError
from hmp.rollout import Termination

# the straight-line chain policy costs tau * G * |du| in effort, so the
# measured default penalty weight is ten times that (constant-metric integral,
# G = k_c k_e / (k_c + k_e) = 800 * 350 / 1150)
CHAIN_STRAIGHT_PENALTY = 10.0 * 10.0 * (800.0 * 350.0 / 1150.0) * 1.0


def chain_doc(**rollout_overrides):
    doc = scenario._chain_doc()
    doc["rollout"].update(rollout_overrides)
    return doc


def test_paper_preset_carries_paper_constants():
    s = scenario.preset("paper-bookshelf")
    assert np.array_equal(s.params.k_c, [800.0, 800.0, 20.0])
    for book in s.params.books:
        assert book.k_x == 350.0
        assert book.k_theta == 20.0
    assert s.bbo.n_rollouts == 15
    assert s.dmp.duration == 10.0
    assert len(s.params.pairs) == 4
    # shelf gap 0.03 m, manipulated width 0.04 m: the defining tight fit
    left, right = s.params.books
    gap = (right.rest_x - right.shape.a1) - (left.rest_x + left.shape.a1)
    assert gap == pytest.approx(0.03)
    assert 2 * s.params.grasped_shape.a1 == pytest.approx(0.04)


def test_round_trip_is_byte_identical(tmp_path):
    s = scenario.preset("paper-bookshelf")
    path = tmp_path / "scene.json"
    s.save(path)
    s2 = scenario.load(path)
    assert s2.canonical_text == s.canonical_text
    assert s2.sha256 == s.sha256
    path2 = tmp_path / "scene2.json"
    s2.save(path2)
    assert path.read_bytes() == path2.read_bytes()


def test_repeated_loads_hash_identically():
    a = scenario.preset("paper-bookshelf")
    b = scenario.preset("paper-bookshelf")
    assert a.sha256 == b.sha256


def test_unknown_keys_are_rejected_by_name():
    doc = chain_doc()
    doc["bogus_section"] = {}
    with pytest.raises(ValidationError, match="bogus_section"):
        scenario.from_dict(doc)
    doc = chain_doc()
    doc["control"]["surprise"] = 1.0
    with pytest.raises(ValidationError, match="control.surprise"):
        scenario.from_dict(doc)


def test_negative_book_stiffness_names_the_field():
    doc = scenario._bookshelf_doc("bad", "")
    doc["shelf_books"][0]["stiffness"] = [-1.0, 20.0]
    with pytest.raises(ValidationError, match=r"shelf_books\[0\].stiffness"):
        scenario.from_dict(doc)


def test_negative_control_stiffness_names_the_field():
    doc = chain_doc()
    doc["control"]["stiffness"] = [800.0, -800.0, 20.0]
    with pytest.raises(ValidationError, match=r"control.stiffness"):
        scenario.from_dict(doc)


def test_missing_required_key_names_the_field():
    doc = chain_doc()
    del doc["control"]["u0"]
    with pytest.raises(ValidationError, match="control.u0"):
        scenario.from_dict(doc)


def test_wrong_schema_version():
    doc = chain_doc()
    doc["schema_version"] = 99
    with pytest.raises(ValidationError, match="schema_version"):
        scenario.from_dict(doc)


def test_omitted_d0_default_is_echoed():
    s = scenario.preset("paper-bookshelf")
    assert s.resolved["contact"]["d0"] == 0.05
    assert s.params.profile.d0 == 0.05


def test_null_penalty_weight_resolves_from_straight_policy():
    s = scenario.preset("spring-chain-1d")
    assert s.rollout_config.penalty_weight == pytest.approx(CHAIN_STRAIGHT_PENALTY, rel=1e-3)
    assert s.resolved["rollout"]["penalty_weight"] == s.rollout_config.penalty_weight
    assert s.resolved["resolved"]["straight_line_phi"] == pytest.approx(
        CHAIN_STRAIGHT_PENALTY / 10.0, rel=1e-3
    )


def test_explicit_penalty_weight_is_kept():
    doc = chain_doc(penalty_weight=123.5)
    s = scenario.from_dict(doc)
    assert s.rollout_config.penalty_weight == 123.5


def test_explicit_absolute_lambda_det_is_kept():
    doc = chain_doc()
    doc["manifold"] = {"lambda_det": 42.0}
    s = scenario.from_dict(doc)
    assert s.lambda_det == 42.0
    assert s.resolved["manifold"]["lambda_rel"] is None


def test_relative_lambda_scales_rest_determinant():
    doc = chain_doc()
    doc["manifold"] = {"lambda_rel": 1e-3}
    s = scenario.from_dict(doc)
    det_rest = s.resolved["resolved"]["det_hzz_rest"]
    assert det_rest > 0.0
    assert s.lambda_det == pytest.approx(1e-3 * det_rest, rel=1e-12)


def test_default_lambda_is_exact_sign_test():
    s = scenario.preset("paper-bookshelf")
    assert s.lambda_det == 0.0


def test_malformed_json_is_a_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ParseError, match="broken.json"):
        scenario.load(path)
    path2 = tmp_path / "list.json"
    path2.write_text("[1,2]")
    with pytest.raises(ParseError, match="top level"):
        scenario.load(path2)


def test_bad_pair_references_name_the_pair():
    doc = scenario._bookshelf_doc("bad", "")
    doc["contact"]["pairs"][0]["surface"] = "shelf_9"
    with pytest.raises(ValidationError, match=r"contact.pairs\[0\].surface"):
        scenario.from_dict(doc)
    doc = scenario._bookshelf_doc("bad", "")
    doc["contact"]["pairs"][1]["corner"] = [0, 1]
    with pytest.raises(ValidationError, match=r"contact.pairs\[1\].corner"):
        scenario.from_dict(doc)
    doc = scenario._bookshelf_doc("bad", "")
    doc["contact"]["pairs"][2]["corner_of"] = doc["contact"]["pairs"][2]["surface"]
    with pytest.raises(ValidationError, match="different bodies"):
        scenario.from_dict(doc)


def test_tight_gap_logs_a_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="hmp.scenario"):
        scenario.preset("paper-bookshelf")
    assert any("tight insertion" in rec.message for rec in caplog.records)


def test_unknown_preset():
    with pytest.raises(UnknownPreset, match="no-such-scene"):
        scenario.preset("no-such-scene")


def test_every_preset_resolves_to_a_stable_equilibrium():
    for name in scenario.preset_names():
        got = scenario.preset(name)
        for s in got if isinstance(got, list) else [got]:
            resid = np.max(np.abs(potential.grad_z(s.state0, s.u0, s.params)))
            assert resid < s.manifold_config.equilibrium_tol, s.name
            assert s.resolved["resolved"]["det_hzz_rest"] > 0.0, s.name
            assert s.rollout_config.penalty_weight > 0.0, s.name


def test_initial_position_sweep_offsets():
    sweep = scenario.preset("initial-position-sweep")
    assert [s.u0[0] for s in sweep] == [0.0, 0.025, 0.050, 0.075, 0.100]
    assert all(s.goal[0] == 0.0 for s in sweep)


def test_stiffness_ratio_sweep_covers_both_orientations():
    sweep = scenario.preset("stiffness-ratio-sweep")
    ratios = []
    for s in sweep:
        left, right = s.params.books
        ratios.append(round(right.k_x / left.k_x, 6))
    assert ratios == [2.0, 0.5, 3.0, round(1 / 3, 6), 4.0, 0.25]


def test_rigid_wall_presets_scale_one_side():
    left = scenario.preset("left-wall-rigid")
    assert left.params.books[0].k_x == 350.0e3
    assert left.params.books[1].k_x == 350.0
    right = scenario.preset("right-wall-rigid")
    assert right.params.books[0].k_x == 350.0
    assert right.params.books[1].k_x == 350.0e3


def test_infeasible_start_is_a_validation_error():
    doc = scenario._bookshelf_doc("jammed", "")
    doc["control"]["u0"] = [0.0, -0.18, 0.0]
    doc["manifold"] = {"max_relax_steps": 1}
    with pytest.raises(ValidationError, match="control.u0"):
        scenario.from_dict(doc)


def test_simulate_and_policy_cost():
    s = scenario.preset("spring-chain-1d")
    cost, r = s.policy_cost(s.zero_theta())
    assert r.termination is Termination.COMPLETED
    assert cost == r.phi_end
    short = s.simulate(s.zero_theta(), until=1.0)
    assert short.t_end == pytest.approx(1.0, abs=1e-9)
