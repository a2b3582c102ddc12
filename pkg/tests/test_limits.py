import itertools

import pytest

from expdeg.errors import MultipleLimits, NoLimit, ValidationError
from expdeg.limits import (AssociatedPair, PointConfiguration, associated_pairs, audit_condition,
                           bar_class, canonical_representative, configuration_from_json,
                           corner_specializations, enumerate_configurations, stable_extensions,
                           surviving_pairs, triangle_points, unique_limit)
from expdeg.fibres import build_fibre, subdivision_of
from expdeg.stability import get_condition
from expdeg.tropical import Subdivision, check_unbroken_subdivision, completions

C = PointConfiguration
EDGE_12 = C(2, [(1, 1, 0)])
EDGE_13 = C(2, [(1, 0, 1)])
INTERIOR = C(3, [(1, 1, 1)])


def Sub(h, c1=(), c2=()):
    return Subdivision(h, {c: 1 for c in c1}, {d: 1 for d in c2})


def subs(pairs):
    return [p.subdivision for p in pairs]


# -- configurations ----------------------------------------------------------------

def test_configuration_is_stored_at_primitive_height():
    c = C(4, [(2, 2, 0), (0, 0, 4)])
    assert c.h == 2 and c.vertices == ((0, 0, 2), (1, 1, 0))
    assert c == C(2, [(1, 1, 0), (0, 0, 2)])
    assert c.m == 2


@pytest.mark.parametrize("h,verts", [(2, [(1, 1, 1)]), (2, []), (0, [(0, 0, 0)]),
                                     (2, [(3, -1, 0)])])
def test_bad_configurations(h, verts):
    with pytest.raises(ValidationError):
        C(h, verts)


def test_configuration_json_round_trip():
    c = C(3, [(1, 1, 1), (0, 0, 3), (1, 1, 1)])
    assert configuration_from_json(c.to_json()) == c
    assert c.bubble_vertices() == [(1, 1, 1)]
    assert len(c.support().points) == 3


def test_triangle_points_and_enumeration():
    assert len(triangle_points(4)) == 15
    cfgs = list(enumerate_configurations(4, 3))
    assert len(cfgs) == len(set(cfgs))
    assert all(c.h <= 4 and c.m <= 3 for c in cfgs)
    # every configuration is met once, at its primitive height
    assert C(4, [(2, 2, 0)]) in cfgs and sum(1 for c in cfgs if c == EDGE_12) == 1


# -- associated pairs --------------------------------------------------------------

def test_edge_12_vertex_has_three_pairs():
    pairs = associated_pairs(EDGE_12)
    assert sorted(p.label() for p in pairs) == ["mixed", "pure-1", "pure-2"]
    assert set(subs(pairs)) == {Sub(2, [1]), Sub(2, [], [1]), Sub(2, [1], [1])}


def test_edge_13_vertex_is_forced():
    assert subs(associated_pairs(EDGE_13)) == [Sub(2, [1])]


def test_interior_vertex_needs_both_lines():
    assert subs(associated_pairs(INTERIOR)) == [Sub(3, [1], [1])]


def test_point_in_y3_gives_the_bare_triangle():
    pairs = associated_pairs(C(5, [(0, 0, 5)]))
    assert len(pairs) == 1 and pairs[0].label() == "trivial"
    assert pairs[0].subdivision == Subdivision(1)


def test_paired_mode_adds_partner_lines():
    assert set(subs(associated_pairs(EDGE_13, "paired"))) == {Sub(2, [1]), Sub(2, [1], [1])}
    assert set(subs(associated_pairs(INTERIOR, "paired"))) == {
        Sub(3, [1], [1]), Sub(3, [1], [1, 2]), Sub(3, [1, 2], [1]), Sub(3, [1, 2], [1, 2])}


def test_unknown_mode():
    with pytest.raises(ValidationError):
        associated_pairs(EDGE_12, "maximal")


def test_pair_bookkeeping():
    mixed = next(p for p in associated_pairs(EDGE_13, "paired") if p.label() == "mixed")
    assert mixed.anchors == {(1, 0, 1)}
    assert mixed.unanchored_lines() == [("2", 1)]
    assert mixed.tubes() == [(0, 1, 1), (1, 1, 0)]
    assert mixed.choices() == {(1, 0, 1): "1"}
    obj = mixed.to_json()
    assert obj["tubes"] == [[0, 1, 1], [1, 1, 0]]


def _brute_pairs(cfg, mode):
    """Every unbroken line set at the configuration's height that carries its points."""
    h = cfg.h
    anchors = cfg.bubble_vertices()
    levels = range(1, h)
    out = set()
    for r1 in range(h):
        for c1 in itertools.combinations(levels, r1):
            for r2 in range(h):
                for c2 in itertools.combinations(levels, r2):
                    S = Sub(h, c1, c2)
                    if not check_unbroken_subdivision(S):
                        continue
                    if not all(S.is_vertex(v) for v in anchors):
                        continue
                    on1 = {c for c in c1 if any(v[0] == c for v in anchors)}
                    on2 = {d for d in c2 if any(v[1] == d for v in anchors)}
                    loose1, loose2 = set(c1) - on1, set(c2) - on2
                    if mode == "minimal" and (loose1 or loose2):
                        continue
                    # a loose line must share its attach point with an anchored line of the other kind
                    if any(h - c not in on2 for c in loose1) or any(h - d not in on1 for d in loose2):
                        continue
                    out.add(S)
    return out


@pytest.mark.parametrize("mode", ["minimal", "paired"])
def test_associated_pairs_match_brute_force(mode):
    for cfg in enumerate_configurations(4, 2):
        assert set(subs(associated_pairs(cfg, mode))) == _brute_pairs(cfg, mode), cfg


def test_associated_pairs_are_unbroken_and_carry_their_points():
    for cfg in enumerate_configurations(4, 3):
        for p in associated_pairs(cfg, "paired"):
            assert check_unbroken_subdivision(p.subdivision)
            for v in p.anchors:
                assert p.subdivision.is_vertex(v)


def test_canonical_representative_realizes_the_class():
    for cfg in enumerate_configurations(4, 2):
        for p in associated_pairs(cfg, "paired"):
            s = p.representative()
            got = subdivision_of(build_fibre(s)).forget_multiplicities()
            assert got == completions(p.subdivision)[0]


# -- stable extensions -------------------------------------------------------------

def test_all_three_edge_pairs_are_lw_stable():
    assert len(stable_extensions(EDGE_12, "lw")) == 3


def test_only_the_mixed_edge_pair_is_sws_stable():
    assert [p.label() for p in stable_extensions(EDGE_12, "sws")] == ["mixed"]


def test_forced_pair_under_each_filter():
    assert subs(stable_extensions(EDGE_13, "lw")) == [Sub(2, [1])]
    # the lone pure expansion has no point in Y1, so no representative passes GIT
    assert stable_extensions(EDGE_13, "sws") == []
    assert subs(stable_extensions(EDGE_13, "sws", "paired")) == [Sub(2, [1], [1])]


def test_unknown_filter():
    with pytest.raises(ValidationError):
        stable_extensions(EDGE_12, "dt")


def test_minimal_mode_gaps_are_broken_bases():
    empty = [c for c in enumerate_configurations(4, 3) if not stable_extensions(c, "lw")]
    assert len(empty) == 79
    for c in empty:
        assert associated_pairs(c) == []
    assert C(3, [(0, 2, 1), (2, 0, 1)]) in empty


def test_paired_mode_closes_every_configuration():
    for cfg in enumerate_configurations(4, 3):
        assert stable_extensions(cfg, "lw", "paired"), cfg


def test_sws_pairs_are_lw_stable():
    for cfg in enumerate_configurations(3, 2):
        lw = set(subs(stable_extensions(cfg, "lw", "paired")))
        assert set(subs(stable_extensions(cfg, "sws", "paired"))) <= lw


# -- bar classes -------------------------------------------------------------------

def test_bar_class_sizes_of_single_vertices():
    assert (bar_class(EDGE_12).size, bar_class(EDGE_13).size, bar_class(INTERIOR).size) == (3, 1, 1)


def test_bar_class_key_is_the_configuration():
    a = bar_class(C(4, [(2, 2, 0)]))
    assert a.key == EDGE_12 == bar_class(EDGE_12).key
    assert a.to_json()["key"] == EDGE_12.to_json()


def test_bar_classes_partition_the_stable_pairs():
    cfgs = list(enumerate_configurations(3, 2))
    classes = [bar_class(c) for c in cfgs]
    for cfg in cfgs:
        for p in stable_extensions(cfg, "lw"):
            assert sum(1 for bc in classes if p in bc) == 1


# -- unique limits -----------------------------------------------------------------

def test_ct_canonical_limit_is_mixed():
    assert unique_limit(EDGE_12, "ct-canonical").label() == "mixed"
    assert unique_limit(EDGE_12, "ct-canonical", "sws").label() == "mixed"


def test_preference_limits():
    assert unique_limit(EDGE_12, "pure-1-preference").label() == "pure-1"
    assert unique_limit(EDGE_12, "pure-2-preference").label() == "pure-2"


def test_excluding_nothing_leaves_three_limits():
    with pytest.raises(MultipleLimits) as info:
        unique_limit(EDGE_12, "exclude-nothing")
    assert len(info.value.witnesses) == 3


def test_excluding_everything_leaves_none():
    with pytest.raises(NoLimit):
        unique_limit(EDGE_12, "exclude-all")


def test_ct_canonical_is_almost_proper_with_all_shared_attach_points():
    ct = get_condition("ct-canonical")
    for cfg in enumerate_configurations(4, 3):
        lim = unique_limit(cfg, ct)
        assert set(lim.subdivision.attach_points().values()) <= {"both"}


def test_ct_canonical_filters_agree():
    ct = get_condition("ct-canonical")
    for cfg in enumerate_configurations(3, 3):
        assert subs(surviving_pairs(cfg, ct, "lw")) == subs(surviving_pairs(cfg, ct, "sws"))


@pytest.mark.parametrize("name", ["ct-canonical", "exclude-nothing", "pure-1-preference",
                                  "exclude-all"])
def test_unique_limit_agrees_with_audit(name):
    cfgs = list(enumerate_configurations(3, 2))
    everywhere = True
    for cfg in cfgs:
        try:
            unique_limit(cfg, name)
        except (NoLimit, MultipleLimits):
            everywhere = False
    assert audit_condition(name, 3, 2).almost_proper == everywhere


# -- audits ------------------------------------------------------------------------

def test_corner_specializations_out_of_y2():
    moves = dict(corner_specializations(Sub(4, [2]), "Y2"))
    assert (1, 3, 0) in moves
    assert moves[(1, 3, 0)] == Sub(4, [1, 2])


def test_ct_canonical_audit_passes():
    report = audit_condition("ct-canonical", 3, 2)
    assert report.almost_proper and report.compatibility
    assert report.witnesses == []


def test_pure_then_two_pure_audit_is_incompatible():
    report = audit_condition("one-pure-1-else-pure-2", 4, 2)
    assert not report.compatibility
    bad = [w for w in report.witnesses if w["kind"] == "incompatible"]
    w = next(w for w in bad if w["configuration"] == {"h": 2, "vertices": [[0, 2, 0], [1, 1, 0]]})
    assert w["corner"] == "Y2"
    assert w["subdivision"] == {"h": 2, "cuts1": {"1": 1}, "cuts2": {}}
    assert w["limit_subdivision"]["cuts1"] == {}
    text = report.to_text()
    assert "tropically compatible: no" in text


def test_exclude_all_audit_reports_missing_limits():
    report = audit_condition("exclude-all", 2, 1)
    assert not report.almost_proper
    assert {w["kind"] for w in report.witnesses} == {"no-limit"}


def test_undefined_condition_is_reported():
    cond = {"name": "one-only", "alpha": {"1": "1"}}
    report = audit_condition(cond, 3, 2)
    assert any(w["kind"] == "undefined" for w in report.witnesses)
    assert not report.almost_proper


def test_parallel_audit_matches_serial():
    a = audit_condition("one-pure-1-else-pure-2", 3, 2, workers=1)
    b = audit_condition("one-pure-1-else-pure-2", 3, 2, workers=2)
    assert a.to_json() == b.to_json()


def test_audit_rejects_unknown_filter():
    with pytest.raises(ValidationError):
        audit_condition("ct-canonical", 2, 1, filter="dt")
