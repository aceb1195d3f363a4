import json
from itertools import product

import pytest

from cfz.cache import CountCache
from cfz.counting import (ConvolutionStructureError, CountBudgetError,
                          CountRecord, VarietySpec, builtin_variety,
                          count_fermat_cubic, count_pairsum_convolution,
                          count_points_generic, count_S_fibered,
                          count_S_fibered_over, count_variety,
                          group_value_histogram, pairsum_groups,
                          points_on_variety, smoothness_scan)
from cfz.fields import field_of_order, projective_points

S = builtin_variety("S")
X = builtin_variety("X")
FERMAT = builtin_variety("fermat")

# golden counts of the surface, cross-checked below against the generic oracle
S_COUNTS = {7: 177, 13: 429, 19: 753, 31: 1536, 37: 2157}


def test_surface_count_table():
    for p, expected in S_COUNTS.items():
        assert count_S_fibered(p, 1).count == expected


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_surface_fibered_matches_generic(p):
    assert count_S_fibered(p, 1).count == count_points_generic(S, p).count


def test_surface_extension_fibered_matches_generic(s_over_49_count):
    assert count_S_fibered(7, 2).count == s_over_49_count
    assert s_over_49_count == 3453  # golden, frozen from the generic oracle


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_fourfold_convolution_matches_generic(p):
    assert count_pairsum_convolution(X, p).count == count_points_generic(X, p).count


@pytest.mark.parametrize("p", [7, 13])
def test_fermat_convolution_matches_generic(p):
    assert count_fermat_cubic(p).count == count_points_generic(FERMAT, p).count


def test_fourfold_counts_known():
    assert count_pairsum_convolution(X, 7).count == 3690
    assert count_pairsum_convolution(X, 13).count == 34308
    assert count_fermat_cubic(7).count == 3690


def test_empty_system_counts_whole_space():
    spec = VarietySpec.from_dict(
        {"name": "P2", "ambient": [2], "vars": [["x", "y", "z"]], "polys": []})
    assert count_points_generic(spec, 7).count == 57
    spec0 = VarietySpec.from_dict(
        {"name": "P2z", "ambient": [2], "vars": [["x", "y", "z"]], "polys": ["0"]})
    assert count_points_generic(spec0, 7).count == 57


def test_degenerate_fibers_contribute_whole_lines():
    # above each coordinate point of the base the first equation vanishes
    # identically on the fiber line, contributing q + 1
    field = field_of_order(7)
    e = field.element
    coord_pts = [(e(1), e(0), e(0)), (e(0), e(1), e(0)), (e(0), e(0), e(1))]
    assert count_S_fibered_over(field, coord_pts) == 3 * 8


def test_fibered_partition_independence():
    field = field_of_order(11)
    fibers = list(projective_points(field, 2))
    total = count_S_fibered(11, 1).count
    halves = (count_S_fibered_over(field, fibers[:60])
              + count_S_fibered_over(field, fibers[60:]))
    interleave = (count_S_fibered_over(field, fibers[::2])
                  + count_S_fibered_over(field, fibers[1::2]))
    assert halves == total == interleave


def test_histogram_conservation():
    _, groups = pairsum_groups(X)
    assert len(groups) == 3
    for p in (5, 7, 13):
        for var_idx, terms in groups:
            assert sum(group_value_histogram(terms, var_idx, p)) == p ** len(var_idx)
    _, fgroups = pairsum_groups(FERMAT)
    assert len(fgroups) == 6
    for var_idx, terms in fgroups:
        assert sum(group_value_histogram(terms, var_idx, 5)) == 5


def test_single_pair_histogram_total():
    spec = VarietySpec.from_dict(
        {"name": "g", "ambient": [1], "vars": [["a", "b"]], "polys": ["a*b^2-a^2*b"]})
    _, groups = pairsum_groups(spec)
    (var_idx, terms), = groups
    assert sum(group_value_histogram(terms, var_idx, 5)) == 25


def test_homogeneity_bridge_affine_vs_projective():
    # for a homogeneous single-block system the affine cone count is
    # 1 + (p-1) * projective count
    spec = VarietySpec.from_dict(
        {"name": "cubic-curve", "ambient": [2], "vars": [["x", "y", "z"]],
         "polys": ["x^3+2*y^3+z^3-3*x*y*z"]})
    mh = spec.polys[0]
    for p in (5, 7, 11):
        affine = sum(
            1 for vals in product(range(p), repeat=3)
            if mh.poly.evaluate(list(vals), mod=p) == 0)
        proj = count_points_generic(spec, p).count
        assert (affine - 1) % (p - 1) == 0
        assert (affine - 1) // (p - 1) == proj


def test_weil_bound_for_surface_counts():
    for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        n1 = count_S_fibered(p, 1).count
        assert abs(n1 - 1 - p * p) <= 22 * p


def test_budget_refusal_names_size():
    with pytest.raises(CountBudgetError) as e:
        count_points_generic(S, 7, budget=100)
    msg = str(e.value)
    assert "budget 100" in msg and str(57 * 57 * 6) in msg


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("CFZ_BUDGET", "100")
    with pytest.raises(CountBudgetError):
        count_points_generic(S, 7)


def test_convolution_structure_errors():
    with pytest.raises(ConvolutionStructureError):
        count_pairsum_convolution(S, 7)  # two blocks
    two_eqs = VarietySpec.from_dict(
        {"name": "two", "ambient": [3], "vars": [["a", "b", "c", "d"]],
         "polys": ["a^2-b^2", "c^2-d^2"]})
    with pytest.raises(ConvolutionStructureError):
        count_pairsum_convolution(two_eqs, 7)
    triple = VarietySpec.from_dict(
        {"name": "triple", "ambient": [2], "vars": [["a", "b", "c"]],
         "polys": ["a*b*c"]})
    with pytest.raises(ConvolutionStructureError) as e:
        count_pairsum_convolution(triple, 7)
    assert "size 3" in str(e.value)


def test_convolution_with_inactive_variable():
    # cone over a plane conic inside P^3: one variable never appears
    spec = VarietySpec.from_dict(
        {"name": "cone", "ambient": [3], "vars": [["a", "b", "c", "d"]],
         "polys": ["a^2-b*c"]})
    for p in (5, 7):
        assert (count_pairsum_convolution(spec, p).count
                == count_points_generic(spec, p).count)


def test_bad_characteristic_rejected():
    with pytest.raises(ValueError):
        count_pairsum_convolution(X, 3)
    with pytest.raises(Exception):
        count_points_generic(S, 3)


def test_points_on_variety_satisfy_equations():
    pts = points_on_variety(S, 7)
    assert len(pts) == 177
    for pt in pts[:25]:
        for mh in S.polys:
            assert mh.evaluate(pt).is_zero
    # canonical normalization: leading coordinate of each block is 1
    for pt in pts:
        for blk in pt:
            lead = next(x for x in blk if not x.is_zero)
            assert lead == lead.field.one()


def test_smoothness_scan_clean_for_surface():
    for p in (5, 7):
        assert smoothness_scan(S, p) == []


def test_smoothness_scan_detects_nodal_curve():
    nodal = VarietySpec.from_dict(
        {"name": "nodal", "ambient": [2], "vars": [["x", "y", "z"]],
         "polys": ["y^2*z-x^3-x^2*z"]})
    bad = smoothness_scan(nodal, 7)
    assert len(bad) == 1
    (blk,), = bad
    assert [x.encoding for x in blk] == [0, 0, 1]


def test_count_record_json_round_trip():
    rec = CountRecord("S", 7, 1, 177, "fibered")
    assert CountRecord.from_json(rec.to_json()) == rec


def test_variety_file_round_trip(tmp_path):
    path = tmp_path / "v.json"
    path.write_text(json.dumps(S.to_dict()))
    again = VarietySpec.from_file(path)
    assert again.to_dict() == S.to_dict()
    assert again.sha() == S.sha()


def test_variety_ambient_mismatch():
    with pytest.raises(ValueError):
        VarietySpec.from_dict(
            {"name": "bad", "ambient": [3], "vars": [["x", "y", "z"]], "polys": []})


def test_count_variety_dispatch_and_cache(tmp_path):
    cache = CountCache(tmp_path / "c.jsonl")
    rec = count_variety(S, 7, cache=cache)
    assert rec.method == "fibered" and rec.count == 177
    again = count_variety(S, 7, cache=cache)
    assert again == rec
    # cache file has exactly one record for the key
    lines = (tmp_path / "c.jsonl").read_text().strip().splitlines()
    assert len(lines) == 1
    assert count_variety(X, 7).method == "convolution"
    with pytest.raises(CountBudgetError):
        count_variety(X, 7, k=2)  # P^5 over GF(49) is past the default budget
    cone = VarietySpec.from_dict(
        {"name": "cone", "ambient": [3], "vars": [["a", "b", "c", "d"]],
         "polys": ["a^2-b*c"]})
    assert count_variety(cone, 5, k=2).method == "generic"
    assert count_variety(S, 7, method="generic").count == 177
    with pytest.raises(ValueError):
        count_variety(X, 7, method="fibered")


def test_builtin_unknown_name():
    with pytest.raises(KeyError):
        builtin_variety("nope")
