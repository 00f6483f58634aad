"""Graded recursion solver: fixtures, determinism, cache, exponential path."""

import json
from fractions import Fraction

import pytest

from rspin import (
    CacheError,
    TauCache,
    TauExpansion,
    TPolynomial,
    compute_tau,
    compute_tau_exponential,
    serialize_tau,
)

from helpers import raiser1_squared_on_one_r3, raiser2_on_one_r3, tau1_r2, tau1_r3, tau2_r3


def test_degree_zero_is_one():
    for r in (2, 3, 4, 5):
        tau = compute_tau(r, 0)
        assert tau.pieces == [TPolynomial.one(r)]


def test_r3_degree_one_fixture():
    assert compute_tau(3, 1).pieces[1] == tau1_r3()


def test_r3_degree_two_fixture():
    tau = compute_tau(3, 2)
    assert tau.pieces[1] == tau1_r3()
    assert tau.pieces[2] == tau2_r3()
    # the degree-2 piece equals half of (first raiser squared + second raiser) on 1
    half = (raiser1_squared_on_one_r3() + raiser2_on_one_r3()).scaled(Fraction(1, 2))
    assert tau.pieces[2] == half


def test_r2_degree_one_fixture():
    assert compute_tau(2, 1).pieces[1] == tau1_r2()


def test_pieces_are_euler_eigenvectors():
    for r, D in ((2, 4), (3, 3)):
        tau = compute_tau(r, D)
        for j, piece in enumerate(tau.pieces):
            assert piece.euler() == piece.scaled(j)


def test_validate_accepts_good_and_rejects_bad():
    tau = compute_tau(3, 2)
    tau.validate()
    bad = TauExpansion(3, 2, [tau.pieces[0], tau.pieces[1] + TPolynomial.one(3), tau.pieces[2]])
    with pytest.raises(Exception):
        bad.validate()
    odd = TauExpansion(3, 1, [TPolynomial.one(3), tau.pieces[1].shift_lambda(1)])
    with pytest.raises(Exception):
        odd.validate()


def test_piece_outside_range_is_zero():
    tau = compute_tau(3, 1)
    assert tau.piece(-1).is_zero
    assert tau.piece(5).is_zero
    assert tau.piece(1) == tau.pieces[1]


def test_invalid_arguments():
    with pytest.raises(ValueError):
        compute_tau(1, 2)
    with pytest.raises(ValueError):
        compute_tau(3, -1)


def test_determinism_across_runs_and_workers():
    blobs = {
        (run, workers): serialize_tau(compute_tau(3, 3, workers=workers))
        for run in (1, 2)
        for workers in (1, 3)
    }
    reference = blobs[(1, 1)]
    assert all(blob == reference for blob in blobs.values())


def test_cache_round_trip(tmp_path):
    cache = TauCache(tmp_path)
    first = serialize_tau(compute_tau(3, 2, cache=cache))
    assert (tmp_path / "r3_deg1.json").exists()
    assert (tmp_path / "r3_deg2.json").exists()
    second = serialize_tau(compute_tau(3, 2, cache=cache))
    assert first == second


def test_cache_is_shared_across_depths(tmp_path):
    cache = TauCache(tmp_path)
    compute_tau(3, 1, cache=cache)
    deep = compute_tau(3, 2, cache=cache)
    assert deep.pieces[1] == tau1_r3()
    assert deep.pieces[2] == tau2_r3()


def test_corrupt_cache_raises(tmp_path):
    cache = TauCache(tmp_path)
    compute_tau(3, 1, cache=cache)
    path = tmp_path / "r3_deg1.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(CacheError):
        compute_tau(3, 1, cache=TauCache(tmp_path))


def test_version_mismatch_raises(tmp_path):
    cache = TauCache(tmp_path)
    compute_tau(3, 1, cache=cache)
    path = tmp_path / "r3_deg1.json"
    doc = json.loads(path.read_text(encoding="utf-8"))
    doc["format_version"] = 99
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(CacheError):
        compute_tau(3, 1, cache=TauCache(tmp_path))


def test_mislabeled_cache_raises(tmp_path):
    cache = TauCache(tmp_path)
    compute_tau(3, 1, cache=cache)
    good = (tmp_path / "r3_deg1.json").read_text(encoding="utf-8")
    doc = json.loads(good)
    doc["degree"] = 2
    (tmp_path / "r3_deg2.json").write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(CacheError):
        compute_tau(3, 2, cache=TauCache(tmp_path))


def test_exponential_path_r2_matches_recursion():
    # with a single raiser the exponential formula is the recursion
    for D in (0, 1, 2, 3, 4):
        assert compute_tau_exponential(2, D).pieces == compute_tau(2, D).pieces


def test_exponential_path_r3_low_degrees():
    rec = compute_tau(3, 2)
    exp = compute_tau_exponential(3, 2)
    assert exp.pieces == rec.pieces
    assert compute_tau_exponential(3, 0).pieces == [TPolynomial.one(3)]


def test_exponential_path_divergence_is_visible_not_fatal():
    # the raisers do not commute at depth three, so the two paths part ways;
    # both still return well-formed expansions
    rec = compute_tau(3, 3)
    exp = compute_tau_exponential(3, 3)
    assert exp.pieces[:3] == rec.pieces[:3]
    diff = exp.pieces[3] - rec.pieces[3]
    assert not diff.is_zero
    assert diff.is_homogeneous(12)
