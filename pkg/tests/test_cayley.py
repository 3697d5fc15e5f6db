"""Window construction, metric laws, geodesics, caching."""

import random

import pytest

from coarse_ends import (
    OutOfWindowError,
    WindowCapError,
    build_window,
    window_cache_key,
)
from helpers import ZOO, get_gens, get_group, get_window
from oracles import bfs_norms


# ---------------------------------------------------------------------------
# Norms against the oracle


@pytest.mark.parametrize("text", ZOO)
def test_norms_match_oracle(text):
    radius = 5
    window = get_window(text, radius)
    grp = get_group(text)
    want = bfs_norms(grp, get_gens(text), radius)
    assert window.norms == want


def test_frozen_sphere_sizes():
    w = get_window("Z", 10)
    assert len(w) == 21
    assert [len(w.sphere(r)) for r in range(4)] == [1, 2, 2, 2]

    f2 = get_window("F2", 6)
    assert [len(f2.sphere(r)) for r in range(7)] == [1, 4, 12, 36, 108, 324, 972]

    z2 = get_window("Z^2", 6)
    assert [len(z2.sphere(r)) for r in range(1, 7)] == [4, 8, 12, 16, 20, 24]

    fp = get_window("(C2 * C3)", 6)
    assert [len(fp.sphere(r)) for r in range(1, 7)] == [3, 4, 6, 8, 12, 16]

    c6 = get_window("C6", 8)
    assert [len(c6.sphere(r)) for r in range(9)] == [1, 2, 2, 1, 0, 0, 0, 0, 0]


def test_ball_annulus_sphere_consistency():
    w = get_window("(C2 * C3)", 6)
    for r in range(7):
        ball = w.ball(r)
        assert len(ball) == sum(len(w.sphere(i)) for i in range(r + 1))
        assert all(w.knorm(g) <= r for g in ball)
    ann = w.annulus(2, 5)
    assert sorted(map(w.knorm, ann)) == sorted(
        n for n in map(w.knorm, w.elements) if 2 < n <= 5
    )
    with pytest.raises(OutOfWindowError):
        w.sphere(7)
    with pytest.raises(OutOfWindowError):
        w.annulus(2, 9)
    with pytest.raises(ValueError):
        w.annulus(5, 2)


# ---------------------------------------------------------------------------
# Metric laws


@pytest.mark.parametrize("text", ["Z", "Z^2", "F2", "(C2 * C3)"])
def test_metric_laws(text):
    window = get_window(text, 4)
    grp = window.group
    rng = random.Random(f"metric:{text}")
    els = window.elements
    for _ in range(300):
        g, h, k = rng.choice(els), rng.choice(els), rng.choice(els)
        try:
            dgh = window.distance(g, h)
        except OutOfWindowError:
            continue
        assert dgh == window.distance(h, g)
        assert (dgh == 0) == (g == h)
        # left invariance where all shifts stay inside the window
        try:
            assert window.distance(grp.mul(k, g), grp.mul(k, h)) == dgh
        except OutOfWindowError:
            pass
        try:
            assert dgh <= window.distance(g, k) + window.distance(k, h)
        except OutOfWindowError:
            pass


def test_knorm_out_of_window():
    w = get_window("Z", 5)
    with pytest.raises(OutOfWindowError):
        w.knorm((6,))
    assert w.knorm((5,)) == 5
    assert ((6,) in w) is False
    assert ((4,) in w) is True


# ---------------------------------------------------------------------------
# Geodesics


def test_geodesic_is_canonical_and_valid():
    w = get_window("Z^2", 6)
    geo = w.geodesic((1, 1))
    assert list(geo) == [(0, 0), (0, 1), (1, 1)]
    assert geo.length == 2
    assert geo.endpoint == (1, 1)

    for text in ZOO:
        window = get_window(text, 4)
        grp = window.group
        steps = set(window.steps)
        rng = random.Random(f"geo:{text}")
        els = window.elements
        for _ in range(200):
            g = rng.choice(els)
            geo = window.geodesic(g)
            assert geo.points[0] == grp.identity
            assert geo.endpoint == g
            assert geo.length == window.knorm(g)
            for i, p in enumerate(geo):
                assert window.knorm(p) == i
            for p, q in zip(geo.points, geo.points[1:]):
                assert grp.mul(grp.inv(p), q) in steps


def test_geodesic_identity_and_errors():
    w = get_window("Z", 5)
    geo = w.geodesic((0,))
    assert list(geo) == [(0,)]
    with pytest.raises(OutOfWindowError):
        w.geodesic((9,))
    with pytest.raises(ValueError):
        w.predecessor((0,))


# ---------------------------------------------------------------------------
# Determinism and cache


def test_fresh_builds_are_identical():
    for text in ["Z", "F2", "(C2 * C3)"]:
        grp = get_group(text)
        gens = get_gens(text)
        a = build_window(grp, gens, 5)
        b = build_window(grp, gens, 5)
        assert a.elements == b.elements
        assert a.spheres == b.spheres


def test_cache_roundtrip(tmp_path):
    grp = get_group("(C2 * C3)")
    gens = get_gens("(C2 * C3)")
    cold = build_window(grp, gens, 6, cache_dir=str(tmp_path))
    files = list(tmp_path.glob("window-*.json.gz"))
    assert len(files) == 1
    warm = build_window(grp, gens, 6, cache_dir=str(tmp_path))
    assert warm.elements == cold.elements
    assert warm.spheres == cold.spheres


def test_corrupted_cache_falls_back(tmp_path):
    grp = get_group("Z")
    gens = get_gens("Z")
    reference = build_window(grp, gens, 5)
    key = window_cache_key(grp, gens, 5)
    path = tmp_path / f"window-{key}.json.gz"
    path.write_bytes(b"not gzip at all")
    rebuilt = build_window(grp, gens, 5, cache_dir=str(tmp_path))
    assert rebuilt.elements == reference.elements


def test_cache_key_sensitivity():
    grp = get_group("Z")
    gens = get_gens("Z")
    k1 = window_cache_key(grp, gens, 5)
    assert k1 == window_cache_key(grp, gens, 5)
    assert k1 != window_cache_key(grp, gens, 6)
    assert k1 != window_cache_key(grp, get_gens("Z", 2), 5)
    other = get_group("Z^2")
    assert k1 != window_cache_key(other, get_gens("Z^2"), 5)


def test_window_cap():
    grp = get_group("F2")
    gens = get_gens("F2")
    with pytest.raises(WindowCapError) as exc:
        build_window(grp, gens, 10, cap=1000)
    assert exc.value.cap == 1000
    assert exc.value.radius_reached == 5  # |B(5)| = 485, |B(6)| = 1457
