"""Growth data, covering numbers, and the annulus-cover asymptotic-dimension witness.

The witness machinery works in three stages. First a thin-geodesics
diagnostic: over pairs of canonical geodesics from the identity, measure
the largest distance between same-index points within the range where the
two endpoints' distance permits fellow-traveling; a value that keeps
growing with the window radius is treated as evidence against coarse
hyperbolicity and the witness refuses to proceed. Second, covering
numbers: N is the largest number of radius-S ball translates needed to
cover a radius-(S+t) ball over sampled S, at offset t = 2*delta. Third,
annulus covers: on each annulus between norms 2n and 2n+2ps, elements are
grouped by the last point where their canonical geodesic crosses the norm
2n sphere, bucketed around a 2ps-separated net on that sphere. Exact
scans then confirm the diameter and multiplicity laws that make the
family of covers witness asdim <= 2*N - 1.

All greedy choices (net points, cover centers) are ordered by norm then
printed form, so witnesses are reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .cayley import DEFAULT_CAP, Window, build_window
from .errors import (
    CoverVerificationError,
    EmptyShellError,
    NonHyperbolicError,
    ParameterError,
)

__all__ = [
    "GrowthRow",
    "CoveringSample",
    "GrowthTable",
    "growth_series",
    "greedy_ball_cover",
    "covering_number",
    "exact_covering_number",
    "bounded_geometry_check",
    "estimate_delta",
    "SeparatedNet",
    "AnnulusCover",
    "CoverStats",
    "AsdimWitness",
    "build_annulus_cover",
    "verify_cover",
    "asdim_upper_bound",
]


# ---------------------------------------------------------------------------
# Growth and covering numbers


@dataclass(frozen=True)
class GrowthRow:
    r: int
    sphere: int
    ball: int


@dataclass(frozen=True)
class CoveringSample:
    base: int
    offset: int
    count: int


@dataclass(frozen=True)
class GrowthTable:
    rows: tuple
    covering: tuple
    bounded_geometry: int


def growth_series(window: Window) -> tuple:
    """Sphere and cumulative ball sizes per radius, straight from the window."""
    rows = []
    total = 0
    for r in range(window.radius + 1):
        total += len(window.sphere(r))
        rows.append(GrowthRow(r=r, sphere=len(window.sphere(r)), ball=total))
    return tuple(rows)


def greedy_ball_cover(window: Window, target: Iterable, s: int) -> list:
    """Cover target by balls g*B(s); returns the chosen centers in order.

    Rule: take the deepest uncovered element (largest norm, then least
    printed form), walk its canonical geodesic back by s steps, and use
    that point as the next center. Centering on the geodesic prefix makes
    one translate swallow the whole branch below it, which is what keeps
    the count flat as the target grows on tree-like groups.
    """
    if s < 0:
        raise ParameterError("covering radius must be nonnegative")
    grp = window.group
    remaining = set(target)
    order = sorted(remaining, key=lambda g: (-window.knorm(g), grp.key(g)))
    ball = window.ball(min(s, window.radius))
    centers = []
    covered = set()
    for u in order:
        if u in covered:
            continue
        k = window.norms[u]
        center = window.geodesic(u)[max(k - s, 0)]
        centers.append(center)
        for v in ball:
            y = grp.mul(center, v)
            if y in remaining:
                covered.add(y)
    return centers


def covering_number(window: Window, S: int, t: int) -> int:
    """Greedy count of radius-S ball translates covering the radius-(S+t) ball."""
    if S < 0 or t < 0:
        raise ParameterError("base radius and offset must be nonnegative")
    if S + t > window.radius:
        raise ParameterError(
            f"covering K^{S + t} needs window radius >= {S + t}, have {window.radius}"
        )
    if t == 0:
        return 1
    target = window.ball(S + t)
    return len(greedy_ball_cover(window, target, S))


def exact_covering_number(window: Window, S: int, t: int, cap: int = 18) -> int:
    """Minimum number of radius-S translates covering the radius-(S+t) ball.

    Exhaustive branch and bound over candidate centers; only sensible for
    tiny targets, hence the hard cap on target size.
    """
    if S + t > window.radius:
        raise ParameterError("window too small")
    target = window.ball(S + t)
    if len(target) > cap:
        raise ParameterError(f"exact search limited to targets of size <= {cap}")
    grp = window.group
    index = {g: i for i, g in enumerate(target)}
    full = (1 << len(target)) - 1
    ball = window.ball(min(S, window.radius))
    masks = set()
    for c in window.ball(min(2 * S + t, window.radius)):
        m = 0
        for v in ball:
            y = grp.mul(c, v)
            if y in index:
                m |= 1 << index[y]
        if m:
            masks.add(m)
    masks = sorted(masks, reverse=True)
    by_bit = [[] for _ in range(len(target))]
    for m in masks:
        for b in range(len(target)):
            if m >> b & 1:
                by_bit[b].append(m)

    best = covering_number(window, S, t)  # greedy seeds the bound

    def search(mask: int, used: int) -> None:
        nonlocal best
        if mask == full:
            best = min(best, used)
            return
        if used + 1 >= best:
            return
        b = 0
        while mask >> b & 1:
            b += 1
        for m in by_bit[b]:
            search(mask | m, used + 1)

    search(0, 0)
    return best


def bounded_geometry_check(window: Window) -> int:
    """Greedy count of generator-set translates covering the product set K*K."""
    if window.radius < 3:
        raise ParameterError("window radius must be at least 3")
    grp = window.group
    gens = window.gens.elements
    kk = set()
    for a in gens:
        for b in gens:
            kk.add(grp.mul(a, b))
    return len(greedy_ball_cover(window, kk, 1))


# ---------------------------------------------------------------------------
# Thin-geodesics diagnostic


def estimate_delta(window: Window, pair_budget: int = 20000, seed: int = 0) -> int:
    """Largest same-index distance between canonical geodesic pairs.

    For endpoints g, h at distance d, indices up to (|g|+|h|-d)/2 are
    compared. All unordered pairs are scanned when they fit the budget;
    otherwise a seeded sample of the budget's size is drawn, making the
    estimate a deterministic lower bound either way. Pairs whose endpoint
    distance is not visible in the window are skipped; a same-index
    distance that escapes the window is counted as R+1.
    """
    grp = window.group
    els = [g for g in window if window.norms[g] > 0]
    n = len(els)
    pairs: Iterable
    if n * (n - 1) // 2 <= pair_budget:
        pairs = ((els[i], els[j]) for i in range(n) for j in range(i + 1, n))
    else:
        rng = random.Random(seed)

        def sampled():
            for _ in range(pair_budget):
                i = rng.randrange(n)
                j = rng.randrange(n)
                if i != j:
                    yield els[i], els[j]

        pairs = sampled()
    geos = {}

    def geo(g):
        cached = geos.get(g)
        if cached is None:
            cached = window.geodesic(g).points
            geos[g] = cached
        return cached

    best = 0
    for g, h in pairs:
        rel = grp.mul(grp.inv(g), h)
        if rel not in window.norms:
            continue
        d = window.norms[rel]
        top = (window.norms[g] + window.norms[h] - d) // 2
        if top <= 0:
            continue
        cg = geo(g)
        ch = geo(h)
        for i in range(1, top + 1):
            y = grp.mul(grp.inv(cg[i]), ch[i])
            val = window.norms.get(y, window.radius + 1)
            if val > best:
                best = val
    return best


def _probe_hyperbolicity(window: Window, radii, pair_budget: int, seed: int, cap: int):
    values = []
    for r in radii:
        probe = build_window(window.group, window.gens, r, cap=cap)
        values.append(estimate_delta(probe, pair_budget, seed))
    increasing = all(values[i] < values[i + 1] for i in range(len(values) - 1))
    return tuple(values), increasing


# ---------------------------------------------------------------------------
# Annulus covers


@dataclass(frozen=True)
class SeparatedNet:
    shell_radius: int  # = 2n
    separation: int  # = 2ps
    points: tuple
    maximal: bool


@dataclass(frozen=True)
class AnnulusCover:
    n: int
    p: int
    s: int
    window: Window
    net: SeparatedNet
    annulus: tuple
    sets: tuple  # sets[i] = elements assigned to net point i, window order
    assignment: dict  # element -> sorted tuple of set indices
    last_exit: dict  # element -> geodesic point at norm 2n


@dataclass(frozen=True)
class CoverStats:
    n: int
    net_size: int
    set_count: int
    max_diameter: int
    diameter_bound: int  # 8ps
    multiplicity: dict  # probe radius -> max set count met by one ball
    n2delta: int
    worst_center: Optional[str]
    passed: bool


def build_annulus_cover(window: Window, n: int, p: int, s: int) -> AnnulusCover:
    """Cover the annulus of norms (2n, 2n+2ps] by last-exit buckets.

    A maximal 2ps-separated net is chosen on the norm-2n sphere in printed
    order; each annulus element g is assigned to every net point within
    2ps of the point where g's canonical geodesic leaves that sphere. Net
    maximality makes the buckets a cover; an unassigned element would be a
    construction bug and raises.
    """
    if p < 1 or s < 1:
        raise ParameterError("p and s must be at least 1")
    ps = p * s
    if n <= ps:
        raise ParameterError(f"need n > p*s, got n={n}, p*s={ps}")
    if 2 * n + 2 * ps > window.radius:
        raise ParameterError(
            f"annulus reaches norm {2 * n + 2 * ps}, window radius is {window.radius}"
        )
    grp = window.group
    shell = window.sphere(2 * n)
    if not shell:
        raise EmptyShellError(f"the norm-{2 * n} sphere is empty; the group is exhausted")
    sep = 2 * ps
    shell_set = set(shell)
    block_ball = window.ball(sep - 1)
    net_points = []
    blocked = set()
    for x in sorted(shell, key=grp.key):
        if x in blocked:
            continue
        net_points.append(x)
        for u in block_ball:
            y = grp.mul(x, u)
            if y in shell_set:
                blocked.add(y)
    net = SeparatedNet(
        shell_radius=2 * n, separation=sep, points=tuple(net_points), maximal=True
    )
    net_index = {x: i for i, x in enumerate(net_points)}
    assign_ball = window.ball(sep)
    annulus = tuple(window.annulus(2 * n, 2 * n + sep))
    near_cache = {}
    assignment = {}
    last_exit = {}
    sets = [[] for _ in net_points]
    for g in annulus:
        rho = window.geodesic(g)[2 * n]
        last_exit[g] = rho
        ids = near_cache.get(rho)
        if ids is None:
            hits = set()
            for u in assign_ball:
                y = grp.mul(rho, u)
                i = net_index.get(y)
                if i is not None:
                    hits.add(i)
            ids = tuple(sorted(hits))
            near_cache[rho] = ids
        if not ids:
            raise CoverVerificationError(
                f"annulus element {grp.show(g)} is not within {sep} of any net point"
            )
        assignment[g] = ids
        for i in ids:
            sets[i].append(g)
    return AnnulusCover(
        n=n,
        p=p,
        s=s,
        window=window,
        net=net,
        annulus=annulus,
        sets=tuple(tuple(v) for v in sets),
        assignment=assignment,
        last_exit=last_exit,
    )


def _pair_distance(window: Window, g, h) -> int:
    """Distance, or R+1 when the relative element escapes the window."""
    rel = window.group.mul(window.group.inv(g), h)
    return window.norms.get(rel, window.radius + 1)


def verify_cover(cover: AnnulusCover, probe_radius: int, n2delta: int) -> CoverStats:
    """Exact diameter and multiplicity scan for one annulus cover.

    Probe balls of each radius up to probe_radius are centered on every
    window element whose norm allows the ball to meet the annulus; the
    multiplicity at a center is how many distinct cover sets the ball
    meets. Passing means max diameter <= 8ps and multiplicity at the top
    probe radius <= n2delta.
    """
    window = cover.window
    grp = window.group
    ps = cover.p * cover.s
    if not 1 <= probe_radius <= ps:
        raise ParameterError(f"probe radius must lie in 1..{ps}")
    max_diam = 0
    for members in cover.sets:
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                d = _pair_distance(window, members[i], members[j])
                if d > max_diam:
                    max_diam = d
    lo = 2 * cover.n
    hi = 2 * cover.n + 2 * ps
    multiplicity = {}
    worst_center = None
    for pr in range(1, probe_radius + 1):
        ball = window.ball(pr)
        best = 0
        best_center = None
        for r_norm in range(max(0, lo + 1 - pr), min(window.radius, hi + pr) + 1):
            for z in window.sphere(r_norm):
                seen = set()
                for u in ball:
                    y = grp.mul(z, u)
                    ids = cover.assignment.get(y)
                    if ids:
                        seen.update(ids)
                if len(seen) > best:
                    best = len(seen)
                    best_center = z
        multiplicity[pr] = best
        if best > n2delta and worst_center is None:
            worst_center = grp.show(best_center)
    passed = max_diam <= 8 * ps and multiplicity[probe_radius] <= n2delta
    if max_diam > 8 * ps and worst_center is None:
        worst_center = "diameter law"
    return CoverStats(
        n=cover.n,
        net_size=len(cover.net.points),
        set_count=len(cover.sets),
        max_diameter=max_diam,
        diameter_bound=8 * ps,
        multiplicity=multiplicity,
        n2delta=n2delta,
        worst_center=worst_center,
        passed=passed,
    )


@dataclass(frozen=True)
class AsdimWitness:
    delta_hat: int
    delta: int
    n2delta: int
    samples: tuple  # CoveringSample at offset 2*delta
    annuli: tuple  # CoverStats per n
    cross_multiplicity: Optional[int]
    bound: int
    p: int
    s: int
    n_list: tuple
    probe_radii: tuple
    probe_values: tuple
    pair_budget: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "delta_hat": self.delta_hat,
            "delta": self.delta,
            "N2delta": self.n2delta,
            "samples": [
                {"S": c.base, "t": c.offset, "N": c.count} for c in self.samples
            ],
            "annuli": [
                {
                    "n": st.n,
                    "net_size": st.net_size,
                    "sets": st.set_count,
                    "max_diameter": st.max_diameter,
                    "max_multiplicity": st.multiplicity[max(st.multiplicity)],
                }
                for st in self.annuli
            ],
            "cross_multiplicity": self.cross_multiplicity,
            "bound": self.bound,
            "p": self.p,
            "s": self.s,
            "n_list": list(self.n_list),
            "probe_radii": list(self.probe_radii),
            "probe_values": list(self.probe_values),
        }


def _cross_multiplicity(cover_a: AnnulusCover, cover_b: AnnulusCover, radius: int) -> int:
    """Max distinct sets from two adjacent annulus covers met by one probe ball."""
    window = cover_a.window
    grp = window.group
    ps = cover_a.p * cover_a.s
    lo = 2 * cover_a.n
    hi = 2 * cover_b.n + 2 * ps
    ball = window.ball(radius)
    best = 0
    for r_norm in range(max(0, lo + 1 - radius), min(window.radius, hi + radius) + 1):
        for z in window.sphere(r_norm):
            seen = set()
            for u in ball:
                y = grp.mul(z, u)
                ids = cover_a.assignment.get(y)
                if ids:
                    seen.update(("a", i) for i in ids)
                ids = cover_b.assignment.get(y)
                if ids:
                    seen.update(("b", i) for i in ids)
            if len(seen) > best:
                best = len(seen)
    return best


def asdim_upper_bound(
    window: Window,
    p: int = 1,
    s: int = 1,
    n_list: Optional[Sequence[int]] = None,
    pair_budget: int = 20000,
    seed: int = 0,
    probe_radii: Sequence[int] = (4, 6, 8),
    cap: int = DEFAULT_CAP,
) -> AsdimWitness:
    """Full asymptotic-dimension witness: bound 2*N - 1 with verified covers.

    Refuses with NonHyperbolicError when the thin-geodesics estimate
    strictly increases across the probe radii. delta is max(delta_hat, 1)
    + 1, the offset is t = 2*delta, and N maximizes the covering number
    over base radii S in [t, min(t+3, R-t)]. Annuli must be spaced by
    exactly p*s so that consecutive pairs are adjacent; each cover is
    verified alone (diameter and multiplicity) and each adjacent pair is
    scanned jointly against the 2N ceiling.
    """
    if p < 1 or s < 1:
        raise ParameterError("p and s must be at least 1")
    ps = p * s
    radius = window.radius
    probe_values, increasing = _probe_hyperbolicity(
        window, tuple(probe_radii), pair_budget, seed, cap
    )
    if increasing and len(probe_radii) >= 2:
        raise NonHyperbolicError(tuple(probe_radii), probe_values)
    delta_hat = estimate_delta(window, pair_budget, seed)
    delta = max(delta_hat, 1) + 1
    t = 2 * delta
    s_hi = min(t + 3, radius - t)
    if s_hi < t:
        raise ParameterError(
            f"window radius {radius} too small to sample covering numbers at offset {t}"
        )
    samples = tuple(
        CoveringSample(base=S, offset=t, count=covering_number(window, S, t))
        for S in range(t, s_hi + 1)
    )
    n2delta = max(c.count for c in samples)
    if n_list is None:
        n_list = list(range(ps + 1, (radius - 2 * ps) // 2 + 1, ps))
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ParameterError("no admissible annulus indices fit the window")
    for n in n_list:
        if n <= ps:
            raise ParameterError(f"annulus index {n} must exceed p*s = {ps}")
        if 2 * n + 2 * ps > radius:
            raise ParameterError(f"annulus index {n} does not fit window radius {radius}")
    for a, b in zip(n_list, n_list[1:]):
        if b - a != ps:
            raise ParameterError(
                f"annulus indices must step by p*s = {ps} to tile; got {a} then {b}"
            )
    covers = [build_annulus_cover(window, n, p, s) for n in n_list]
    stats = []
    for cov in covers:
        st = verify_cover(cov, ps, n2delta)
        if not st.passed:
            raise CoverVerificationError(
                f"annulus n={cov.n} failed verification at {st.worst_center}: "
                f"diameter {st.max_diameter} (bound {st.diameter_bound}), "
                f"multiplicity {st.multiplicity}"
            )
        stats.append(st)
    cross = None
    if len(covers) >= 2:
        cross_radius = ps
        cross = 0
        for cov_a, cov_b in zip(covers, covers[1:]):
            val = _cross_multiplicity(cov_a, cov_b, cross_radius)
            if val > 2 * n2delta:
                raise CoverVerificationError(
                    f"adjacent annuli n={cov_a.n},{cov_b.n} exceed the cross bound: "
                    f"{val} > {2 * n2delta}"
                )
            cross = max(cross, val)
    return AsdimWitness(
        delta_hat=delta_hat,
        delta=delta,
        n2delta=n2delta,
        samples=samples,
        annuli=tuple(stats),
        cross_multiplicity=cross,
        bound=2 * n2delta - 1,
        p=p,
        s=s,
        n_list=tuple(n_list),
        probe_radii=tuple(probe_radii),
        probe_values=tuple(probe_values),
        pair_budget=pair_budget,
        seed=seed,
    )
