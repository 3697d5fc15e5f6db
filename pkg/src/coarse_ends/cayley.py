"""Finite windows of Cayley graphs: balls, spheres, norms, geodesics.

A Window is the ball of a chosen radius around the identity in the Cayley
graph of a group with respect to a finite symmetric generator set. All
later computations are exact inside the window and refuse to answer
outside it; growing the radius is the only way to learn more.

Element order is pinned everywhere: the window enumerates elements sphere
by sphere in breadth-first insertion order, and the search expands each
sphere's elements in order against the generator steps sorted by printed
form. Two builds with the same spec, generators, and radius therefore
produce identical element sequences, which keeps every downstream report
byte-stable.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import OutOfWindowError, WindowCapError
from .groups import GeneratorSet, Group, spec_to_string

__all__ = ["Window", "Geodesic", "build_window", "window_cache_key"]

DEFAULT_CAP = 5_000_000
_CACHE_SCHEMA = "coarse-ends.window/1"


@dataclass(frozen=True)
class Geodesic:
    """A geodesic from the identity; points[i] has norm i."""

    points: tuple

    @property
    def length(self) -> int:
        return len(self.points) - 1

    @property
    def endpoint(self):
        return self.points[-1]

    def __iter__(self) -> Iterator:
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]


@dataclass
class Window:
    """A radius-R ball with norms, sphere lists, and canonical geodesics."""

    group: Group
    gens: GeneratorSet
    radius: int
    norms: dict
    spheres: tuple  # spheres[r] = tuple of elements of norm r, build order
    steps: tuple  # non-identity generators, sorted by printed form
    _pred: dict = field(default_factory=dict, repr=False)

    def __contains__(self, g) -> bool:
        return g in self.norms

    def __len__(self) -> int:
        return len(self.norms)

    def __iter__(self) -> Iterator:
        """All elements in window order (sphere by sphere, build order)."""
        for sph in self.spheres:
            yield from sph

    @property
    def elements(self) -> list:
        return list(self)

    def knorm(self, g) -> int:
        """Word norm of g relative to the generator set."""
        try:
            return self.norms[g]
        except KeyError:
            raise OutOfWindowError(
                f"element {self.group.show(g)} lies outside the radius-{self.radius} window"
            ) from None

    def distance(self, g, h) -> int:
        """Left-invariant word metric; defined when inv(g)*h is in the window."""
        return self.knorm(self.group.mul(self.group.inv(g), h))

    def sphere(self, r: int) -> tuple:
        if not 0 <= r <= self.radius:
            raise OutOfWindowError(f"sphere radius {r} outside window radius {self.radius}")
        return self.spheres[r]

    def ball(self, r: int) -> list:
        if not 0 <= r <= self.radius:
            raise OutOfWindowError(f"ball radius {r} outside window radius {self.radius}")
        out = []
        for sph in self.spheres[: r + 1]:
            out.extend(sph)
        return out

    def annulus(self, lo: int, hi: int) -> list:
        """Elements g with lo < |g| <= hi, in window order."""
        if lo > hi:
            raise ValueError(f"empty annulus bounds ({lo}, {hi}]")
        if not 0 <= hi <= self.radius:
            raise OutOfWindowError(f"annulus reach {hi} outside window radius {self.radius}")
        out = []
        for r in range(max(lo + 1, 0), hi + 1):
            out.extend(self.spheres[r])
        return out

    def maxnorm_of(self, items) -> int:
        """Largest norm over items; 0 for an empty collection."""
        best = 0
        for g in items:
            n = self.knorm(g)
            if n > best:
                best = n
        return best

    def predecessor(self, g):
        """Canonical predecessor: the least-printed p at norm |g|-1 with
        p*s = g for a generator step s."""
        if g not in self.norms:
            raise OutOfWindowError(
                f"element {self.group.show(g)} lies outside the radius-{self.radius} window"
            )
        if g in self._pred:
            return self._pred[g]
        r = self.norms[g]
        if r == 0:
            raise ValueError("the identity has no predecessor")
        grp = self.group
        best = None
        best_key = None
        for s in self.steps:
            p = grp.mul(g, grp.inv(s))
            if self.norms.get(p) == r - 1:
                k = grp.key(p)
                if best_key is None or k < best_key:
                    best, best_key = p, k
        self._pred[g] = best
        return best

    def geodesic(self, g) -> Geodesic:
        """The canonical geodesic from the identity to g (least-predecessor walk)."""
        self.knorm(g)  # membership check
        points = [g]
        cur = g
        while self.norms[cur] > 0:
            cur = self.predecessor(cur)
            points.append(cur)
        points.reverse()
        return Geodesic(tuple(points))


def window_cache_key(group: Group, gens: GeneratorSet, radius: int) -> str:
    """Stable digest identifying a window build."""
    payload = {
        "schema": _CACHE_SCHEMA,
        "spec": spec_to_string(group.spec),
        "gens": sorted(group.show(g) for g in gens.elements),
        "radius": radius,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def _cache_path(cache_dir: str, key: str) -> str:
    return os.path.join(cache_dir, f"window-{key}.json.gz")


def _load_cached(path: str, group: Group) -> Optional[list]:
    try:
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError):
        return None
    if data.get("schema") != _CACHE_SCHEMA:
        return None
    return [[group.parse(s) for s in sph] for sph in data["spheres"]]


def _store_cached(path: str, group: Group, gens: GeneratorSet, radius: int, spheres) -> None:
    data = {
        "schema": _CACHE_SCHEMA,
        "spec": spec_to_string(group.spec),
        "gens": sorted(group.show(g) for g in gens.elements),
        "radius": radius,
        "spheres": [[group.show(g) for g in sph] for sph in spheres],
    }
    tmp = path + ".tmp"
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with gzip.open(tmp, "wt", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)


def build_window(
    group: Group,
    gens: GeneratorSet,
    radius: int,
    cap: int = DEFAULT_CAP,
    cache_dir: Optional[str] = None,
) -> Window:
    """Enumerate the ball of the given radius by breadth-first search.

    Raises WindowCapError as soon as the element count would exceed cap,
    reporting the last fully enumerated radius. With cache_dir set, sphere
    lists are stored gzip-compressed and reloaded verbatim, so warm and
    cold builds yield identical windows.
    """
    if radius < 0:
        raise ValueError("window radius must be nonnegative")
    steps = tuple(
        sorted((g for g in gens.elements if g != group.identity), key=group.key)
    )

    spheres_payload = None
    cache_file = None
    if cache_dir is not None:
        cache_file = _cache_path(cache_dir, window_cache_key(group, gens, radius))
        spheres_payload = _load_cached(cache_file, group)

    if spheres_payload is None:
        spheres_payload = [[group.identity]]
        norms = {group.identity: 0}
        for r in range(1, radius + 1):
            nxt = []
            for p in spheres_payload[r - 1]:
                for s in steps:
                    q = group.mul(p, s)
                    if q not in norms:
                        norms[q] = r
                        nxt.append(q)
                        if len(norms) > cap:
                            raise WindowCapError(cap, r - 1)
            spheres_payload.append(nxt)
        if cache_file is not None:
            _store_cached(cache_file, group, gens, radius, spheres_payload)
    else:
        norms = {}
        for r, sph in enumerate(spheres_payload):
            for g in sph:
                norms[g] = r
        if len(norms) > cap:
            raise WindowCapError(cap, radius)

    return Window(
        group=group,
        gens=gens,
        radius=radius,
        norms=norms,
        spheres=tuple(tuple(sph) for sph in spheres_payload),
        steps=steps,
    )
