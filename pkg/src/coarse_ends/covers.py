"""Stars, interfaces, and coarsely-clopen certificates on a window.

A scale is a finite symmetric set B containing the identity (typically a
power of the generator set); it stands for the cover of the group by the
translates g*B. The star of A at that scale is A*B^(-1)*B. A set is
coarsely clopen when, at every scale, its star and the star of its
complement overlap only in a bounded region; on a window we measure that
overlap inside a core ball chosen small enough that the answer agrees
with the computation in the full group.

Core discipline: with core radius c <= R - 2*maxnorm(B), deciding whether
a core element lies in a star only consults elements of norm at most
c + 2*maxnorm(B) <= R, so interfaces restricted to the core are exact,
not boundary artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .cayley import DEFAULT_CAP, Window, build_window
from .errors import CoreRadiusError, ParameterError
from .groups import power_generators

__all__ = [
    "InterfaceReport",
    "ScaleEntry",
    "ClopenCertificate",
    "scale_difference_set",
    "star",
    "interface",
    "coarsely_identical",
    "clopen_intersection_law",
    "star_preserves_clopen",
    "clopen_scale_test",
]


@dataclass(frozen=True)
class InterfaceReport:
    """The overlap st(A) meet st(complement of A) inside the core ball.

    rho is the largest norm in the interface, -1 when it is empty. The
    verdict flags "clopen at this scale": the interface stays strictly
    inside the core.
    """

    interface: tuple
    rho: int
    core_radius: int
    scale_maxnorm: int
    verdict: bool


@dataclass(frozen=True)
class ScaleEntry:
    scale_t: int
    rho: int
    core_radius: int
    stable: bool
    verdict: bool


@dataclass(frozen=True)
class ClopenCertificate:
    """Per-scale interface sizes plus the combined clopen-consistency verdict.

    verdict = every scale clopen, every scale stable under window
    enlargement at fixed core, and rho(t) obeying the affine law
    rho(t) <= max(rho(1), 0) + 2*(t-1)*maxnorm(K).
    """

    entries: tuple
    verdict: bool
    affine_ok: bool
    window_radius: int
    enlarged_radius: int
    step_maxnorm: int


def scale_difference_set(group, B) -> set:
    """B^(-1)*B; symmetric, contains the identity, reaches 2*maxnorm(B)."""
    out = set()
    for b in B:
        ib = group.inv(b)
        for c in B:
            out.add(group.mul(ib, c))
    return out


def star(A: Iterable, B: Iterable, window: Window) -> set:
    """(A * B^(-1) * B) truncated to the window.

    Exact inside B(R - 2*maxnorm(B)); beyond that, products falling
    outside the window are dropped rather than reported.
    """
    grp = window.group
    diff = scale_difference_set(grp, B)
    out = set()
    for a in A:
        for u in diff:
            x = grp.mul(a, u)
            if x in window:
                out.add(x)
    return out


def _core_bound(window: Window, scale_maxnorm: int) -> int:
    return window.radius - 2 * scale_maxnorm


def interface(A: Iterable, B: Iterable, window: Window, core_radius: int) -> InterfaceReport:
    """Interface of A versus its window complement, restricted to B(core_radius).

    Membership in either star is tested pointwise: x is in st(A) iff some
    x*u with u in B^(-1)*B lands in A, and in st(complement) iff some such
    product lands in the window outside A. Elements of A outside the
    window never participate, so A is effectively intersected with the
    window first.
    """
    grp = window.group
    mn = window.maxnorm_of(B)
    if core_radius < 0:
        raise ParameterError("core radius must be nonnegative")
    limit = _core_bound(window, mn)
    if core_radius > limit:
        raise CoreRadiusError(
            f"core radius {core_radius} exceeds {limit} = R - 2*maxnorm(B); "
            "star answers there would be boundary artifacts"
        )
    A_set = set(A)
    diff = sorted(scale_difference_set(grp, B), key=grp.key)
    found = []
    for x in window.ball(core_radius):
        in_a = False
        in_c = False
        for u in diff:
            y = grp.mul(x, u)
            if y in A_set:
                in_a = True
            elif y in window:
                in_c = True
            if in_a and in_c:
                found.append(x)
                break
    rho = window.maxnorm_of(found) if found else -1
    return InterfaceReport(
        interface=tuple(found),
        rho=rho,
        core_radius=core_radius,
        scale_maxnorm=mn,
        verdict=rho < core_radius,
    )


def coarsely_identical(A: Iterable, C: Iterable, window: Window) -> int:
    """Largest norm in the symmetric difference of A and C; -1 when equal."""
    diff = set(A) ^ set(C)
    return window.maxnorm_of(diff) if diff else -1


def clopen_intersection_law(A1: Iterable, A2: Iterable, B: Iterable, window: Window, core_radius: int) -> bool:
    """Whether interface(A1 meet A2) lies inside interface(A1) union interface(A2).

    This inclusion is a theorem of the star algebra; the function exists
    as a test hook and should never return False on correct inputs.
    """
    s1 = set(A1)
    s2 = set(A2)
    i_meet = interface(s1 & s2, B, window, core_radius).interface
    i1 = set(interface(s1, B, window, core_radius).interface)
    i2 = set(interface(s2, B, window, core_radius).interface)
    return all(x in i1 or x in i2 for x in i_meet)


def star_preserves_clopen(A: Iterable, B: Iterable, V: Iterable, window: Window, core_radius: int) -> InterfaceReport:
    """Interface report of star(A, B) at scale V.

    For the star to be exact wherever the interface test consults it, the
    core must retreat by both scales: core <= R - 2*maxnorm(V) - 2*maxnorm(B).
    """
    mn_b = window.maxnorm_of(B)
    mn_v = window.maxnorm_of(V)
    limit = window.radius - 2 * mn_v - 2 * mn_b
    if core_radius > limit:
        raise CoreRadiusError(
            f"core radius {core_radius} exceeds {limit} = R - 2*maxnorm(V) - 2*maxnorm(B)"
        )
    return interface(star(A, B, window), V, window, core_radius)


def clopen_scale_test(
    window: Window,
    set_fn: Callable[[Window], Iterable],
    t_max: int,
    enlarge_by: int = 4,
    cap: Optional[int] = None,
    cache_dir: Optional[str] = None,
) -> ClopenCertificate:
    """Interface sizes for scales K^t, t = 1..t_max, with a stability re-run.

    set_fn resolves the candidate set on a given window, so selectors that
    depend on the window (components, half-spaces) re-resolve on the
    enlarged window; a plain set may be passed and is used as-is on both.
    Each scale is re-measured on a window enlarged by enlarge_by at the
    SAME core radius; stable means the two interface sets agree.
    """
    if t_max < 1:
        raise ParameterError("t_max must be at least 1")
    grp = window.group
    gens = window.gens
    step_mn = window.maxnorm_of(g for g in gens.elements)
    scales = {}
    for t in range(1, t_max + 1):
        scales[t] = power_generators(grp, gens, t).elements
        core = _core_bound(window, window.maxnorm_of(scales[t]))
        if core < 0:
            raise CoreRadiusError(
                f"window radius {window.radius} cannot host a core at scale t={t}"
            )
    resolver = set_fn if callable(set_fn) else (lambda w, _frozen=set(set_fn): _frozen)
    big = build_window(
        grp,
        gens,
        window.radius + enlarge_by,
        cap=cap if cap is not None else DEFAULT_CAP,
        cache_dir=cache_dir,
    )
    A_small = set(resolver(window))
    A_big = set(resolver(big))

    entries = []
    rho1 = None
    affine_ok = True
    for t in range(1, t_max + 1):
        B = scales[t]
        core = _core_bound(window, window.maxnorm_of(B))
        rep = interface(A_small, B, window, core)
        rep_big = interface(A_big, B, big, core)
        stable = set(rep.interface) == set(rep_big.interface)
        if t == 1:
            rho1 = rep.rho
        if rep.rho > max(rho1, 0) + 2 * (t - 1) * step_mn:
            affine_ok = False
        entries.append(
            ScaleEntry(
                scale_t=t,
                rho=rep.rho,
                core_radius=core,
                stable=stable,
                verdict=rep.verdict,
            )
        )
    verdict = affine_ok and all(e.verdict and e.stable for e in entries)
    return ClopenCertificate(
        entries=tuple(entries),
        verdict=verdict,
        affine_ok=affine_ok,
        window_radius=window.radius,
        enlarged_radius=big.radius,
        step_maxnorm=step_mn,
    )
