"""Shared fixtures-in-spirit: memoized windows and random element soup."""

import functools

from coarse_ends import (
    Group,
    build_window,
    parse_spec,
    power_generators,
    standard_generators,
)

# the zoo: one representative per supported family plus mixed shapes
ZOO = ["Z", "Z^2", "F2", "C2", "C6", "(Z x C2)", "(C2 * C2)", "(C2 * C3)"]


@functools.lru_cache(maxsize=None)
def get_group(spec_text: str) -> Group:
    return Group(parse_spec(spec_text))


@functools.lru_cache(maxsize=None)
def get_gens(spec_text: str, power: int = 1):
    group = get_group(spec_text)
    gens = standard_generators(group)
    if power > 1:
        gens = power_generators(group, gens, power)
    return gens


@functools.lru_cache(maxsize=None)
def get_window(spec_text: str, radius: int, power: int = 1):
    return build_window(get_group(spec_text), get_gens(spec_text, power), radius)


def random_element(group: Group, rng, max_len: int = 6):
    """Random product of at most max_len standard generators."""
    gens = sorted(standard_generators(group).elements, key=group.key)
    x = group.identity
    for _ in range(rng.randrange(max_len + 1)):
        x = group.mul(x, rng.choice(gens))
    return x


def random_subset(window, rng, density: float = 0.4):
    return {g for g in window if rng.random() < density}
