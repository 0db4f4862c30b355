"""Shared helpers: random family generation and certificate mutation."""

from __future__ import annotations

import random

from bottcert import FormalProjection


def random_family(rng: random.Random, max_terms: int = 8, max_coord: int = 10,
                  max_size: int = 4, max_mult: int = 3) -> FormalProjection:
    """A random line-bundle sum within the given size envelope."""
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        size = rng.randint(0, max_size)
        coords = rng.sample(range(1, max_coord + 1), min(size, max_coord))
        terms.append((tuple(coords), rng.randint(1, max_mult)))
    return FormalProjection(terms)


def scalar_paths(node, prefix=()):
    """Yield ``(path, value)`` for every scalar leaf of a JSON-style tree."""
    if isinstance(node, dict):
        for key, value in node.items():
            yield from scalar_paths(value, prefix + (key,))
    elif isinstance(node, list):
        for idx, value in enumerate(node):
            yield from scalar_paths(value, prefix + (idx,))
    else:
        yield prefix, node


def mutate_scalar(value, rng: random.Random):
    """A same-type value guaranteed to differ from ``value``."""
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value + rng.choice((-1, 1, 7))
    if isinstance(value, str):
        if value.isdigit():
            pos = rng.randrange(len(value))
            old = value[pos]
            new = str((int(old) + rng.randint(1, 9)) % 10)
            mutated = value[:pos] + new + value[pos + 1:]
            if mutated != value:
                return mutated
            return value + "1"
        pos = rng.randrange(len(value)) if value else 0
        return value[:pos] + "~" + value[pos + 1:] if value else "~"
    raise TypeError(f"no mutation rule for {type(value)!r}")


def set_path(tree, path, value):
    """Return a deep copy of ``tree`` with the leaf at ``path`` replaced."""
    if not path:
        return value
    head, rest = path[0], path[1:]
    if isinstance(tree, dict):
        copy = dict(tree)
    else:
        copy = list(tree)
    copy[head] = set_path(copy[head], rest, value)
    return copy
