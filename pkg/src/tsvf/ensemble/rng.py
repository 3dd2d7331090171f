"""Counter-based random streams for trial-level reproducibility.

Trial ``i`` under master seed ``s`` gets its own splitmix64 stream whose
starting state is a fixed mix of ``(s, i)``. Results therefore depend only
on the trial index, never on which worker ran the trial or in what order.
The compiled kernel and the numpy fallback implement the same arithmetic;
:func:`trial_uniforms` is the scalar reference both are tested against.
"""
from __future__ import annotations

from dataclasses import dataclass

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
TRIAL_MULT = 0xD1B54A32D192ED03
M1 = 0xBF58476D1CE4E5B9
M2 = 0x94D049BB133111EB
DRAWS_PER_TRIAL = 2


def mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * M1) & MASK64
    z = ((z ^ (z >> 27)) * M2) & MASK64
    return z ^ (z >> 31)


def seed_key(master_seed: int) -> int:
    return mix64((master_seed & MASK64) + GOLDEN)


def trial_state(key: int, trial_index: int) -> int:
    return mix64(key ^ ((trial_index * TRIAL_MULT) & MASK64))


def to_unit(x: int) -> float:
    return (x >> 11) * 2.0 ** -53


def trial_uniforms(master_seed: int, trial_index: int,
                   n: int = DRAWS_PER_TRIAL) -> list[float]:
    state = trial_state(seed_key(master_seed), trial_index)
    out = []
    for _ in range(n):
        state = (state + GOLDEN) & MASK64
        out.append(to_unit(mix64(state)))
    return out


@dataclass(frozen=True)
class RngPolicy:
    master_seed: int

    def __post_init__(self):
        if int(self.master_seed) < 0:
            raise ValueError("master_seed must be a non-negative integer")
        object.__setattr__(self, "master_seed", int(self.master_seed))

    @property
    def key(self) -> int:
        return seed_key(self.master_seed)
