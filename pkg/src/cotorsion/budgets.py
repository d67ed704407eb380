"""Search budgets and the Undecided verdict.

Every bounded search in the library is driven by one Budget value, so a
run is reproducible from (inputs, budget).  Undecided is a first-class
outcome: a check that exhausts its budget reports UNDECIDED instead of
guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


class _Undecided:
    """Singleton verdict for searches that exhausted their budget."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDECIDED"

    def __bool__(self) -> bool:
        raise TypeError("UNDECIDED has no truth value; compare with `is UNDECIDED`")


UNDECIDED = _Undecided()


def is_decided(v) -> bool:
    return v is not UNDECIDED


@dataclass(frozen=True)
class Budget:
    """Caps for the bounded decision procedures.

    enum_cap: max coefficient tuples a full enumeration may visit.
    samples: random combinations tried when enumeration is too large.
    seed: base seed; all sampling derives from it deterministically.
    m_max: max multiplicity of a generator in approximation searches.
    sum_cap: max number of summands in pool objects.
    n_random: random morphisms added per Hom space in the pool.
    path_length_bound: admissibility bound for path basis construction.
    resolution_length: default truncation for projective resolutions.
    weq_w_cap / weq_t_cap: candidate caps in the weak-equivalence search.
    triple_cap / square_cap / retract_cap: verifier enumeration caps.
    completeness_cap: candidate middle terms per object in completeness search.
    """

    enum_cap: int = 2**20
    samples: int = 64
    seed: int = 0
    m_max: int = 3
    sum_cap: int = 2
    n_random: int = 16
    path_length_bound: int = 16
    resolution_length: int = 8
    weq_w_cap: int = 64
    weq_t_cap: int = 256
    triple_cap: int = 10**6
    square_cap: int = 50_000
    retract_cap: int = 200_000
    completeness_cap: int = 512

    def with_overrides(self, **kwargs) -> "Budget":
        return replace(self, **kwargs)
