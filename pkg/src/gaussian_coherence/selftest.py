"""Randomised invariant sweep behind ``gaussian-coherence selftest``."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import channels as ch
from . import fock
from .coherence import coherence, is_incoherent, mean_photon_numbers
from .core import entropy, symplectic_eigenvalues, tensor
from .states import make_thermal, random_state


def _faithfulness(seed, trials):
    rng = np.random.default_rng(seed)
    for nbar in (0, 0.5, 1, 5, 20):
        if coherence(make_thermal(nbar)).coherence_bits > 1e-10:
            return False, f"thermal({nbar}) has nonzero coherence"
    for _ in range(trials):
        s = random_state(rng, int(rng.integers(1, 3)))
        C = coherence(s).coherence_bits
        if (C <= 1e-10) != is_incoherent(s, 1e-8):
            return False, f"coherence {C:.3g} disagrees with is_incoherent"
    return True, f"{trials} random states"


def _monotonicity(seed, trials):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        m = int(rng.integers(1, 3))
        s = random_state(rng, m)
        channel = ch.random_incoherent_channel(rng, m)
        worst = max(worst, coherence(ch.apply(channel, s)).coherence_bits - coherence(s).coherence_bits)
    return worst <= 1e-9, f"max increase {worst:.3g} bits over {trials} pairs"


def _additivity(seed, trials):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        a, b = random_state(rng, 1), random_state(rng, int(rng.integers(1, 3)))
        gap = coherence(tensor(a, b)).coherence_bits - coherence(a).coherence_bits - coherence(b).coherence_bits
        worst = max(worst, abs(gap))
        gap = entropy(tensor(a, b)) - entropy(a) - entropy(b)
        worst = max(worst, abs(gap))
    return worst <= 1e-10, f"max deviation {worst:.3g} bits"


def _spectrum(seed, trials):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        s = random_state(rng, int(rng.integers(1, 4)))
        prod = np.prod(np.square(symplectic_eigenvalues(s).values))
        worst = max(worst, abs(prod / np.linalg.det(s.V) - 1))
    return worst <= 1e-9, f"max relative |prod nu^2 - det V| {worst:.3g}"


def _oracle(seed, trials):
    rng = np.random.default_rng(seed)
    worst_n = worst_c = 0.0
    done = 0
    while done < trials:
        s = random_state(rng, 1)
        if mean_photon_numbers(s)[0] > 2:
            continue
        fm = fock.fock_matrix(s.V, s.d, 60)
        worst_n = max(worst_n, abs(fock.oracle_mean_photon(fm) - mean_photon_numbers(s)[0]))
        worst_c = max(worst_c, abs(fock.oracle_coherence(fm) - coherence(s).coherence_bits))
        done += 1
    return worst_n <= 1e-6 and worst_c <= 1e-4, f"max |dn| {worst_n:.3g}, max |dC| {worst_c:.3g}"


CHECKS = (
    ("faithfulness", _faithfulness),
    ("monotonicity", _monotonicity),
    ("additivity", _additivity),
    ("symplectic spectrum", _spectrum),
    ("fock oracle", _oracle),
)


def run(seed=0, trials=200, workers=1):
    """Run every check; return a list of ``(name, passed, detail)``."""
    oracle_trials = max(1, trials // 10)

    def one(item):
        k, (name, fn) = item
        n = oracle_trials if name == "fock oracle" else trials
        passed, detail = fn(seed + k, n)
        return name, bool(passed), detail

    items = list(enumerate(CHECKS))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, items))
    return [one(item) for item in items]
