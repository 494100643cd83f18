"""Compare the compiled and pure-Python ranking kernels.

Builds concrete automata of growing size and times the label pass
(`solve`) under both backends on identical encoded inputs, asserting
that the labels agree.  Run from the repo root:

    python3 benchmarks/bench_ranking.py
"""

from __future__ import annotations

import time

from absynth import _bpath_py as pure
from absynth import ranking
from absynth.domains import get_domain
from absynth.fta import construct_cfta
from absynth.grammar import Example

try:
    from absynth import _bpath as compiled
except ImportError:
    compiled = None

CASES = [
    ("toy size 12", "toy", [Example(1, 9)], 12),
    ("toy size 16", "toy", [Example(1, 9)], 16),
    ("string size 8", "string",
     [Example("John Smith", "John"), Example("Alan Turing", "Alan")], 8),
    ("string size 10", "string",
     [Example("John Smith", "John"), Example("Alan Turing", "Alan")], 10),
]


def bench(backend, n_states, enc, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = backend.solve(n_states, *enc)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    if compiled is None:
        print("compiled kernel not built; showing pure-Python timings only")
    print(f"active backend in absynth.ranking: {ranking.BACKEND}")
    print()
    header = f"{'case':<16} {'|Q|':>7} {'|D|':>8} {'pure (ms)':>10}"
    if compiled is not None:
        header += f" {'compiled (ms)':>14} {'speedup':>8}"
    print(header)
    for label, domain_name, examples, max_size in CASES:
        domain = get_domain(domain_name, examples)
        fta = construct_cfta(examples, domain.grammar, max_size, domain)
        enc = ranking._encode(fta, domain.cost_model())
        repeat = 5 if fta.num_states < 50_000 else 2
        t_pure, r_pure = bench(pure, fta.num_states, enc, repeat)
        row = (
            f"{label:<16} {fta.num_states:>7} {fta.num_transitions:>8}"
            f" {t_pure * 1000:>10.2f}"
        )
        if compiled is not None:
            t_comp, r_comp = bench(compiled, fta.num_states, enc, repeat)
            assert list(r_pure[0]) == list(r_comp[0]), f"cost mismatch: {label}"
            assert list(r_pure[1]) == list(r_comp[1]), f"node mismatch: {label}"
            row += f" {t_comp * 1000:>14.2f} {t_pure / t_comp:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
