"""Example-driven program synthesis over tree automata with abstraction
refinement, plus concrete-automaton and enumerative baselines."""

__version__ = "0.1.0"
