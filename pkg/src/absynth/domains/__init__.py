"""DSL instantiations and the domain registry."""

from .base import Domain


def get_domain(name: str, examples) -> Domain:
    if name == "toy":
        from .toy import ToyDomain

        return ToyDomain.for_examples(examples)
    if name == "string":
        from .strings import StringDomain

        return StringDomain.for_examples(examples)
    if name == "matrix":
        from .matrix import MatrixDomain

        return MatrixDomain.for_examples(examples)
    raise ValueError(f"unknown domain {name!r}")
