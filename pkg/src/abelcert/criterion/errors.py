"""Failure types of the certification pipeline."""


class PreconditionFailed(Exception):
    """An input violates a hypothesis; ``fact`` names the violated statement."""

    def __init__(self, fact: str, detail: str = ""):
        self.fact = fact
        self.detail = detail
        super().__init__(f"{fact}" + (f": {detail}" if detail else ""))


class PujaInapplicable(PreconditionFailed):
    """F/A' is not analytic at 0, so the y-power raising step cannot be used."""


class UnsupportedB(PreconditionFailed):
    """B^e is neither rational nor of the form beta*(x+c)^k."""
