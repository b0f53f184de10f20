"""Global numerical configuration, always passed explicitly."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class Config:
    """Working precision of the series arithmetic.

    ``order`` is the working tail order Q: truncating operations keep only the
    terms with exponent below it and mark everything above as unknown.
    """

    order: Fraction = field(default_factory=lambda: Fraction(40))
    tol: float = 1e-12  # coefficient equality / cancellation
    witness_tol: float = 1e-10  # probe: smallest coefficient counted as nonzero
    negligible: float = 1e-300  # numeric values below this count as zero
    quad_tol: float = 1e-12
    quad_max_depth: int = 30

    def __post_init__(self):
        object.__setattr__(self, "order", Fraction(self.order))
        if self.order <= 0:
            raise ValueError("working order must be positive")

    def with_order(self, order) -> "Config":
        return Config(
            order=Fraction(order),
            tol=self.tol,
            witness_tol=self.witness_tol,
            negligible=self.negligible,
            quad_tol=self.quad_tol,
            quad_max_depth=self.quad_max_depth,
        )

    def as_dict(self) -> dict:
        d = asdict(self)
        d["order"] = str(self.order)
        return d


DEFAULT = Config()
