"""Graded computation of the tau expansion.

The degree-j piece satisfies j * tau_j = sum_l A_l tau_{j-l} over the
degree raisers l = 1 .. r-1, starting from tau_0 = 1, so the pieces are
computed bottom-up.  Within one degree the (l, k, m) contributions are
independent; they may be evaluated on a thread pool and are reduced in a
fixed key order, so the result is identical for every worker count.

An optional cache stores finished pieces keyed by (r, degree); cache
entries are validated on load and a corrupt or version-mismatched entry
raises instead of being recomputed silently.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol

from .errors import CacheError, ContractError
from .tpoly import TPolynomial
from .walgebra import apply_raising_operator, mode_bound, raising_contribution

__all__ = [
    "TauExpansion",
    "compute_tau",
    "compute_tau_exponential",
    "mode_bound",
]


class PieceStore(Protocol):
    def load(self, r: int, degree: int) -> TPolynomial | None: ...

    def store(self, r: int, degree: int, piece: TPolynomial) -> None: ...


@dataclass
class TauExpansion:
    """Graded pieces tau_0 .. tau_D of the partition function for one r."""

    r: int
    max_degree: int
    pieces: list[TPolynomial] = field(default_factory=list)

    def piece(self, j: int) -> TPolynomial:
        """Degree-j piece; zero outside the computed range."""
        if 0 <= j <= self.max_degree:
            return self.pieces[j]
        return TPolynomial.zero(self.r)

    def validate(self) -> None:
        """Check the structural invariants of a well-formed expansion."""
        if self.max_degree < 0:
            raise ContractError("max_degree must be nonnegative")
        if len(self.pieces) != self.max_degree + 1:
            raise ContractError(
                f"expected {self.max_degree + 1} pieces, found {len(self.pieces)}"
            )
        if self.pieces[0] != TPolynomial.one(self.r):
            raise ContractError("degree-0 piece must equal 1")
        for j, piece in enumerate(self.pieces):
            if piece.r != self.r:
                raise ContractError(f"piece {j} built over r={piece.r}, expected {self.r}")
            if not piece.is_homogeneous(j * (self.r + 1)):
                raise ContractError(f"piece {j} is not homogeneous of weight {j * (self.r + 1)}")
            for exp in piece.lambda_exponents():
                if exp % 2 or exp < -2 * j:
                    raise ContractError(
                        f"piece {j} carries lam exponent {exp}; expected even and >= {-2 * j}"
                    )


def _degree_tasks(r: int, j: int) -> list[tuple[int, int, int]]:
    tasks = []
    for l in range(1, min(r - 1, j) + 1):
        for k in range(l + 1, r + 1):
            for m in range(0, mode_bound(r, k, j) + 1):
                tasks.append((l, k, m))
    return tasks


def _next_piece(r: int, j: int, pieces: list[TPolynomial], workers: int) -> TPolynomial:
    tasks = _degree_tasks(r, j)

    def run(task: tuple[int, int, int]) -> TPolynomial:
        l, k, m = task
        return raising_contribution(r, l, k, m, pieces[j - l], j)

    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    total = TPolynomial.sum_of(r, results)
    return total.scaled(Fraction(1, j))


def compute_tau(r: int, max_degree: int, cache: PieceStore | None = None, workers: int = 1) -> TauExpansion:
    """Compute the graded pieces up to max_degree by the degree recursion.

    Exact rational/quadratic arithmetic throughout; the output is
    deterministic (byte-identical canonical serialization) regardless of
    worker count or cache hits.
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    pieces = [TPolynomial.one(r)]
    for j in range(1, max_degree + 1):
        piece = cache.load(r, j) if cache is not None else None
        if piece is not None:
            if piece.r != r or not piece.is_homogeneous(j * (r + 1)):
                raise CacheError(f"cached piece for r={r} degree={j} fails homogeneity")
        else:
            piece = _next_piece(r, j, pieces, workers)
            if cache is not None:
                cache.store(r, j, piece)
        pieces.append(piece)
    tau = TauExpansion(r, max_degree, pieces)
    tau.validate()
    return tau


def compute_tau_exponential(r: int, max_degree: int) -> TauExpansion:
    """Graded truncation of exp(sum_l A_l / l) applied to 1.

    Agrees with compute_tau exactly when the raisers commute; the solver
    treats any disagreement as evidence against that conjecture, so this
    path is a diagnostic, never the authority.
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    zero = TPolynomial.zero(r)
    acc: dict[int, TPolynomial] = {0: TPolynomial.one(r)}
    power: dict[int, TPolynomial] = {0: TPolynomial.one(r)}
    # power holds B^n/n! . 1 by degree, B = sum_l A_l / l; its lowest degree
    # is n, so n ranges over 1 .. max_degree only.
    for n in range(1, max_degree + 1):
        nxt: dict[int, TPolynomial] = {}
        for d, poly in power.items():
            if poly.is_zero:
                continue
            for l in range(1, r):
                target = d + l
                if target > max_degree:
                    continue
                contrib = apply_raising_operator(r, l, poly, target).scaled(Fraction(1, l))
                nxt[target] = nxt.get(target, zero) + contrib
        power = {d: p.scaled(Fraction(1, n)) for d, p in nxt.items() if not p.is_zero}
        for d, p in power.items():
            acc[d] = acc.get(d, zero) + p
    pieces = [acc.get(j, zero) for j in range(max_degree + 1)]
    tau = TauExpansion(r, max_degree, pieces)
    tau.validate()
    return tau
