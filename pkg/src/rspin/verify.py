"""Exact verification of every identity the computed expansion must satisfy.

All pass/fail checks compare polynomials to the exact zero polynomial;
there are no tolerances anywhere.  The commutator check is diagnostic
only: commutativity of the degree raisers is conjectural, so a nonzero
residual there is reported prominently but fails nothing.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .correlator import (
    CorrelatorRecord,
    Insertion,
    extract_correlators,
    selection_check,
)
from .solver import TauExpansion, compute_tau, compute_tau_exponential
from .tpoly import TPolynomial
from .walgebra import WModeSpec, apply_raising_operator, apply_w_mode

__all__ = [
    "CheckReport",
    "check_commutators",
    "check_exponential_agreement",
    "check_gradings",
    "check_selection",
    "check_string_dilaton",
    "check_w_constraints",
    "default_constraint_mode_bound",
    "w_constraint_residual",
]

PASS = "pass"
FAIL = "fail"
DIAGNOSTIC = "diagnostic"


@dataclass
class CheckReport:
    check_name: str
    status: str
    residuals: list[tuple[str, TPolynomial]] = field(default_factory=list)
    timing_ms: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL


class _Timer:
    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self._start) * 1000.0
        return False


def default_constraint_mode_bound(r: int, max_degree: int) -> int:
    """Largest outer index whose per-degree constraint still touches a
    computed piece; beyond it every equation is vacuous at this depth."""
    return (max_degree * (r + 1)) // r


def w_constraint_residual(tau: TauExpansion, k: int, m: int, degree: int) -> tuple[TPolynomial, bool]:
    """Residual of one per-degree constraint equation.

    Returns (residual, engaged); engaged is False when every contributing
    piece is absent or zero, i.e. the equation is vacuous at this depth.
    """
    r = tau.r
    total = TPolynomial.zero(r)
    engaged = False
    for l in range(k):
        idx = degree - k + 1 + l
        if idx < 0 or idx > tau.max_degree:
            continue
        piece = tau.pieces[idx]
        if piece.is_zero:
            continue
        cap = piece.max_weight() - r * m - l * (r + 1)
        term = apply_w_mode(WModeSpec(r, k, l, m), piece, cap)
        engaged = True
        total = total + term
    return total, engaged


def check_w_constraints(tau: TauExpansion, m_max: int | None = None) -> CheckReport:
    """Assemble every per-degree constraint equation and record nonzero
    residuals; vacuous equations are counted but cannot fail."""
    r = tau.r
    if m_max is None:
        m_max = default_constraint_mode_bound(r, tau.max_degree)
    residuals = []
    checked = vacuous = 0
    with _Timer() as t:
        for k in range(2, r + 1):
            for m in range(-(k - 1), m_max + 1):
                for degree in range(tau.max_degree + 1):
                    residual, engaged = w_constraint_residual(tau, k, m, degree)
                    checked += 1
                    if not engaged:
                        vacuous += 1
                    if not residual.is_zero:
                        residuals.append((f"k={k} m={m} degree={degree}", residual))
    return CheckReport(
        check_name="wconstraints",
        status=PASS if not residuals else FAIL,
        residuals=residuals,
        timing_ms=t.ms,
        details={"equations": checked, "vacuous": vacuous, "m_max": m_max},
    )


def _string_dilaton_operator_residuals(tau: TauExpansion) -> list[tuple[str, TPolynomial]]:
    """Lowest two constraint modes, scaled by 1/r: the translation and
    scaling operators annihilate tau degree by degree."""
    r = tau.r
    out = []
    scale = Fraction(1, r)
    for m, name in ((-1, "translation"), (0, "scaling")):
        for degree in range(tau.max_degree + 1):
            residual, _ = w_constraint_residual(tau, 2, m, degree)
            residual = residual.scaled(scale)
            if not residual.is_zero:
                out.append((f"{name} operator degree={degree}", residual))
    return out


def _record_table(records: list[CorrelatorRecord]) -> dict[tuple[int, tuple[Insertion, ...]], Fraction]:
    return {(rec.genus, rec.insertions): rec.value for rec in records}


def _with_insertion(insertions: tuple[Insertion, ...], extra: Insertion) -> tuple[Insertion, ...]:
    return tuple(sorted(insertions + (extra,)))


def _without_one(insertions: tuple[Insertion, ...], which: Insertion) -> tuple[Insertion, ...]:
    out = list(insertions)
    out.remove(which)
    return tuple(out)


def _string_rhs(table, genus: int, rest: tuple[Insertion, ...]) -> Fraction:
    total = Fraction(0)
    for ins, count in Counter(rest).items():
        if ins.m == 0:
            continue
        lowered = _without_one(rest, ins) + (Insertion(ins.m - 1, ins.a),)
        total += count * table.get((genus, tuple(sorted(lowered))), Fraction(0))
    return total


def _correlator_identity_residuals(tau: TauExpansion) -> tuple[list[tuple[str, TPolynomial]], dict]:
    """Combinatorial string/dilaton identities on the extracted table.

    Works both ways: every record containing the special insertion is
    reduced, and every record is re-dressed with the special insertion when
    the dressed side is still within the computed range.  Absent entries
    count as zero.  Instances whose reduced correlator is unstable
    (2g - 2 + n <= 0) carry no content and are skipped.
    """
    r = tau.r
    try:
        records = extract_correlators(tau)
    except Exception as exc:  # tampered input: report, never crash
        residual = TPolynomial.one(r)
        return [(f"extraction: {exc}", residual)], {"records": 0}
    table = _record_table(records)
    string_ins = Insertion(0, 0)
    dilaton_ins = Insertion(1, 0)
    residuals = []
    string_instances = dilaton_instances = 0

    def emit(label: str, lhs: Fraction, rhs: Fraction):
        if lhs != rhs:
            diff = TPolynomial.const(r, lhs - rhs)
            residuals.append((label, diff))

    seen: set[tuple[str, int, tuple[Insertion, ...]]] = set()

    def string_instance(genus: int, rest: tuple[Insertion, ...]):
        nonlocal string_instances
        if 2 * genus - 2 + len(rest) <= 0:
            return
        key = ("s", genus, rest)
        if key in seen:
            return
        seen.add(key)
        string_instances += 1
        lhs = table.get((genus, _with_insertion(rest, string_ins)), Fraction(0))
        emit(f"string g={genus} {rest}", lhs, _string_rhs(table, genus, rest))

    def dilaton_instance(genus: int, rest: tuple[Insertion, ...]):
        nonlocal dilaton_instances
        n = len(rest)
        if 2 * genus - 2 + n <= 0:
            return
        key = ("d", genus, rest)
        if key in seen:
            return
        seen.add(key)
        dilaton_instances += 1
        lhs = table.get((genus, _with_insertion(rest, dilaton_ins)), Fraction(0))
        rhs = (2 * genus - 2 + n) * table.get((genus, rest), Fraction(0))
        emit(f"dilaton g={genus} {rest}", lhs, rhs)

    max_dressed_degree = tau.max_degree
    for rec in records:
        # Degree of a record equals 2g - 2 + n; dressing adds one.
        degree = 2 * rec.genus - 2 + len(rec.insertions)
        if string_ins in rec.insertions:
            string_instance(rec.genus, _without_one(rec.insertions, string_ins))
        if dilaton_ins in rec.insertions:
            dilaton_instance(rec.genus, _without_one(rec.insertions, dilaton_ins))
        if degree + 1 <= max_dressed_degree:
            string_instance(rec.genus, rec.insertions)
            dilaton_instance(rec.genus, rec.insertions)
    stats = {
        "records": len(records),
        "string_instances": string_instances,
        "dilaton_instances": dilaton_instances,
    }
    return residuals, stats


def check_string_dilaton(tau: TauExpansion) -> CheckReport:
    """Translation/scaling operator identities plus the combinatorial
    string and dilaton equations on extracted correlators."""
    with _Timer() as t:
        residuals = _string_dilaton_operator_residuals(tau)
        identity_residuals, stats = _correlator_identity_residuals(tau)
        residuals.extend(identity_residuals)
    return CheckReport(
        check_name="string_dilaton",
        status=PASS if not residuals else FAIL,
        residuals=residuals,
        timing_ms=t.ms,
        details=stats,
    )


def check_gradings(tau: TauExpansion) -> CheckReport:
    """Weight homogeneity, Euler eigenvalues, lam-exponent parity and genus
    bounds, and the selection rule on every extracted correlator."""
    r = tau.r
    residuals = []
    details: dict = {}
    with _Timer() as t:
        for j, piece in enumerate(tau.pieces):
            target = j * (r + 1)
            off_grade = TPolynomial._raw(
                r, {m: c for m, c in piece.terms.items() if m.weight != target}
            )
            if not off_grade.is_zero:
                residuals.append((f"inhomogeneous degree={j}", off_grade))
            euler_residual = piece.euler() - piece.scaled(j)
            if not euler_residual.is_zero:
                residuals.append((f"euler degree={j}", euler_residual))
            bad_lambda = TPolynomial._raw(
                r,
                {
                    m: c
                    for m, c in piece.terms.items()
                    if m.lambda_exp % 2 or m.lambda_exp < -2 * j
                },
            )
            if not bad_lambda.is_zero:
                residuals.append((f"lam exponents degree={j}", bad_lambda))
        try:
            records = extract_correlators(tau)
        except Exception as exc:  # extraction failure is a grading failure
            residuals.append((f"extraction: {exc}", TPolynomial.one(r)))
            records = []
        bad_selection = sum(
            1 for rec in records if not selection_check(r, rec.genus, rec.insertions)
        )
        bad_genus = sum(1 for rec in records if rec.genus < 0)
        if bad_selection:
            residuals.append((f"{bad_selection} records fail selection", TPolynomial.one(r)))
        if bad_genus:
            residuals.append((f"{bad_genus} records have negative genus", TPolynomial.one(r)))
        details["records"] = len(records)
    return CheckReport(
        check_name="grading",
        status=PASS if not residuals else FAIL,
        residuals=residuals,
        timing_ms=t.ms,
        details=details,
    )


def check_selection(tau: TauExpansion) -> CheckReport:
    """Selection rule and rationality on every extracted correlator."""
    r = tau.r
    residuals = []
    count = 0
    with _Timer() as t:
        try:
            records = extract_correlators(tau)
            count = len(records)
            for rec in records:
                if not selection_check(r, rec.genus, rec.insertions):
                    label = f"g={rec.genus} {[(i.m, i.a) for i in rec.insertions]}"
                    residuals.append((label, TPolynomial.const(r, rec.value)))
        except Exception as exc:
            residuals.append((f"extraction: {exc}", TPolynomial.one(r)))
    return CheckReport(
        check_name="selection",
        status=PASS if not residuals else FAIL,
        residuals=residuals,
        timing_ms=t.ms,
        details={"records": count},
    )


def check_commutators(r: int, degree: int, tau: TauExpansion | None = None) -> CheckReport:
    """Measure [A_i, A_j] on computed pieces; diagnostic, never gating.

    Instances are all (i < j, base degree d) with d + i + j <= degree.  If
    the budget admits none (and r > 2), the minimal instances on the
    constant piece are measured instead so the diagnostic always reports
    something.
    """
    instances = [
        (i, j, d)
        for i in range(1, r)
        for j in range(i + 1, r)
        for d in range(0, max(degree - i - j, -1) + 1)
    ]
    fallback = not instances and r >= 3
    if fallback:
        instances = [(i, j, 0) for i in range(1, r) for j in range(i + 1, r)]
    max_base = max((d for _, _, d in instances), default=0)
    with _Timer() as t:
        if tau is None or tau.max_degree < max_base:
            tau = compute_tau(r, max_base)
        residuals = []
        for i, j, d in instances:
            base = tau.pieces[d]
            if base.is_zero:
                continue
            ij = apply_raising_operator(r, i, apply_raising_operator(r, j, base, d + j), d + i + j)
            ji = apply_raising_operator(r, j, apply_raising_operator(r, i, base, d + i), d + i + j)
            residual = ij - ji
            if not residual.is_zero:
                residuals.append((f"[A_{i}, A_{j}] on degree {d}", residual))
    return CheckReport(
        check_name="commutator",
        status=DIAGNOSTIC,
        residuals=residuals,
        timing_ms=t.ms,
        details={
            "instances": len(instances),
            "vacuous": not instances,
            "fallback_minimal": fallback,
            "all_zero": not residuals,
        },
    )


def check_exponential_agreement(r: int, degree: int, tau: TauExpansion | None = None) -> CheckReport:
    """Compare the recursion output against the exponential-formula path.

    Agreement is expected under the commutativity conjecture; this check is
    diagnostic because the recursion path is the authority either way.
    """
    with _Timer() as t:
        if tau is None or tau.max_degree < degree:
            tau = compute_tau(r, degree)
        exp_tau = compute_tau_exponential(r, degree)
        residuals = []
        for j in range(degree + 1):
            diff = tau.pieces[j] - exp_tau.pieces[j]
            if not diff.is_zero:
                residuals.append((f"degree {j}", diff))
    return CheckReport(
        check_name="exponential_agreement",
        status=DIAGNOSTIC,
        residuals=residuals,
        timing_ms=t.ms,
        details={"agrees": not residuals, "max_degree": degree},
    )
