"""Congruence decision procedures for genus-2 expansions mod p.

The Sturm gate scans the square n, m <= k*index/10 and certifies vanishing
mod p; the Jacobi gate does the same for a single Fourier-Jacobi slice with
the bound (k + 2m)*index/12.  Filtration results are evidence on a finite box,
never certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .constructors import build, monomial
from .expansion import SiegelExpansion, box_indices, det_t
from .genus1 import JacobiSlice
from .scalars import as_prime, format_rational, reduce_scalar

CERTIFIED = "certified-zero"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive-insufficient-box"


class HypothesisError(ValueError):
    """An input violates a precondition of the theorem being applied."""


@dataclass
class CongruenceReport:
    verdict: str
    bound: Fraction
    box: int
    prime: int
    index: int
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "bound": format_rational(self.bound),
            "box": self.box,
            "prime": self.prime,
            "witnesses": [
                {"n": n, "r": r, "m": m, "residue": res} for (n, r, m), res in self.witnesses
            ],
            "notes": list(self.notes),
        }


def _require_even_weight(k: int):
    if k % 2 or k <= 0:
        raise HypothesisError(f"weight must be an even positive integer, got {k}")


def _as_mod_p(F: SiegelExpansion, p) -> SiegelExpansion:
    if F.modulus is None:
        if p is None:
            raise HypothesisError("an exact expansion needs a prime to reduce modulo")
        return F.reduce(p)
    if p is not None and as_prime(p) != F.modulus:
        raise HypothesisError(f"expansion is reduced mod {F.modulus}, not {p}")
    as_prime(F.modulus)
    return F


def sturm_gate(F: SiegelExpansion, k: int, index: int = 1, p=None) -> CongruenceReport:
    """Decide F = 0 (mod p) from the coefficients with n, m <= k*index/10."""
    _require_even_weight(k)
    if index < 1:
        raise HypothesisError("index must be >= 1")
    F = _as_mod_p(F, p)
    bound = Fraction(k * index, 10)
    need = math.floor(bound)
    scan = min(need, F.box)
    witnesses = [
        ((n, r, m), v) for (n, r, m), v in F.coeffs.items() if n <= scan and m <= scan
    ]
    notes = [f"index [Gamma2:Gamma] = {index}", f"scanned n, m <= {scan}"]
    if witnesses:
        verdict = REFUTED
    elif F.box >= need and F.level == "1":
        verdict = CERTIFIED
    else:
        verdict = INCONCLUSIVE
        if F.level != "1":
            notes.append(
                f"level {F.level}: Sturm bound {format_rational(bound)} not achievable at this box; "
                "box-congruence only"
            )
        else:
            notes.append(f"box {F.box} < required {need}")
    return CongruenceReport(verdict, bound, F.box, F.modulus, index, witnesses, notes)


def certify_congruent(F: SiegelExpansion, G: SiegelExpansion, p, k: int, index: int = 1) -> CongruenceReport:
    """Sturm gate applied to F - G."""
    if F.weight != G.weight:
        raise HypothesisError(f"weights differ: {F.weight} vs {G.weight}")
    p = as_prime(p)
    return sturm_gate(_as_mod_p(F, p) - _as_mod_p(G, p), k, index)


def compare_on_region(F, G, p, box: int | None = None, max_trace: int | None = None) -> CongruenceReport:
    """Coefficientwise F = G (mod p) on a finite region; never a certificate.

    The region is n, m <= box, further cut to tr(T) = 2n + 2m <= max_trace.
    """
    p = as_prime(p)
    Fp, Gp = _as_mod_p(F, p), _as_mod_p(G, p)
    b = min(Fp.box, Gp.box) if box is None else box
    if b > min(Fp.box, Gp.box):
        raise HypothesisError(f"region box {b} exceeds the expansions' box")
    wit = []
    checked = 0
    for idx in box_indices(b):
        n, _, m = idx
        if max_trace is not None and 2 * n + 2 * m > max_trace:
            continue
        checked += 1
        d = (Fp[idx] - Gp[idx]) % p
        if d:
            wit.append((idx, d))
    region = f"n, m <= {b}" + (f", tr(T) <= {max_trace}" if max_trace is not None else "")
    notes = [f"{checked} coefficients compared on {region}"]
    verdict = REFUTED if wit else INCONCLUSIVE
    if not wit:
        notes.append("agrees on the region (box evidence, not a Sturm certificate)")
    return CongruenceReport(verdict, Fraction(b), b, p, 1, wit, notes)


def order_at_one(row: dict, p: int):
    """Order of vanishing at xi = 1 of sum_r row[r] xi^r over GF(p)."""
    if not any(v % p for v in row.values()):
        return math.inf
    lo = min(row)
    poly = [0] * (max(row) - lo + 1)
    for r, v in row.items():
        poly[r - lo] = v % p
    order = 0
    while sum(poly) % p == 0:
        # synthetic division by (x - 1), highest degree first
        out = []
        acc = 0
        for c in reversed(poly):
            acc = (acc + c) % p
            out.append(acc)
        poly = list(reversed(out[:-1]))
        order += 1
    return order


def jacobi_gate(phi: JacobiSlice, k: int, m: int, index: int = 1, p=None) -> CongruenceReport:
    """Decide phi = 0 (mod p) from its rows n <= (k + 2m)*index/12."""
    _require_even_weight(k)
    if phi.modulus is None:
        if p is None:
            raise HypothesisError("an exact slice needs a prime")
        p = as_prime(p)
        phi = JacobiSlice(
            phi.weight, phi.index,
            {key: reduce_scalar(v, p, where=key) for key, v in phi.coeffs.items()},
            phi.q_bound, phi.weak, p,
        )
    p = as_prime(phi.modulus)
    bound = Fraction((k + 2 * m) * index, 12)
    need = math.floor(bound)
    scan = min(need, phi.q_bound - 1)
    witnesses = [((n, r, m), v) for (n, r), v in phi.coeffs.items() if n <= scan]
    notes = [f"scanned rows n <= {scan}"]
    for n in range(scan + 1):
        row = phi.row(n)
        if row:
            notes.append(f"row {n}: order at xi=1 mod {p} is {order_at_one(row, p)} (need {2 * m + 1})")
    if witnesses:
        verdict = REFUTED
    elif phi.q_bound - 1 >= need:
        verdict = CERTIFIED
    else:
        verdict = INCONCLUSIVE
        notes.append(f"q-bound {phi.q_bound} too small for rows up to {need}")
    return CongruenceReport(verdict, bound, phi.q_bound - 1, p, index, witnesses, notes)


def monomial_basis(k: int) -> list[tuple[int, int, int, int]]:
    """Exponents (a, b, c, d) of E4^a E6^b chi10^c chi12^d of weight k, in descending lex order."""
    if k % 2:
        raise HypothesisError(f"odd weight {k} has no even-weight monomials")
    if k < 0:
        return []
    out = []
    for a in range(k // 4, -1, -1):
        for b in range((k - 4 * a) // 6, -1, -1):
            for c in range((k - 4 * a - 6 * b) // 10, -1, -1):
                rest = k - 4 * a - 6 * b - 10 * c
                if rest % 12 == 0:
                    out.append((a, b, c, rest // 12))
    return sorted(out, reverse=True)


@dataclass
class MembershipResult:
    weight: int
    consistent: bool
    basis: list
    combination: list | None
    residual_violations: list
    rank: int


def solve_mod_p(rows: Sequence[Sequence[int]], rhs: Sequence[int], p: int):
    """Incremental elimination over GF(p).

    Rows are taken in order; a row contradicting the rows accepted before it
    is skipped and its position returned as a violation.  Returns
    ``(solution, violations, rank)`` where the solution satisfies every
    accepted row (free variables set to 0).
    """
    ncols = len(rows[0]) if rows else 0
    pivots: dict[int, list[int]] = {}  # pivot column -> row [coeffs..., rhs], pivot entry 1
    violations = []
    for pos, (row, b) in enumerate(zip(rows, rhs)):
        v = [x % p for x in row] + [b % p]
        for col in sorted(pivots):
            c = v[col]
            if c:
                pr = pivots[col]
                v = [(x - c * y) % p for x, y in zip(v, pr)]
        lead = next((j for j in range(ncols) if v[j]), None)
        if lead is None:
            if v[-1]:
                violations.append(pos)
            continue
        inv = pow(v[lead], -1, p)
        v = [x * inv % p for x in v]
        # keep reduced form so back-substitution is a direct read-off
        for col, pr in pivots.items():
            c = pr[lead]
            if c:
                pivots[col] = [(x - c * y) % p for x, y in zip(pr, v)]
        pivots[lead] = v
    sol = [0] * ncols
    for col, pr in pivots.items():
        sol[col] = pr[-1]
    return sol, violations, len(pivots)


def membership_solve(F: SiegelExpansion, j: int, box: int) -> MembershipResult:
    """Is F (mod p) a combination of the weight-j monomials on the box?"""
    if box < 1:
        raise HypothesisError("box must be >= 1")
    if F.modulus is None:
        raise HypothesisError("membership is decided for expansions reduced mod p")
    if F.level != "1":
        raise HypothesisError("membership is only implemented at level 1")
    p = F.modulus
    if box > F.box:
        raise HypothesisError(f"F is known only to box {F.box}")
    basis = monomial_basis(j)
    idxs = list(box_indices(box))
    cols = [monomial(e, box, p) for e in basis]
    rows = [[c[idx] for c in cols] for idx in idxs]
    rhs = [F[idx] for idx in idxs]
    if not basis:
        viol = [idx for idx, b in zip(idxs, rhs) if b]
        return MembershipResult(j, not viol, basis, [] if not viol else None, viol, 0)
    sol, viol, rank = solve_mod_p(rows, rhs, p)
    bad = [idxs[i] for i in viol]
    return MembershipResult(j, not bad, basis, sol if not bad else None, bad, rank)


@dataclass
class FiltrationReport:
    prime: int
    formal_weight: int
    weight_class: int
    candidates: list
    evidence_box: int
    conclusion: str
    omega: int | None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "formal_weight": self.formal_weight,
            "weight_class": self.weight_class,
            "candidates": [
                {"weight": j, "consistent": ok, "residual_violations": nv}
                for j, ok, nv in self.candidates
            ],
            "evidence_box": self.evidence_box,
            "conclusion": self.conclusion,
            "omega_evidence": self.omega,
            "notes": list(self.notes),
        }


def filtration_evidence(F: SiegelExpansion, w: int, p, cap: int, box: int) -> FiltrationReport:
    """Least even j = w (mod p-1), j <= cap, with F (mod p) in the span of weight-j monomials."""
    if cap < 0:
        raise HypothesisError("cap must be >= 0")
    p = as_prime(p)
    F = _as_mod_p(F, p).restrict(box)
    cls = w % (p - 1)
    notes = [
        "EVIDENCE: consistency on a finite box, not a certificate",
        f"search restricted to weights j = {w} (mod {p - 1})",
    ]
    if F.is_zero():
        j0 = next((j for j in range(cls, cap + 1, p - 1) if monomial_basis(j)), None)
        cand = [(j0, True, 0)] if j0 is not None else []
        return FiltrationReport(
            p, w, cls, cand, box, "F = 0 (mod p); omega undefined (-inf convention)", None, notes
        )
    cands = []
    omega = None
    for j in range(cls, cap + 1, p - 1):
        res = membership_solve(F, j, box)
        cands.append((j, res.consistent, len(res.residual_violations)))
        if res.consistent:
            omega = j
            break
    conclusion = f"omega = {omega} (evidence)" if omega is not None else f"no candidate <= {cap}"
    return FiltrationReport(p, w, cls, cands, box, conclusion, omega, notes)


@dataclass
class Theorem2Report:
    form: str
    weight: int
    prime: int
    branch: str
    box: int
    up_nonzero: bool
    up_witness: tuple | None
    applications: int | None = None
    formal_weight: int | None = None
    predicted_omega: int | None = None
    filtration: FiltrationReport | None = None
    matches: bool | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "form": self.form,
            "weight": self.weight,
            "prime": self.prime,
            "branch": self.branch,
            "box": self.box,
            "up_nonzero": self.up_nonzero,
            "up_witness": None if self.up_witness is None else {
                "n": self.up_witness[0][0], "r": self.up_witness[0][1],
                "m": self.up_witness[0][2], "residue": self.up_witness[1],
            },
            "notes": list(self.notes),
        }
        if self.branch == "dichotomy":
            out.update(
                applications=self.applications,
                formal_weight=self.formal_weight,
                predicted_omega=self.predicted_omega,
                filtration=self.filtration.to_json(),
                matches=self.matches,
            )
        return out


def theorem2_regime(k: int, p, branch: str = "auto") -> str:
    """Which branch applies to (k, p); raises HypothesisError outside both."""
    _require_even_weight(k)
    p = as_prime(p)
    if branch not in ("auto", "dichotomy", "nonvanishing"):
        raise HypothesisError(f"unknown branch {branch!r}")
    if p <= k:
        raise HypothesisError(f"needs p > k, got p={p}, k={k}")
    in_nonvanishing = p > 2 * k - 5
    in_dichotomy = k < p < 2 * k - 5
    if branch == "dichotomy" and not in_dichotomy:
        raise HypothesisError(f"empty regime k<p<2k-5 for k={k}, p={p}")
    if branch == "nonvanishing" and not in_nonvanishing:
        raise HypothesisError(f"p={p} does not satisfy p > 2k-5 = {2 * k - 5}")
    if not (in_nonvanishing or in_dichotomy):
        raise HypothesisError(f"p = 2k-5 = {p} is excluded by both branches")
    return "nonvanishing" if in_nonvanishing else "dichotomy"


def theorem2_driver(name: str, k: int, p, box: int, branch: str = "auto", cap: int | None = None,
                    form: SiegelExpansion | None = None) -> Theorem2Report:
    """U(p) nonvanishing (p > 2k-5) or the filtration dichotomy (k < p < 2k-5)."""
    in_nonvanishing = theorem2_regime(k, p, branch) == "nonvanishing"
    p = as_prime(p)
    F = build(name, box) if form is None else form.restrict(box)
    if F.weight != k:
        raise HypothesisError(f"{name} has weight {F.weight}, not {k}")
    if F.level != "1":
        raise HypothesisError("the U(p) dichotomy is stated for level 1")
    Fp = F.reduce(p)
    U = Fp.u_p(p)
    witness = next(iter(U.coeffs.items()), None)
    notes = []
    if in_nonvanishing:
        rep = Theorem2Report(name, k, p, "nonvanishing", box, witness is not None, witness, notes=notes)
        if Fp.is_zero():
            notes.append("F = 0 (mod p) on the box; hypothesis F != 0 not met")
        elif witness is None:
            notes.append("no nonzero U(p) coefficient in the box: box exhausted, enlarge it")
        else:
            notes.append(f"U({p}) nonzero: witness det T = {det_t(*witness[0])}")
        return rep
    a = (3 * p + 3) // 2 - k
    formal = k + a * (p + 1)
    predicted = 3 * p - k + 3 if witness is not None else 2 * p - k + 4
    if cap is None:
        cap = 3 * p - k + 3 + (p - 1)
    Dp = Fp.d_op(a)
    filt = filtration_evidence(Dp, formal, p, cap, box)
    matches = filt.omega == predicted
    notes.append(
        f"U({p}) status by direct scan: {'nonzero' if witness else 'zero'} on box {box}"
    )
    if not matches:
        notes.append("evidence disagrees with the predicted branch: flagged for human review")
    return Theorem2Report(
        name, k, p, "dichotomy", box, witness is not None, witness,
        a, formal, predicted, filt, matches, notes,
    )
