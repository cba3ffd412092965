"""Reconciliation and property suite behind ``luequiv verify``.

Every check produces one :class:`CheckRecord`. Comparison checks set a
published value against an independently computed one and are ``MATCH`` when
``delta < tolerance``; property checks measure the worst violation over a
seeded sample and are ``PROPERTY_PASS`` under the same rule. A handful of
comparisons are known to disagree with the published closed forms; they are
flagged ``expected="MISMATCH"``, reported, and do not fail the suite. Each of
them has a companion property check pinning the size of the disagreement.
"""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from .canonical import (
    general_sc_equivalent,
    pure_sc_equivalent,
    sc_lu_equivalent,
    sc_lu_witness,
    sc_min_pt_eigenvalue,
    sc_separable,
    standard_form_2q,
    standard_form_general,
    theorem2_family,
    witness_residual,
)
from .correlations import (
    classical_correlation_measured,
    classical_correlation_relative,
    conditional_ensemble,
    discord_relative_entropy,
    entropy_via_delta,
    er_equals_dr_check,
    measurement_projectors,
    mutual_information,
    published_conditional_ensemble,
    sc_paper_closed_forms,
    MeasurementParams,
)
from .equivalence import (
    Status,
    brute_force_lu_search,
    decide_lu_equivalence,
    extract_tensor_factors,
    invariant_certificate,
    nondegenerate_lu_test,
)
from .exceptions import NotDecomposable
from .invariants import invariants_I, pure_lu_equivalent, pure_lu_witness, representation_of
from .io import dumps, sig12
from .linalg import (
    binary_entropy,
    eigh,
    partial_trace,
    partial_transpose,
    realign,
    relative_entropy,
    von_neumann_entropy,
)
from .states import (
    LocalUnitary2,
    PureState,
    SCCoefficients,
    bell_density,
    conjugate_by_locals,
    haar_unitary,
    random_density,
    random_pure_state,
    random_sc,
    sc_embed,
)

STATUSES = ("MATCH", "MISMATCH", "PROPERTY_PASS", "PROPERTY_FAIL")
RECONCILE_TOL = 1e-4


@dataclass(frozen=True)
class CheckRecord:
    name: str
    paper_ref: str
    paper_value: object
    oracle_value: object
    delta: float
    tolerance: float
    status: str
    expected: str
    detail: str = ""

    @property
    def failed(self) -> bool:
        if self.status == "PROPERTY_FAIL":
            return True
        return self.expected == "MATCH" and self.status == "MISMATCH"


def _clean(v):
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_clean(x) for x in v]
    return sig12(float(v))


def compare(name, paper_ref, paper_value, oracle_value, delta, tol, expected="MATCH", detail="") -> CheckRecord:
    delta = sig12(delta)
    status = "MATCH" if delta < tol else "MISMATCH"
    return CheckRecord(name, paper_ref, _clean(paper_value), _clean(oracle_value), delta, tol, status, expected, detail)


def prop(name, paper_ref, observed, delta, tol, claim=None, detail="") -> CheckRecord:
    delta = sig12(delta)
    status = "PROPERTY_PASS" if delta < tol else "PROPERTY_FAIL"
    return CheckRecord(name, paper_ref, _clean(claim), _clean(observed), delta, tol, status, "PROPERTY", detail)


@dataclass(frozen=True)
class VerifyReport:
    seed: int
    version: str
    checks: tuple = field(default_factory=tuple)

    @property
    def exit_code(self) -> int:
        return 1 if any(c.failed for c in self.checks) else 0

    def summary(self) -> dict:
        counts = {s: sum(c.status == s for c in self.checks) for s in STATUSES}
        counts["expected_mismatch"] = sum(c.expected == "MISMATCH" and c.status == "MISMATCH" for c in self.checks)
        counts["failed"] = sum(c.failed for c in self.checks)
        return {"total": len(self.checks), **counts}

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "version": self.version,
            "summary": self.summary(),
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "VerifyReport":
        doc = json.loads(text)
        checks = tuple(CheckRecord(**c) for c in doc["checks"])
        return cls(doc["seed"], doc["version"], checks)

    def to_table(self) -> str:
        def fmt(v):
            if v is None:
                return "-"
            if isinstance(v, float):
                return f"{v:.6g}"
            if isinstance(v, list):
                return "[" + ", ".join(fmt(x) for x in v) + "]"
            return str(v)

        header = ("status", "name", "delta", "tol", "published", "oracle", "expected")
        rows = [
            (c.status, c.name, fmt(c.delta), fmt(c.tolerance), fmt(c.paper_value), fmt(c.oracle_value), c.expected)
            for c in self.checks
        ]
        widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
        line = lambda r: "  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip()
        out = [f"verify suite  seed={self.seed}  version={self.version}", line(header), line(["-" * w for w in widths])]
        out += [line(r) for r in rows]
        s = self.summary()
        out.append(
            f"{s['total']} checks: {s['PROPERTY_PASS']} pass, {s['PROPERTY_FAIL']} fail, "
            f"{s['MATCH']} match, {s['MISMATCH']} mismatch ({s['expected_mismatch']} expected); "
            f"exit code {self.exit_code}"
        )
        return "\n".join(out) + "\n"


# -- independent reference formulas ----------------------------------------------


def transformed_entries(c1, c2, c4, a1, a2, b1, b2) -> np.ndarray:
    """The 16 entries of ``(U1 ⊗ U2) rho (U1 ⊗ U2)^dag`` written out term by term.

    ``rho = c1|00><00| + c2|00><11| + c2*|11><00| + c4|11><11|`` and
    ``U1 = [[a1, -a2], [a2*, a1*]]``, ``U2 = [[b1, -b2], [b2*, b1*]]``.
    """
    cj = np.conj
    rows = [
        (c1 * a1 * b1 + cj(c2) * a2 * b2, c2 * a1 * b1 + c4 * a2 * b2),
        (c1 * a1 * cj(b2) - cj(c2) * a2 * cj(b1), c2 * a1 * cj(b2) - c4 * a2 * cj(b1)),
        (c1 * cj(a2) * b1 - cj(c2) * cj(a1) * b2, c2 * cj(a2) * b1 - c4 * cj(a1) * b2),
        (c1 * cj(a2) * cj(b2) + cj(c2) * cj(a1) * cj(b1), c2 * cj(a2) * cj(b2) + c4 * cj(a1) * cj(b1)),
    ]
    cols = [
        (cj(a1) * cj(b1), cj(a2) * cj(b2)),
        (cj(a1) * b2, -cj(a2) * b1),
        (a2 * cj(b1), -a1 * cj(b2)),
        (a2 * b2, a1 * b1),
    ]
    return np.array([[r[0] * c[0] + r[1] * c[1] for c in cols] for r in rows])


def _family_member(sc: SCCoefficients, rng: np.random.Generator) -> SCCoefficients:
    delta = rng.uniform(0, 2 * np.pi)
    c2 = sc.c2 * np.exp(1j * delta)
    if rng.random() < 0.5:
        return SCCoefficients.two_qubit(sc.c4, c2, sc.c1)
    return SCCoefficients.two_qubit(sc.c1, c2, sc.c4)


def _near_miss(sc: SCCoefficients, rng: np.random.Generator) -> SCCoefficients:
    """A valid SC state sharing most data with ``sc`` but outside its LU class."""
    c1, c2, c4 = sc.c1, sc.c2, sc.c4
    if abs(c2) > 0.05 and rng.random() < 0.5:
        return SCCoefficients.two_qubit(c1, c2 * rng.uniform(0.3, 0.9), c4)
    shift = rng.uniform(0.02, 0.1) * rng.choice([-1.0, 1.0])
    n1 = min(max(c1 + shift, 0.0), 1.0)
    n4 = 1.0 - n1
    if abs(n1 - c1) < 0.01 or abs(n1 - c4) < 0.01:
        n1, n4 = 0.5 * (n1 + 1.0), 0.5 * (1.0 - n1)
    lam = min(abs(c2), 0.999 * math.sqrt(n1 * n4))
    return SCCoefficients.two_qubit(n1, lam * np.exp(1j * np.angle(c2)), n4)


def _classical_sc(rng: np.random.Generator) -> SCCoefficients:
    c1 = rng.uniform(0, 1)
    return SCCoefficients.two_qubit(c1, 0.0, 1.0 - c1)


# -- checks ---------------------------------------------------------------------


def check_realign(rng):
    worst = 0.0
    for _ in range(200):
        m, n = rng.choice([2, 3], size=2)
        a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        worst = max(worst, np.abs(realign(np.kron(a, b), (m, n)) - np.outer(a.ravel(), b.ravel())).max())
    yield prop("linalg.realign_of_product", "realignment of a tensor product", worst, worst, 1e-12, 0.0)

    cnot = np.eye(4)[[0, 1, 3, 2]]
    swap = np.eye(4)[[0, 2, 1, 3]]
    ranks = [int(np.linalg.matrix_rank(realign(m, (2, 2)), tol=1e-10)) for m in (cnot, swap)]
    yield prop("linalg.realign_rank_cnot_swap", "realignment rank of CNOT and SWAP", ranks, abs(ranks[0] - 2) + abs(ranks[1] - 4), 0.5, [2, 4])


def check_partial_ops(rng):
    worst = 0.0
    for _ in range(200):
        rho = random_density(6, rng, dims=(2, 3)).mat
        pt = partial_transpose(rho, (2, 3))
        worst = max(worst, np.abs(partial_transpose(pt, (2, 3)) - rho).max(), abs(np.trace(pt) - 1))
        ref = sum(np.kron(np.eye(2)[[i]], np.eye(3)) @ rho @ np.kron(np.eye(2)[[i]], np.eye(3)).T for i in range(2))
        worst = max(worst, np.abs(partial_trace(rho, (2, 3), "A") - ref).max())
    bell_min = float(np.linalg.eigvalsh(partial_transpose(bell_density().mat, (2, 2))).min())
    worst = max(worst, abs(bell_min + 0.5))
    yield prop("linalg.partial_trace_transpose", "partial trace and partial transpose", bell_min, worst, 1e-12, -0.5)


def check_entropies(rng):
    inv, klein = 0.0, 0.0
    for _ in range(200):
        rho = random_density(4, rng)
        u = haar_unitary(4, rng)
        inv = max(inv, abs(von_neumann_entropy(u @ rho.mat @ u.conj().T) - von_neumann_entropy(rho)))
        sigma = random_density(4, rng)
        klein = max(klein, -relative_entropy(rho, sigma), relative_entropy(rho, rho))
    yield prop("linalg.entropy_unitary_invariance", "von Neumann entropy", inv, inv, 1e-10, 0.0)
    yield prop("linalg.relative_entropy_klein", "relative entropy", klein, klein, 1e-10, 0.0)


def check_haar(rng):
    worst = 0.0
    for d in (2, 3, 4):
        for _ in range(333):
            u = haar_unitary(d, rng)
            worst = max(worst, np.abs(u @ u.conj().T - np.eye(d)).max())
    yield prop("states.haar_unitarity", "Haar random unitaries", worst, worst, 1e-12, 0.0)
    moment = float(np.mean([abs(haar_unitary(2, rng)[0, 0]) ** 2 for _ in range(10_000)]))
    yield prop("states.haar_second_moment", "Haar random unitaries", moment, abs(moment - 0.5), 0.02, 0.5)


def check_random_sc(rng):
    worst = 0.0
    for _ in range(1000):
        sc = random_sc(rng)
        worst = max(worst, -np.linalg.eigvalsh(sc.c).min(), abs(np.trace(sc.c) - 1), sc.c1 * sc.c4 - abs(sc.c2) ** 2 < -1e-12)
    yield prop("states.random_sc_valid", "SC state constraints", worst, worst, 1e-12, 0.0)


def check_entries(rng):
    worst = 0.0
    for _ in range(500):
        sc = random_sc(rng)
        u = LocalUnitary2.random(rng)
        direct = conjugate_by_locals(sc_embed(sc), u).mat
        formula = transformed_entries(sc.c1, sc.c2, sc.c4, u.a1, u.a2, u.b1, u.b2)
        worst = max(worst, np.abs(direct - formula).max())
    yield compare("sc.transformed_entries", "entries of the locally rotated two-qubit SC state", 0.0, worst, worst, 1e-12,
                  detail="max entry deviation over 500 draws")


def check_spectrum_preserved(rng):
    worst = 0.0
    for _ in range(200):
        rho = random_density(6, rng, dims=(2, 3))
        moved = conjugate_by_locals(rho, [haar_unitary(2, rng), haar_unitary(3, rng)])
        worst = max(worst, np.abs(eigh(rho.mat)[0] - eigh(moved.mat)[0]).max())
    yield prop("states.lu_preserves_spectrum", "local unitary conjugation", worst, worst, 1e-12, 0.0)


def check_standard_form(rng):
    sc = SCCoefficients.two_qubit(0.3, 0.2 * np.exp(1j * np.pi / 3), 0.7)
    form = standard_form_2q(sc)
    want = (0.7, 0.2, 0.3)
    dev = float(np.max(np.abs(np.subtract(form.as_tuple(), want))))
    yield prop("sc.standard_form_example", "two-qubit SC standard form", list(form.as_tuple()), dev, 1e-12, list(want))

    form_dev, witness_dev, verdict_fail, idem = 0.0, 0.0, 0, 0.0
    for _ in range(1000):
        a = random_sc(rng)
        b = _family_member(a, rng)
        verdict_fail += not sc_lu_equivalent(a, b)
        fa, fb = standard_form_2q(a), standard_form_2q(b)
        form_dev = max(form_dev, np.max(np.abs(np.subtract(fa.as_tuple(), fb.as_tuple()))))
        witness_dev = max(
            witness_dev,
            witness_residual(a, fa.coefficients(), fa.witness),
            witness_residual(a, b, sc_lu_witness(a, b)),
        )
        idem = max(idem, np.max(np.abs(np.subtract(standard_form_2q(fa.coefficients()).as_tuple(), fa.as_tuple()))))
    yield prop("sc.family_round_trip", "LU orbit of a two-qubit SC state", verdict_fail, verdict_fail + (form_dev >= 1e-8), 0.5, 0,
               detail=f"max standard-form deviation {form_dev:.3g}")
    yield prop("sc.witness_residual", "standard form witness unitaries", witness_dev, witness_dev, 1e-12, 0.0)
    yield prop("sc.standard_form_idempotent", "two-qubit SC standard form", idem, idem, 1e-12, 0.0)


def check_brute_force_agreement(rng):
    disagree, missing_cert, worst_eq = 0, 0, 0.0
    for i in range(200):
        a = random_sc(rng)
        if i < 100:
            b, truth = _family_member(a, rng), True
        elif i < 150:
            b, truth = _near_miss(a, rng), False
        else:
            b, truth = random_sc(rng), False
        fam, canon = theorem2_family(a, b), sc_lu_equivalent(a, b)
        ra, rb = sc_embed(a), sc_embed(b)
        if truth:
            res = brute_force_lu_search(ra, rb, restarts=16, seed=rng).residual
            worst_eq = max(worst_eq, res)
            disagree += not (fam and canon and res < 1e-6)
        else:
            cert = invariant_certificate(ra, rb, (2, 2))
            missing_cert += cert is None
            disagree += fam or canon or cert is None
    yield prop("sc.brute_force_agreement", "LU orbit of a two-qubit SC state", disagree, disagree, 0.5, 0,
               detail=f"worst brute-force residual on equivalent pairs {worst_eq:.3g}")
    yield prop("sc.brute_force_residual", "LU orbit of a two-qubit SC state", worst_eq, worst_eq, 1e-6, 0.0)
    yield prop("sc.invariant_separates_non_equivalent", "LU invariants", missing_cert, missing_cert, 0.5, 0)


def check_general_form(rng):
    worst, mismatch = 0.0, 0
    for levels, parties in ((3, 2), (3, 3), (4, 2)):
        for _ in range(40):
            sc = random_sc(rng, levels, parties)
            form = standard_form_general(sc)
            worst = max(worst, witness_residual(sc, form.canonical, form.witness))
            # diagonal phases plus a common relabelling keep the class
            perm = rng.permutation(levels)
            ph = np.exp(1j * rng.uniform(0, 2 * np.pi, levels))
            c2 = (ph[:, None] * sc.c * ph.conj()[None, :])[np.ix_(perm, perm)]
            mismatch += not general_sc_equivalent(sc, SCCoefficients(c2, parties))
    yield prop("sc.general_form_witness", "SC standard form in higher dimension", worst, worst, 1e-10, 0.0)
    yield prop("sc.general_form_invariance", "SC standard form in higher dimension", mismatch, mismatch, 0.5, 0)


def check_ppt(rng):
    disagree, missed = 0, 0
    for i in range(1000):
        sc = random_sc(rng) if i % 4 else _classical_sc(rng)
        min_pt = sc_min_pt_eigenvalue(sc)
        disagree += sc_separable(sc) != (min_pt >= -1e-10)
        if abs(sc.c2) > 1e-9:
            missed += min_pt >= 0
    yield prop("sc.separable_iff_ppt", "PPT criterion for SC states", disagree, disagree, 0.5, 0)
    yield prop("sc.coherence_implies_entangled", "PPT criterion for SC states", missed, missed, 0.5, 0)


def check_pure_sc(rng):
    errors = 0
    for i in range(200):
        x = rng.uniform(0.5, 1.0)
        a0, a1 = math.sqrt(x), math.sqrt(1 - x)
        if i % 2:
            b0, b1 = a0, a1
        else:
            y = rng.uniform(0.5, 1.0)
            b0, b1 = math.sqrt(y), math.sqrt(1 - y)
        psi = PureState(np.diag([a0, a1]).astype(complex))
        phi = PureState(np.diag([b0, b1]).astype(complex))
        errors += pure_sc_equivalent(a0, a1, b0, b1) != pure_lu_equivalent(psi, phi)
    yield prop("sc.pure_sc_agrees_with_schmidt", "pure SC states", errors, errors, 0.5, 0)


def check_pure_invariants(rng):
    drift = 0.0
    for n in (2, 3, 4):
        for _ in range(50):
            psi = random_pure_state((n, n), rng)
            base = invariants_I(psi)
            for _ in range(4):
                w = np.kron(haar_unitary(n, rng), haar_unitary(n, rng))
                drift = max(drift, np.abs(invariants_I(PureState.from_vector(w @ psi.vector, (n, n))) - base).max())
    yield prop("pure.invariants_along_orbits", "trace invariants of pure states", drift, drift, 1e-10, 0.0)

    errors, witness = 0, 0.0
    for i in range(1000):
        n = (2, 3, 4)[i % 3]
        psi = random_pure_state((n, n), rng)
        if i < 500:
            w = np.kron(haar_unitary(n, rng), haar_unitary(n, rng))
            phi = PureState.from_vector(w @ psi.vector, (n, n))
            errors += not pure_lu_equivalent(psi, phi)
            u1, u2 = pure_lu_witness(psi, phi)
            witness = max(witness, np.abs(np.kron(u1, u2) @ psi.vector - phi.vector).max())
        else:
            phi = random_pure_state((n, n), rng)
            errors += pure_lu_equivalent(psi, phi)
    yield prop("pure.lu_classification", "Schmidt coefficients decide pure-state LU equivalence", errors, errors, 0.5, 0)
    yield prop("pure.lu_witness", "Schmidt coefficients decide pure-state LU equivalence", witness, witness, 1e-10, 0.0)


def check_representation(rng):
    worst = 0.0
    for _ in range(200):
        rho = random_density(6, rng, dims=(2, 3), rank=int(rng.integers(1, 7)))
        worst = max(worst, np.abs(representation_of(rho).reconstruct() - rho.mat).max())
    yield prop("mixed.representation_reconstructs", "spectral and Schmidt representation of mixed states", worst, worst, 1e-10, 0.0)


def check_extraction(rng):
    worst = 0.0
    for i in range(1000):
        m, n = ((2, 2), (2, 3), (3, 2), (3, 3))[i % 4]
        a, b = haar_unitary(m, rng), haar_unitary(n, rng)
        u1, u2, _ = extract_tensor_factors(np.kron(a, b), (m, n))
        worst = max(
            worst,
            np.abs(np.kron(u1, u2) - np.kron(a, b)).max(),
            np.abs(u1 @ u1.conj().T - np.eye(m)).max(),
            np.abs(u2 @ u2.conj().T - np.eye(n)).max(),
        )
    yield prop("lu.extract_tensor_factors", "realignment rank-one lemma", worst, worst, 1e-10, 0.0)

    accepted = 0
    for gate in (np.eye(4)[[0, 1, 3, 2]], np.eye(4)[[0, 2, 1, 3]]):
        try:
            extract_tensor_factors(gate.astype(complex), (2, 2))
            accepted += 1
        except NotDecomposable:
            pass
    yield prop("lu.reject_entangling_gates", "realignment rank-one lemma", accepted, accepted, 0.5, 0)


def check_nondegenerate(rng):
    failures = 0
    for _ in range(200):
        rho = random_density(4, rng, dims=(2, 2))
        w = [haar_unitary(2, rng), haar_unitary(2, rng)]
        verdict = nondegenerate_lu_test(rho, conjugate_by_locals(rho, w), seed=rng)
        failures += verdict.status is not Status.EQUIVALENT
    yield prop("lu.nondegenerate_recovery", "phase search over eigenbases", failures, failures, 2.5, 0,
               detail="at most 1% of 200 planted instances may fail")

    bell = bell_density()
    rotated = conjugate_by_locals(bell, [haar_unitary(2, rng), haar_unitary(2, rng)])
    gate = nondegenerate_lu_test(bell, rotated).status is Status.INCONCLUSIVE
    full = decide_lu_equivalence(bell, rotated, seed=rng).status is Status.EQUIVALENT
    yield prop("lu.degenerate_spectrum_fallback", "phase search over eigenbases", [gate, full], (not gate) + (not full), 0.5, [True, True])


def check_entropy_delta(rng):
    worst = 0.0
    for _ in range(1000):
        sc = random_sc(rng)
        w = np.clip(np.linalg.eigvalsh(sc_embed(sc).mat), 0, None)
        direct = -sum(x * math.log2(x) for x in w if x > 0)
        worst = max(worst, abs(entropy_via_delta(sc) - direct))
    yield compare("corr.entropy_via_delta", "entropy of a two-qubit SC state", 0.0, worst, worst, 1e-12)
    bell = entropy_via_delta(SCCoefficients.two_qubit(0.5, 0.5, 0.5))
    yield compare("corr.entropy_via_delta_bell", "entropy of a two-qubit SC state", 0.0, abs(bell), abs(bell), 1e-300)


def check_relative_discord(rng):
    worst = 0.0
    for _ in range(1000):
        worst = max(worst, discord_relative_entropy(random_sc(rng)).delta)
    yield compare("corr.relative_discord_closed_form", "relative entropy discord", 0.0, worst, worst, 1e-10)
    bell = discord_relative_entropy(SCCoefficients.two_qubit(0.5, 0.5, 0.5))
    yield compare("corr.relative_discord_bell", "relative entropy discord", bell.closed_form, bell.direct,
                  abs(bell.direct - 1.0) + bell.delta, 1e-10)
    sep = max(discord_relative_entropy(_classical_sc(rng)).direct for _ in range(200))
    yield compare("corr.relative_discord_separable", "relative entropy discord", 0.0, sep, sep, 1e-10)


def check_conditional_ensemble(rng):
    dp, drho = 0.0, 0.0
    for _ in range(200):
        sc = random_sc(rng)
        p = MeasurementParams.from_axis(rng.normal(size=3))
        direct = conditional_ensemble(sc_embed(sc), measurement_projectors(p), cutoff=0.0)
        for (pk, _), (pk_pub, _) in zip(direct, published_conditional_ensemble(sc, p)):
            dp = max(dp, abs(pk - pk_pub))
        # the published conditional states are exact when the state has no coherence
        cl = _classical_sc(rng)
        for (pk, rk), (_, rk_pub) in zip(
            conditional_ensemble(sc_embed(cl), measurement_projectors(p)), published_conditional_ensemble(cl, p)
        ):
            drho = max(drho, np.abs(rk.mat - rk_pub).max())
    yield compare("corr.outcome_probabilities", "measurement outcome probabilities on SC states", 0.0, dp, dp, 1e-12)
    yield compare("corr.conditional_states_incoherent", "post-measurement states of SC states", 0.0, drho, drho, 1e-12)


def check_measured_discord(rng):
    worst = 0.0
    for _ in range(200):
        worst = max(worst, abs(classical_correlation_measured(sc_embed(_classical_sc(rng))).discord))
    yield prop("corr.measured_discord_classical", "measurement-based discord", worst, worst, 1e-6, 0.0)
    m = classical_correlation_measured(bell_density())
    yield prop("corr.measured_discord_bell", "measurement-based discord", m.discord, abs(m.discord - 1), 1e-4, 1.0)
    yield prop("corr.measured_classical_bell", "measurement-based classical correlation", m.classical, abs(m.classical - 1), 1e-4, 1.0)


def check_reconciliation(rng):
    # classical correlation of an incoherent state
    sc = SCCoefficients.two_qubit(0.7, 0.0, 0.3)
    published = sc_paper_closed_forms(sc).classical_measured
    oracle = classical_correlation_measured(sc_embed(sc)).classical
    yield compare("reconcile.classical_correlation_incoherent", "measurement-based classical correlation of SC states",
                  published, oracle, abs(published - oracle), 1e-6, "MISMATCH", "published value 0; oracle gives h(c1)")
    worst = 0.0
    for _ in range(100):
        cl = _classical_sc(rng)
        delta = abs(sc_paper_closed_forms(cl).classical_measured - classical_correlation_measured(sc_embed(cl)).classical)
        worst = max(worst, abs(delta - binary_entropy(cl.c1)))
    yield prop("reconcile.classical_correlation_incoherent_delta", "measurement-based classical correlation of SC states",
               worst, worst, RECONCILE_TOL, 0.0, "delta equals h(c1) on 100 incoherent states")

    bell = SCCoefficients.two_qubit(0.5, 0.5, 0.5)
    published = sc_paper_closed_forms(bell).discord_measured
    oracle = classical_correlation_measured(sc_embed(bell)).discord
    yield compare("reconcile.measured_discord_bell", "measurement-based discord of SC states", published, oracle,
                  abs(published - oracle), 1e-6, "MISMATCH")
    yield prop("reconcile.measured_discord_bell_delta", "measurement-based discord of SC states", abs(published - oracle),
               abs(abs(published - oracle) - 1.0), RECONCILE_TOL, 1.0)

    cr = classical_correlation_relative(bell)
    yield compare("reconcile.relative_classical_bell", "relative entropy classical correlation of SC states",
                  cr.paper, cr.direct, cr.delta, 1e-6, "MISMATCH", "direct value is S(rho || pi_0)")
    yield prop("reconcile.relative_classical_bell_delta", "relative entropy classical correlation of SC states",
               cr.delta, abs(cr.delta - 1.0), RECONCILE_TOL, 1.0)

    # transverse measurement on Bell: the published A-state is maximally mixed
    p = MeasurementParams.from_axis([1.0, 0.0, 0.0])
    (_, direct), _ = conditional_ensemble(sc_embed(bell), measurement_projectors(p))
    (_, published), _ = published_conditional_ensemble(bell, p)
    r_direct = _bloch(partial_trace(direct.mat, (2, 2), "B"))
    r_pub = _bloch(partial_trace(published, (2, 2), "B"))
    gap = float(np.linalg.norm(r_direct - r_pub))
    yield compare("reconcile.conditional_state_bell", "post-measurement states of SC states",
                  float(np.linalg.norm(r_pub)), float(np.linalg.norm(r_direct)), gap, 1e-6, "MISMATCH",
                  "Bloch lengths of the A-part after a transverse measurement on B")
    yield prop("reconcile.conditional_state_bell_delta", "post-measurement states of SC states", gap, abs(gap - 1.0),
               RECONCILE_TOL, 1.0)


def _bloch(rho2: np.ndarray) -> np.ndarray:
    return np.array([2 * rho2[0, 1].real, -2 * rho2[0, 1].imag, (rho2[0, 0] - rho2[1, 1]).real])


def check_product_oracle(rng):
    worst, ordering = 0.0, 0.0
    for _ in range(50):
        sc = random_sc(rng)
        cr = classical_correlation_relative(sc)
        i_ab = mutual_information(sc_embed(sc))
        worst = max(worst, abs(cr.oracle - i_ab))
        ordering = max(ordering, cr.oracle - cr.direct)
    yield prop("corr.closest_product_is_mutual_information", "relative entropy classical correlation of SC states",
               worst, worst, 1e-6, 0.0)
    yield prop("corr.product_oracle_below_direct", "relative entropy classical correlation of SC states",
               ordering, max(ordering, 0.0), 1e-9, 0.0)


def check_er(rng):
    worst_margin, chi0 = math.inf, 0.0
    for _ in range(50):
        out = er_equals_dr_check(random_sc(rng), 10_000, rng)
        worst_margin = min(worst_margin, out.margin)
        chi0 = max(chi0, abs(out.chi0_value - out.discord_relative))
    yield prop("corr.entanglement_equals_discord_support", "relative entropy of entanglement of SC states",
               worst_margin, max(0.0, -worst_margin), 1e-6, 0.0,
               "smallest S(rho || sigma) - D_R over 50 states x 10^4 separable samples")
    yield prop("corr.dephased_state_attains_discord", "relative entropy discord", chi0, chi0, 1e-9, 0.0)


CHECKS: tuple[Callable, ...] = (
    check_realign,
    check_partial_ops,
    check_entropies,
    check_haar,
    check_random_sc,
    check_entries,
    check_spectrum_preserved,
    check_standard_form,
    check_brute_force_agreement,
    check_general_form,
    check_ppt,
    check_pure_sc,
    check_pure_invariants,
    check_representation,
    check_extraction,
    check_nondegenerate,
    check_entropy_delta,
    check_relative_discord,
    check_conditional_ensemble,
    check_measured_discord,
    check_reconciliation,
    check_product_oracle,
    check_er,
)


def run_verify_suite(seed: int = 42, out_format: Optional[str] = None, checks=CHECKS):
    """Run every check with a per-check generator derived from ``seed``.

    Returns the :class:`VerifyReport`, or its rendering when ``out_format``
    is ``"json"`` or ``"table"``.
    """
    records = []
    for fn in checks:
        rng = np.random.default_rng([seed, zlib.crc32(fn.__name__.encode())])
        records.extend(fn(rng))
    report = VerifyReport(int(seed), __version__, tuple(records))
    if out_format is None:
        return report
    if out_format == "json":
        return report.to_json()
    if out_format == "table":
        return report.to_table()
    raise ValueError(f"out_format must be 'json' or 'table', got {out_format!r}")
