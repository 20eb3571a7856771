"""Seeded invariant suites behind ``hermsynth verify`` and the acceptance tests.

Each suite draws its cases from ``numpy.random.default_rng([seed, k])`` with a fixed
per-suite ``k``, checks every case against an independent reference, and reports the
worst residual per named check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.stats import unitary_group

from . import circuit, complement, gqsp, linalg, sympoly
from .config import STAGES, RunConfig
from .errors import SynthesisError
from .instances import FAMILIES, random_coefficients, random_hermitian, random_state

POWER_TOL = 1e-8
DILATION_TOL = 1e-9
CHEBYSHEV_TOL = 1e-8
COMPLEMENT_TOL = 1e-8
EXACT_PAIR_TOL = 1e-10
BLOCK_TOL = 1e-8
FIDELITY_TOL = 1e-7
GOLDEN_FIDELITY_TOL = 1e-8
CONSTANT_SPREAD_TOL = 1e-10
ORACLE_FLOOR = 1e-6
MAX_POWER = 12


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    worst: dict = field(default_factory=dict)
    limits: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures and self.cases > 0

    def record(self, check: str, value: float, limit: float, case: str) -> None:
        self.limits[check] = limit
        self.worst[check] = max(self.worst.get(check, 0.0), float(value))
        if not value <= limit:
            self.failures.append(f"{check} {value:.3e} > {limit:.1e} ({case})")

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        worst = ", ".join(f"{k}={v:.2e}/{self.limits[k]:.0e}" for k, v in sorted(self.worst.items()))
        return f"{flag} {self.name:<10} cases={self.cases:<4} {worst}"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "cases": self.cases,
                "failures": self.failures, "worst": self.worst, "limits": self.limits,
                "extra": self.extra}


def _rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng([seed, k])


def matrix_instances(seed: int, count: int = 50, dims=(2, 16)) -> list[tuple[str, np.ndarray]]:
    """Hermitian contractions cycling through every family, dims uniform in ``dims``."""
    rng = _rng(seed, 1)
    out = []
    for i in range(count):
        family = FAMILIES[i % len(FAMILIES)]
        dim = int(rng.integers(dims[0], dims[1] + 1))
        cap = 1.0 if i % 5 == 0 else float(rng.uniform(0.3, 1.0))
        out.append((f"{family}/dim={dim}/#{i}", random_hermitian(rng, dim, family, cap)))
    return out


def power_suite(cfg: RunConfig) -> SuiteResult:
    """``R_n(U) + R_n(U^dag) = A^n`` with ``A^n`` by repeated multiplication."""
    res = SuiteResult("power")
    for label, m in matrix_instances(cfg.seed):
        a = linalg.validate_hermitian(m, cfg.tol_herm, cfg.tol_norm)
        dil = linalg.halmos_dilation(a)
        for n in range(MAX_POWER + 1):
            rn = sympoly.rn_coefficients(n)
            lhs = sympoly.eval_matrix(rn, dil.entries) + sympoly.eval_matrix(rn, dil.dagger)
            res.record("power", linalg.max_abs(lhs - np.linalg.matrix_power(a.entries, n)),
                       POWER_TOL, f"{label}, n={n}")
        res.cases += 1
    return res


def dilation_suite(cfg: RunConfig) -> SuiteResult:
    res = SuiteResult("dilation")
    for label, m in matrix_instances(cfg.seed):
        a = linalg.validate_hermitian(m, cfg.tol_herm, cfg.tol_norm)
        dil = linalg.halmos_dilation(a)
        res.record("unitarity", dil.unitarity_residual, DILATION_TOL, label)
        res.record("recovery", linalg.max_abs((dil.entries + dil.dagger) / 2 - a.entries),
                   DILATION_TOL, label)
        res.cases += 1
    return res


def chebyshev_suite(cfg: RunConfig) -> SuiteResult:
    """``(U^n + U^dag^n) / 2 = T_n(A)`` with ``T_n = cos(n arccos x)`` applied spectrally,
    plus ``A^n`` rebuilt from the Chebyshev expansion of ``x^n``."""
    res = SuiteResult("chebyshev")
    for label, m in matrix_instances(cfg.seed):
        a = linalg.validate_hermitian(m, cfg.tol_herm, cfg.tol_norm)
        dil = linalg.halmos_dilation(a)
        u, ud = dil.entries, dil.dagger
        sym = [np.eye(a.dim, dtype=complex)]
        upow, udpow = np.eye(a.dim, dtype=complex), np.eye(a.dim, dtype=complex)
        for _ in range(MAX_POWER):
            upow, udpow = upow @ u, udpow @ ud
            sym.append((upow + udpow) / 2)
        for n in range(MAX_POWER + 1):
            tn = linalg.matrix_function_oracle(
                a, lambda lam: np.cos(n * np.arccos(np.clip(lam, -1, 1))), dil.source)
            res.record("t_n", linalg.max_abs(sym[n] - tn), CHEBYSHEV_TOL, f"{label}, n={n}")
            coeffs = sympoly.power_to_chebyshev(n)
            via_cheb = sum(ck * sym[k] for k, ck in enumerate(coeffs))
            rn = sympoly.rn_coefficients(n)
            via_rn = sympoly.eval_matrix(rn, u) + sympoly.eval_matrix(rn, ud)
            res.record("cross", linalg.max_abs(via_cheb - via_rn), CHEBYSHEV_TOL, f"{label}, n={n}")
        res.cases += 1
    return res


def random_targets(seed: int, count: int, max_degree: int = 16, grid_points: int = 2048,
                   margin: float = 1e-6) -> list[sympoly.ScaledTarget]:
    """Normalized targets: half raw random polynomials, half aggregated ``sum c_j R_j``."""
    rng = _rng(seed, 4)
    out = []
    for i in range(count):
        d = int(rng.integers(0, max_degree + 1))
        c = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
        if d and i % 7 == 3:
            c[0] = 0
        poly = sympoly.aggregate_ptilde(c) if i % 2 else sympoly.ComplexPolynomial(c)
        out.append(sympoly.normalize_for_gqsp(poly, grid_points, margin))
    return out


EXACT_PTILDE = sympoly.ComplexPolynomial([0.25, 0, 0.25])
EXACT_QTILDE = np.array([-(2 - np.sqrt(3)) / 4, 0, (2 + np.sqrt(3)) / 4])


def complement_suite(cfg: RunConfig, count: int = 100) -> SuiteResult:
    res = SuiteResult("complement")
    for i, target in enumerate(random_targets(cfg.seed, count, 16, cfg.grid_points, cfg.margin)):
        label = f"#{i}, degree {target.ptilde.degree}"
        pair = complement.fejer_riesz(target, cfg.grid_points, np.inf)
        res.record("grid", complement.verify_complement(pair, 2048), COMPLEMENT_TOL, label)
        res.record("offset_grid", complement.verify_complement(pair, 2048, 0.5), COMPLEMENT_TOL, label)
        res.record("degree_excess", max(0, pair.qtilde.degree - pair.ptilde.degree), 0, label)
        res.cases += 1
    exact = complement.fejer_riesz(EXACT_PTILDE)
    err = float(np.max(np.abs(exact.qtilde.padded(3) - EXACT_QTILDE)))
    res.record("exact_pair", err, EXACT_PAIR_TOL, "z^2/4 + 1/4")
    res.cases += 1
    return res


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 1:
        return np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng)


def gqsp_suite(cfg: RunConfig, count: int = 200) -> SuiteResult:
    res = SuiteResult("gqsp")
    rng = _rng(cfg.seed, 5)
    for i, target in enumerate(random_targets(cfg.seed + 1, count, 16, cfg.grid_points, cfg.margin)):
        pair = complement.fejer_riesz(target, cfg.grid_points, cfg.complement_tol)
        angles = gqsp.gqsp_angles(pair)
        dim = int(rng.integers(1, 9))
        u = random_unitary(rng, dim)
        op = gqsp.assemble_gqsp(angles, u)
        label = f"#{i}, degree {pair.ptilde.degree}, dim {dim}"
        p_err, q_err = gqsp.block_errors(op, pair, u)
        res.record("block_p", p_err, BLOCK_TOL, label)
        res.record("block_q_gram", q_err, BLOCK_TOL, label)
        res.record("unitarity", op.unitarity_residual, BLOCK_TOL, label)
        res.cases += 1
    return res


def e2e_instances(seed: int, count: int = 100):
    rng = _rng(seed, 6)
    for i in range(count):
        family = FAMILIES[i % len(FAMILIES)]
        dim = int(rng.integers(2, 9))
        m = random_hermitian(rng, dim, family, float(rng.uniform(0.3, 1.0)))
        c = random_coefficients(rng, int(rng.integers(1, 9)))
        yield f"{family}/dim={dim}/#{i}", m, c, random_state(rng, dim)


def e2e_suite(cfg: RunConfig, count: int = 100) -> SuiteResult:
    """Full pipeline: fidelity to the oracle and stability of the success constant."""
    res = SuiteResult("e2e")
    constants = []
    for label, m, c, psi in e2e_instances(cfg.seed, count):
        a = linalg.validate_hermitian(m, cfg.tol_herm, cfg.tol_norm)
        report = circuit.run_pipeline(a, c, psi, cfg)
        res.record("state_norm", report.residuals["state_norm"], 1e-10, label)
        if report.oracle_norm > ORACLE_FLOOR:
            if report.status != "ok":
                res.failures.append(f"unexpected null outcome ({label})")
            else:
                res.record("infidelity", 1 - report.fidelity, FIDELITY_TOL, label)
                constants.append(report.success_constant)
        res.cases += 1

    golden = circuit.run_pipeline(linalg.validate_hermitian(0.5 * np.array([[0, 1], [1, 0]])),
                                  [0, 0, 1], None, cfg)
    res.record("golden_infidelity", 1 - (golden.fidelity or 0.0), GOLDEN_FIDELITY_TOL, "A = X/2, P = x^2")
    res.record("golden_oracle", abs(golden.oracle_norm - 0.25), 1e-12, "A = X/2, P = x^2")
    res.cases += 1
    constants.append(golden.success_constant)

    spread = float(np.max(constants) - np.min(constants))
    res.record("constant_spread", spread, CONSTANT_SPREAD_TOL, "all non-null instances")
    res.extra.update(
        success_constant=float(np.mean(constants)),
        constant_spread=spread,
        claimed_success_constant=circuit.CLAIMED_SUCCESS_CONSTANT,
        unitary_success_constant=circuit.UNITARY_SUCCESS_CONSTANT,
    )
    return res


SUITES: dict[str, Callable[[RunConfig], SuiteResult]] = {
    "power": power_suite,
    "dilation": dilation_suite,
    "chebyshev": chebyshev_suite,
    "complement": complement_suite,
    "gqsp": gqsp_suite,
    "e2e": e2e_suite,
}
assert tuple(SUITES) == STAGES


def run_suites(cfg: RunConfig, stage: Optional[str] = None) -> list[SuiteResult]:
    names = [stage] if stage else list(SUITES)
    results = []
    for name in names:
        try:
            results.append(SUITES[name](cfg))
        except SynthesisError as exc:
            results.append(SuiteResult(name, failures=[f"raised {exc}"]))
    return results
