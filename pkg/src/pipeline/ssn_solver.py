#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
SSN Solver - Dual+SSN: Newton semismooth no sistema de otimalidade dual

Este módulo é responsável por:
1. Avaliar F(z, p) = [ℳ(z − y_d) + 𝒦ᵀp ; 𝒦z − ℳ1 Pr(p/γ)]
2. Resolver F′Δ = −F em três etapas: eliminação com 𝒦ℳ⁻¹, PCG em Cₖ
   (precondicionado por ℂₖ) e retro-substituição para Δz
3. Iterar passos completos até ‖𝒦z − ℳ1 Pr(p/γ)‖ ≤ tol
4. Recuperar q̄ = y_d − z, (ū, ȳ) e as métricas do relatório

Após o primeiro passo r₁ é zero (a primeira equação é linear); o teste de
parada usa a norma √(Δt Σ r₂ᵀM⁻¹r₂), independente da malha.
"""

import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.dual_functional import DualFunctional
from core.primal_recovery import effective_target, primal_objective, recover_primal
from linalg.pcg import PcgResult, pcg_solve
from multigrid.hierarchy import MultigridSettings
from parabolic.time_stepping import ParabolicSolver, ProblemSpec
from pipeline.progress_tracker import ProgressTracker
from pipeline.solve_report import SolveReport
from pipeline.ssn_preconditioner import ActiveSets, FactorizedPreconditioner, SchurComplementOperator
from problems.metrics import metrics
from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError, ConvergenceError
from utils.logger_config import setup_logger

HISTORY_COLUMNS = ["residual", "residual_r1", "pcg_iterations", "pcg_residual", "active_nodes", "set_changes"]


@dataclass(frozen=True)
class SsnConfig:
    tol: float = 1e-4
    elliptic_tol: float = 1e-8
    pcg_tol: float = 1e-6
    pcg_max_iter: int = 500
    max_outer: int = 50
    exact_inner: bool = False
    precond_cycles: int = 2

    def __post_init__(self):
        for name in ("tol", "elliptic_tol", "pcg_tol"):
            if not getattr(self, name) > 0.0:
                raise ConfigurationError(f"{name} deve ser positivo, recebeu {getattr(self, name)}", field=f"ssn.{name}")
        if self.pcg_max_iter < 1:
            raise ConfigurationError(f"pcg_max_iter inválido: {self.pcg_max_iter}", field="ssn.pcg_max_iter")
        if self.max_outer < 1:
            raise ConfigurationError(f"max_outer inválido: {self.max_outer}", field="ssn.max_outer")
        if self.precond_cycles < 1:
            raise ConfigurationError(f"precond_cycles deve ser ≥ 1, recebeu {self.precond_cycles}", field="multigrid.precond_cycles")

    @classmethod
    def from_config(cls, **overrides) -> "SsnConfig":
        cfg = config_manager.get_ssn_config()
        cfg["precond_cycles"] = config_manager.get_multigrid_config()["precond_cycles"]
        cfg.update({key: value for key, value in overrides.items() if value is not None})
        return cls(
            tol=float(cfg["tol"]),
            elliptic_tol=float(cfg["elliptic_tol"]),
            pcg_tol=float(cfg["pcg_tol"]),
            pcg_max_iter=int(cfg["pcg_max_iter"]),
            max_outer=int(cfg["max_outer"]),
            exact_inner=bool(cfg["exact_inner"]),
            precond_cycles=int(cfg["precond_cycles"]),
        )

    def tolerance_for(self, spec: ProblemSpec) -> float:
        return self.elliptic_tol if spec.stationary else self.tol


@dataclass
class SsnState:
    z: np.ndarray
    p: np.ndarray
    active: ActiveSets
    residual: float = float("nan")
    pcg_iterations: List[int] = field(default_factory=list)


@dataclass
class SsnReport(SolveReport):
    krylov_total: int = 0
    pcg_iterations: List[int] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    set_changes: List[int] = field(default_factory=list)
    settled_steps_exact: bool = True


class SsnSolver:
    """
    Dual+SSN para um ProblemSpec (parabólico ou estacionário)
    """

    def __init__(
        self,
        config: Optional[SsnConfig] = None,
        settings: Optional[MultigridSettings] = None,
        inner_tol: Optional[float] = None,
        inner_solver: Optional[str] = None,
    ):
        self.logger, _ = setup_logger("ssn", log_to_file=True)
        self.config = config or SsnConfig.from_config()
        self.settings = settings
        self.inner_tol = inner_tol
        self.inner_solver = inner_solver

    # ------------------------------------------------------------------
    # Peças do Newton
    # ------------------------------------------------------------------

    @staticmethod
    def residual_F(
        solver: ParabolicSolver, spec: ProblemSpec, z: np.ndarray, p: np.ndarray, target: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """r₁ = ℳ(z − y_d) + 𝒦ᵀp, r₂ = 𝒦z − ℳ1 Pr(p/γ)"""
        r1 = solver.mass * (z - target) + solver.apply_Kcal_transpose(p)
        r2 = solver.apply_Kcal(z) - solver.control_mass * spec.bounds.project(p / spec.gamma)
        return r1, r2

    @staticmethod
    def residual_norm(solver: ParabolicSolver, r: np.ndarray) -> float:
        """√(Δt Σ rᵀM⁻¹r)"""
        return float(np.sqrt(solver.grid.dt * np.sum(r * r / solver.mass)))

    def build_preconditioner(self, solver: ParabolicSolver, active: ActiveSets, gamma: float) -> FactorizedPreconditioner:
        exact = self.config.exact_inner or solver.hierarchy is None
        return FactorizedPreconditioner(solver, active, gamma, self.config.precond_cycles, exact)

    def newton_step(
        self, solver: ParabolicSolver, spec: ProblemSpec, state: SsnState, target: np.ndarray, iteration: int = 0
    ) -> Tuple[SsnState, PcgResult]:
        """
        Um passo completo de Newton com Πₖ do p atual.

        Returns:
            tuple: (novo estado, resultado do PCG em Cₖ)
        """
        r1, r2 = self.residual_F(solver, spec, state.z, state.p, target)
        d1, d2 = -r1, -r2

        # (a) eliminação: d̂₂ = d₂ − 𝒦ℳ⁻¹d₁
        d2_hat = d2 - solver.apply_Kcal(d1 / solver.mass)

        # (b) Cₖ Δp = −d̂₂
        schur = SchurComplementOperator(solver, state.active, spec.gamma)
        preconditioner = self.build_preconditioner(solver, state.active, spec.gamma)
        pcg = pcg_solve(schur, -d2_hat, preconditioner, self.config.pcg_tol, self.config.pcg_max_iter)
        if not pcg.converged:
            raise ConvergenceError(f"PCG em Cₖ não convergiu no passo de Newton {iteration}", pcg.iterations, pcg.residual)

        # (c) Δz = ℳ⁻¹(d₁ − 𝒦ᵀΔp)
        delta_p = pcg.x
        delta_z = (d1 - solver.apply_Kcal_transpose(delta_p)) / solver.mass

        p = state.p + delta_p
        new_state = SsnState(
            z=state.z + delta_z,
            p=p,
            active=ActiveSets.from_dual_state(p, spec.gamma, spec.bounds),
            pcg_iterations=state.pcg_iterations + [pcg.iterations],
        )
        return new_state, pcg

    # ------------------------------------------------------------------
    # Laço externo
    # ------------------------------------------------------------------

    def solve(
        self,
        spec: ProblemSpec,
        parabolic: Optional[ParabolicSolver] = None,
        z0: Optional[np.ndarray] = None,
        p0: Optional[np.ndarray] = None,
    ) -> SsnReport:
        """
        Executa o Dual+SSN a partir de (z⁰, p⁰) (zero por padrão).

        Args:
            spec: Problema de controle
            parabolic: Solver de varreduras já montado (opcional)
            z0, p0: Ponto inicial (testes de unicidade)

        Returns:
            SsnReport com Iter, Mean/Max CG, Obj, RelDis e histórico
        """
        tol = self.config.tolerance_for(spec)
        self.logger.info(
            f"🚀 Dual+SSN: {spec.name}, nível {spec.level}, N = {spec.grid.N}, γ = {spec.gamma:.1e}, tol = {tol:.0e}"
        )
        started = time.perf_counter()

        solver = parabolic or ParabolicSolver.from_spec(spec, self.settings, self.inner_tol, self.inner_solver)
        target = effective_target(spec, solver)
        tracker = ProgressTracker("dual_ssn", HISTORY_COLUMNS)

        z = np.zeros(spec.shape) if z0 is None else np.array(z0, dtype=float)
        p = np.zeros(spec.shape) if p0 is None else np.array(p0, dtype=float)
        state = SsnState(z, p, ActiveSets.from_dual_state(p, spec.gamma, spec.bounds))

        residuals: List[float] = []
        set_changes: List[int] = []
        settled_exact = True
        converged = False
        k = 0
        while k < self.config.max_outer:
            previous = state
            state, pcg = self.newton_step(solver, spec, state, target, iteration=k + 1)
            k += 1

            r1, r2 = self.residual_F(solver, spec, state.z, state.p, target)
            state.residual = self.residual_norm(solver, r2)
            residuals.append(state.residual)
            changes = state.active.changes(previous.active)
            set_changes.append(changes)
            tracker.record(
                k,
                residual=state.residual,
                residual_r1=self.residual_norm(solver, r1),
                pcg_iterations=pcg.iterations,
                pcg_residual=pcg.residual,
                active_nodes=state.active.size,
                set_changes=changes,
            )

            # F é linear por partes: com os ramos fixos o passo é exato até a tolerância do PCG
            if changes == 0 and k > 1:
                _, previous_r2 = self.residual_F(solver, spec, previous.z, previous.p, target)
                bound = 10.0 * self.config.pcg_tol * np.linalg.norm(previous_r2) + 1e-14
                if np.linalg.norm(r2) > bound:
                    settled_exact = False
                    self.logger.warning(f"⚠️ Passo {k} com ramos fixos deixou resíduo {np.linalg.norm(r2):.3e}")

            if state.residual <= tol:
                converged = True
                break

        if not converged:
            self.logger.error(f"❌ Dual+SSN não convergiu em {k} passos (resíduo {state.residual:.3e})")
            raise ConvergenceError("Dual+SSN atingiu max_outer", k, state.residual)

        pcg_counts = state.pcg_iterations
        self.logger.success(
            f"✅ Dual+SSN convergiu em {k} passos (resíduo {state.residual:.3e}, PCG {sum(pcg_counts)})"
        )

        q = target - state.z
        functional = DualFunctional(spec, solver, target)
        p_bar = state.p
        solution = recover_primal(spec, q, p_bar)
        dual_value = functional.objective(q, p_bar)
        primal_value, _ = primal_objective(spec, solver, solution.control)
        obj, reldis = metrics(spec, solver, solution)
        wall_time = time.perf_counter() - started
        self.logger.info(f"📊 Obj = {obj:.3e}, RelDis = {reldis:.3e}, gap = {primal_value + dual_value:.3e}, {wall_time:.1f}s")
        self.logger.debug(tracker.generate_summary_report())

        return SsnReport(
            algorithm="dual_ssn",
            problem=spec.name,
            level=spec.level,
            gamma=spec.gamma,
            iterations=k,
            converged=converged,
            wall_time_s=wall_time,
            q=q,
            p=p_bar,
            solution=solution,
            dual_objective=dual_value,
            primal_objective=primal_value,
            obj=obj,
            reldis=reldis,
            history=tracker.to_dataframe(),
            sweeps=dict(solver.sweep_counts),
            mean_cg=float(np.mean(pcg_counts)),
            max_cg=float(np.max(pcg_counts)),
            krylov_total=int(sum(pcg_counts)),
            pcg_iterations=list(pcg_counts),
            residuals=residuals,
            set_changes=set_changes,
            settled_steps_exact=settled_exact,
        )


def main():
    """Demonstração: Exemplo 1, γ = 1e-5, nível 3"""
    from problems.benchmarks import build_example1

    spec, exact = build_example1(1e-5, 3)
    report = SsnSolver().solve(spec)
    print(f"Iterações: {report.iterations}, CG médio/máx {report.mean_cg:.2f}/{report.max_cg:.0f}, Obj = {report.obj:.3e}")


if __name__ == "__main__":
    main()
