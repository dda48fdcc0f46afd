#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
FRCG Solver - Dual+FRCG: Fletcher-Reeves no problema dual discreto

Este módulo é responsável por:
1. Montar o solver parabólico e o alvo efetivo (superposição de y₀ e f)
2. Iterar gradiente conjugado FR com busca de Armijo a partir de q = 0
3. Reiniciar a direção periodicamente ou quando ela deixa de ser de descida
4. Recuperar (ū, ȳ) e calcular Obj, RelDis e o gap de dualidade

Cada iteração custa uma varredura dual (direção) e uma adjunta (gradiente):
o estado dual do novo ponto vem da combinação afim p_q + ρ p_d.
"""

import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.dual_functional import DualFunctional
from core.primal_recovery import effective_target, primal_objective, recover_primal
from multigrid.hierarchy import MultigridSettings
from parabolic.time_stepping import ParabolicSolver, ProblemSpec
from pipeline.progress_tracker import ProgressTracker
from pipeline.solve_report import SolveReport
from problems.metrics import metrics
from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError, LineSearchError
from utils.logger_config import setup_logger

HISTORY_COLUMNS = ["objective", "gradient_norm", "grad_rel", "step", "initial_step", "backtracks"]


@dataclass(frozen=True)
class FrcgConfig:
    tol: float = 1e-4
    c: float = 0.4
    max_iter: int = 500
    restart_period: int = 50
    initial_step: str = "doubling"
    min_step: float = 1e-3
    max_backtracks: int = 60

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise ConfigurationError(f"Constante de Armijo deve estar em (0, 1), recebeu {self.c}", field="frcg.c")
        if not self.tol > 0.0:
            raise ConfigurationError(f"Tolerância deve ser positiva, recebeu {self.tol}", field="frcg.tol")
        if self.max_iter < 0:
            raise ConfigurationError(f"max_iter inválido: {self.max_iter}", field="frcg.max_iter")
        if self.restart_period < 1:
            raise ConfigurationError(f"restart_period inválido: {self.restart_period}", field="frcg.restart_period")
        if self.initial_step not in ("doubling", "model"):
            raise ConfigurationError(f"initial_step desconhecido: {self.initial_step}", field="frcg.initial_step")
        if not self.min_step > 0.0:
            raise ConfigurationError(f"min_step deve ser positivo, recebeu {self.min_step}", field="frcg.min_step")

    @classmethod
    def from_config(cls, **overrides) -> "FrcgConfig":
        """Valores do config.yaml; `overrides` com None são ignorados"""
        cfg = config_manager.get_frcg_config()
        cfg.update({key: value for key, value in overrides.items() if value is not None})
        return cls(
            tol=float(cfg["tol"]),
            c=float(cfg["c"]),
            max_iter=int(cfg["max_iter"]),
            restart_period=int(cfg["restart_period"]),
            initial_step=str(cfg["initial_step"]),
            min_step=float(cfg["min_step"]),
            max_backtracks=int(cfg["max_backtracks"]),
        )


@dataclass
class FrcgReport(SolveReport):
    restarts: int = 0
    backtracks_total: int = 0
    objectives: list = field(default_factory=list)


class FrcgSolver:
    """
    Dual+FRCG para um ProblemSpec
    """

    def __init__(
        self,
        config: Optional[FrcgConfig] = None,
        settings: Optional[MultigridSettings] = None,
        inner_tol: Optional[float] = None,
        inner_solver: Optional[str] = None,
    ):
        self.logger, _ = setup_logger("frcg", log_to_file=True)
        self.config = config or FrcgConfig.from_config()
        self.settings = settings
        self.inner_tol = inner_tol
        self.inner_solver = inner_solver

    def solve(self, spec: ProblemSpec, parabolic: Optional[ParabolicSolver] = None) -> FrcgReport:
        """
        Executa o Dual+FRCG até ‖g‖_Δt/‖g⁰‖_Δt ≤ tol ou max_iter.

        Args:
            spec: Problema de controle
            parabolic: Solver de varreduras já montado (opcional)

        Returns:
            FrcgReport com histórico, (q̄, p̄), (ū, ȳ) e métricas
        """
        cfg = self.config
        self.logger.info(f"🚀 Dual+FRCG: {spec.name}, nível {spec.level}, N = {spec.grid.N}, γ = {spec.gamma:.1e}")
        started = time.perf_counter()

        solver = parabolic or ParabolicSolver.from_spec(spec, self.settings, self.inner_tol, self.inner_solver)
        target = effective_target(spec, solver)
        functional = DualFunctional(spec, solver, target)
        tracker = ProgressTracker("dual_frcg", HISTORY_COLUMNS)

        q = np.zeros(spec.shape)
        p = np.zeros(spec.shape)  # S*(0) = 0
        evaluation = functional.gradient(q, p)
        g = evaluation.gradient
        J = functional.objective(q, p)
        g_sq = solver.inner_product(g, g)
        g0 = np.sqrt(g_sq)
        grad_rel = 1.0 if g0 > 0 else 0.0
        tracker.record(0, objective=J, gradient_norm=g0, grad_rel=grad_rel)
        objectives = [J]

        d = -g
        previous_step = None
        backtracks_total = 0
        k = 0
        while grad_rel > cfg.tol and k < cfg.max_iter:
            if not solver.inner_product(g, d) < 0.0:
                d = -g
                tracker.count_event("restarts")
                self.logger.warning(f"⚠️ Direção sem descida na iteração {k + 1}: reinício com −g")

            if previous_step is None or cfg.initial_step == "model":
                initial = None
            else:
                initial = max(2.0 * previous_step, cfg.min_step)

            try:
                search = functional.armijo_search(
                    q, g, d, p, J, cfg.c, initial, cfg.max_backtracks, iteration=k + 1
                )
            except LineSearchError:
                self.logger.error(f"❌ Armijo falhou na iteração {k + 1} (J = {J:.6e})")
                raise

            q = q + search.step * d
            p = search.state
            J = search.objective
            previous_step = search.step
            backtracks_total += search.backtracks

            evaluation = functional.gradient(q, p)
            g_new = evaluation.gradient
            g_new_sq = solver.inner_product(g_new, g_new)
            k += 1
            grad_rel = np.sqrt(g_new_sq) / g0
            tracker.record(
                k,
                objective=J,
                gradient_norm=np.sqrt(g_new_sq),
                grad_rel=grad_rel,
                step=search.step,
                initial_step=search.initial_step,
                backtracks=search.backtracks,
            )
            objectives.append(J)

            if k % cfg.restart_period == 0:
                d = -g_new
                tracker.count_event("restarts")
            else:
                d = -g_new + (g_new_sq / g_sq) * d
            g, g_sq = g_new, g_new_sq

        converged = grad_rel <= cfg.tol
        if converged:
            self.logger.success(f"✅ Dual+FRCG convergiu em {k} iterações (‖g‖ relativo {grad_rel:.3e})")
        else:
            self.logger.warning(f"⚠️ Dual+FRCG parou em max_iter = {cfg.max_iter} (‖g‖ relativo {grad_rel:.3e})")

        solution = recover_primal(spec, q, p)
        primal_value, _ = primal_objective(spec, solver, solution.control)
        obj, reldis = metrics(spec, solver, solution)
        wall_time = time.perf_counter() - started
        self.logger.info(f"📊 Obj = {obj:.3e}, RelDis = {reldis:.3e}, gap = {primal_value + J:.3e}, {wall_time:.1f}s")
        self.logger.debug(tracker.generate_summary_report())

        return FrcgReport(
            algorithm="dual_frcg",
            problem=spec.name,
            level=spec.level,
            gamma=spec.gamma,
            iterations=k,
            converged=converged,
            wall_time_s=wall_time,
            q=q,
            p=p,
            solution=solution,
            dual_objective=J,
            primal_objective=primal_value,
            obj=obj,
            reldis=reldis,
            history=tracker.to_dataframe(),
            sweeps=dict(solver.sweep_counts),
            restarts=tracker.events.get("restarts", 0),
            backtracks_total=backtracks_total,
            objectives=objectives,
        )


def main():
    """Demonstração: Exemplo 1 no nível 3"""
    from problems.benchmarks import build_example1

    spec, exact = build_example1(1e-3, 3)
    report = FrcgSolver().solve(spec)
    print(f"Iterações: {report.iterations}, Obj = {report.obj:.3e}, RelDis = {report.reldis:.3e}")


if __name__ == "__main__":
    main()
