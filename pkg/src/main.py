#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
RUN ORCHESTRATOR - Coordena solves, tabelas, estudo espectral e verificação

Este é o coordenador usado pela CLI:

1. solve: lê um arquivo de run, resolve cada run e grava as linhas de relatório
2. table: reproduz as linhas Dual+FRCG / Dual+SSN de uma tabela (1–7)
3. spectrum: estudo espectral denso do precondicionador
4. verify: suíte de invariantes numéricos

Linhas terminadas ficam no cache (hash da configuração do run), então
rodar uma tabela de novo só resolve o que falta.
"""

import math
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import pandas as pd

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent))

from core.cache_manager import CacheManager
from core.report_writer import ReportWriter
from multigrid.hierarchy import MultigridSettings
from parabolic.time_stepping import ParabolicSolver
from pipeline.frcg_solver import FrcgConfig, FrcgSolver
from pipeline.solve_report import REPORT_COLUMNS, SolveReport, mesh_label
from pipeline.spectral_study import spectral_study
from pipeline.ssn_solver import SsnConfig, SsnSolver
from problems.benchmarks import build_problem
from problems.metrics import error_norms
from problems.reference_values import TABLES, reference_table
from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError, SolverError
from utils.logger_config import setup_logger
from utils.run_config import RunConfig, load_run_file

EXIT_OK = 0
EXIT_SOLVER_FAILURE = 1
EXIT_CONFIG_ERROR = 2

ALGORITHMS = {"frcg": "dual_frcg", "ssn": "dual_ssn"}
REFERENCE_ONLY = ("inexact_admm", "ssn")
# Muda quando a definição de Obj/RelDis muda; invalida linhas antigas do cache
METRICS_VERSION = 2


class RunOrchestrator:
    """
    Orquestrador dos runs da CLI
    """

    def __init__(self, use_cache: bool = True, output_dir: Optional[Path] = None):
        self.logger, _ = setup_logger("run_orchestrator", log_to_file=True)
        self.output_config = config_manager.get_output_config()
        cache_config = config_manager.get_cache_config()

        self.output_dir = Path(output_dir) if output_dir else self.output_config["results_directory"]
        self.fields_dir = self.output_config["fields_directory"]
        self.writer = ReportWriter(self.output_dir)
        self.cache_manager = CacheManager(cache_config["cache_directory"], enabled=use_cache and cache_config["enabled"])
        self.logger.debug(f"🎯 Run Orchestrator: saída em {self.output_dir}")

    # ------------------------------------------------------------------
    # Solve
    # ------------------------------------------------------------------

    @staticmethod
    def build_solver(run: RunConfig):
        if run.solver == "frcg":
            return FrcgSolver(FrcgConfig.from_config(tol=run.tol, c=run.c), inner_solver=run.inner_solver)
        return SsnSolver(SsnConfig.from_config(tol=run.tol, elliptic_tol=run.tol), inner_solver=run.inner_solver)

    def resolved_settings(self, run: RunConfig) -> Dict[str, object]:
        """Configurações efetivas de um run; entram na chave do cache"""
        parabolic = config_manager.get_parabolic_config()
        return {
            "solver_config": asdict(self.build_solver(run).config),
            "multigrid": asdict(MultigridSettings.from_config()),
            "inner_tol": float(parabolic["inner_tol"]),
            "inner_solver": run.inner_solver or parabolic["inner_solver"],
            "metrics_version": METRICS_VERSION,
        }

    def solve_run(self, run: RunConfig) -> Tuple[Dict[str, object], SolveReport]:
        """
        Resolve um run e calcula os erros quando há solução de referência.

        Returns:
            tuple: (linha de relatório, SolveReport)
        """
        self.logger.info(f"🔍 Run {run.name}: {run.problem}, {run.solver}, nível {run.level}, γ = {run.gamma:.0e}")
        spec, exact = build_problem(run.problem, run.gamma, run.level, run.N, run.custom)
        solver = self.build_solver(run)
        parabolic = ParabolicSolver.from_spec(spec, inner_solver=run.inner_solver)
        report = solver.solve(spec, parabolic=parabolic)

        if exact is not None:
            report.err_u, report.err_y = error_norms(spec, parabolic, report.solution, exact)
            self.logger.info(f"📏 e_u = {report.err_u:.3e}, e_y = {report.err_y:.3e}")

        if run.dump_fields or self.output_config["dump_fields"]:
            self.dump_fields(run, spec, report)
        return report.as_row(), report

    def dump_fields(self, run: RunConfig, spec, report: SolveReport) -> List[Path]:
        coordinates = spec.mesh.interior_coordinates
        nodes = spec.mesh.interior_nodes
        fields = {"control": report.control, "state": report.state, "q": report.q, "p": report.p}
        paths = [
            self.writer.write_field_dump(values, coordinates, Path(self.fields_dir) / f"{run.name}_{name}.txt", nodes)
            for name, values in fields.items()
        ]
        history = report.history
        paths.append(
            self.writer.write_table(
                history.to_dict("records"), list(history.columns), Path(self.fields_dir) / f"{run.name}_history.csv"
            )
        )
        return paths

    @staticmethod
    def failure_row(run: RunConfig, error: SolverError) -> Dict[str, object]:
        """Linha parcial para um run que falhou"""
        row = {column: math.nan for column in REPORT_COLUMNS}
        row.update(mesh=mesh_label(run.level), algorithm=ALGORITHMS[run.solver])
        row["iter"] = getattr(error, "iterations", getattr(error, "iteration", math.nan))
        return row

    def cmd_solve(self, config_path: Path, output: Optional[Path] = None) -> int:
        """
        Executa todos os runs de um arquivo; para no primeiro erro de solver
        gravando o relatório até ali.
        """
        try:
            runs = load_run_file(config_path)
        except ConfigurationError as e:
            self.logger.error(f"❌ Configuração inválida: {e}")
            return EXIT_CONFIG_ERROR

        rows = []
        exit_code = EXIT_OK
        for run in runs:
            try:
                row, _ = self.solve_run(run)
            except ConfigurationError as e:
                self.logger.error(f"❌ Run {run.name}: {e}")
                exit_code = EXIT_CONFIG_ERROR
                break
            except SolverError as e:
                self.logger.error(f"❌ Run {run.name} falhou: {e}")
                rows.append(self.failure_row(run, e))
                exit_code = EXIT_SOLVER_FAILURE
                break
            rows.append(row)

        target = output or (runs[0].output if len(runs) == 1 and runs[0].output else f"{Path(config_path).stem}_report.csv")
        self.writer.write_report(rows, target)
        return exit_code

    # ------------------------------------------------------------------
    # Tabelas
    # ------------------------------------------------------------------

    def run_table(
        self,
        table_id: int,
        levels: Optional[Iterable[int]] = None,
        baseline: bool = False,
        algorithm: Optional[str] = None,
        output: Optional[Path] = None,
    ) -> Tuple[Path, pd.DataFrame]:
        """
        Reproduz as linhas do repositório de uma tabela.

        Args:
            table_id: 1..7
            levels: Níveis de malha (padrão: os da tabela); vazio gera só o cabeçalho
            baseline: Também grava os valores publicados lado a lado
            algorithm: "inexact_admm"/"ssn" são só de referência e nunca executam

        Returns:
            tuple: (caminho do CSV, DataFrame)
        """
        if table_id not in TABLES:
            raise ConfigurationError(f"Tabela {table_id} não existe (use 1–7)", field="table")
        definition = TABLES[table_id]
        levels = list(definition.levels if levels is None else levels)

        if algorithm in REFERENCE_ONLY:
            self.logger.warning(f"⚠️ '{algorithm}' é somente referência: valores publicados, nenhum solve executado")
            reference = reference_table(table_id)
            reference = reference[reference["algorithm"] == algorithm]
            path = self.writer.write_table(
                reference.to_dict("records"), list(reference.columns), output or f"table{table_id}_{algorithm}_reference.csv"
            )
            return path, reference

        self.logger.info(f"📋 Tabela {table_id}: {definition.caption}, níveis {levels}")
        rows = []
        for level in levels:
            run = RunConfig(definition.problem, definition.gamma, int(level), definition.solver)
            key = run.cache_key_fields(self.resolved_settings(run))
            row = self.cache_manager.load_row(key)
            if row is None:
                row, _ = self.solve_run(run)
                self.cache_manager.save_row(key, row)
            rows.append(row)

        path = self.writer.write_report(rows, output or f"table{table_id}.csv")
        frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)

        if baseline:
            reference = reference_table(table_id)
            self.writer.write_table(
                reference.to_dict("records"), list(reference.columns), f"table{table_id}_reference.csv"
            )
            self.logger.info(f"📚 Valores publicados da tabela {table_id}:\n{reference.to_string(index=False)}")
        return path, frame

    # ------------------------------------------------------------------
    # Espectro e verificação
    # ------------------------------------------------------------------

    def run_spectrum(
        self,
        level: int = 2,
        N: int = 4,
        gammas: Optional[List[float]] = None,
        patterns: Optional[List[str]] = None,
        output: Optional[Path] = None,
    ) -> Tuple[int, pd.DataFrame]:
        """Exit 0 se todas as cotas valem, 1 caso contrário"""
        table = spectral_study(level=level, N=N, gammas=gammas, patterns=patterns)
        self.writer.write_spectrum(table, output or f"spectrum_l{level}_N{N}.csv")
        failures = int((~table["passed"]).sum())
        if failures:
            self.logger.error(f"❌ {failures} linhas violam as cotas espectrais")
            return EXIT_SOLVER_FAILURE, table
        self.logger.success(f"✅ Todas as {len(table)} linhas respeitam as cotas")
        return EXIT_OK, table

    def run_verify(self, level: int = 2, N: int = 4, seed: Optional[int] = None) -> Tuple[int, pd.DataFrame]:
        from testing.verification_suite import VerificationSuite

        summary = VerificationSuite(level, N, seed=seed).run()
        self.writer.write_table(summary.to_dict("records"), list(summary.columns), f"verify_l{level}.csv")
        return (EXIT_OK if bool(summary["passed"].all()) else EXIT_SOLVER_FAILURE), summary


def main():
    """Demonstração: tabela 1 no nível 3 (sem cache)"""
    orchestrator = RunOrchestrator(use_cache=False)
    path, frame = orchestrator.run_table(1, levels=[3])
    print(frame.to_string(index=False))
    print(f"📁 {path}")


if __name__ == "__main__":
    main()
