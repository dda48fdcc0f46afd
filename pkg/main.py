#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Dual Parabolic Control - Main Entry Point

Ponto de entrada da linha de comando: solvers duais (FRCG e SSN) para
controle ótimo parabólico e elíptico com restrições de caixa.
"""

import sys
import argparse
from pathlib import Path

# Adicionar src ao path para imports
sys.path.insert(0, str(Path(__file__).parent / "src"))

from utils.logger_config import setup_logger, log_exception
from utils.exceptions import ConfigurationError, SolverError
from utils.run_config import load_run_file

EXIT_OK, EXIT_SOLVER_FAILURE, EXIT_CONFIG_ERROR = 0, 1, 2


def parse_levels(text):
    """'4-6' → [4, 5, 6]; '5,7' → [5, 7]; '' → []"""
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    if "-" in text:
        start, end = text.split("-", 1)
        return list(range(int(start), int(end) + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def parse_floats(text):
    if text is None:
        return None
    return [float(part) for part in text.split(",") if part.strip()]


def build_parser():
    parser = argparse.ArgumentParser(
        description="Dual Parabolic Control - Dual+FRCG e Dual+SSN",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplos de uso:
  python main.py solve runs/example1.yaml       # Resolver os runs de um arquivo
  python main.py table 1 --levels 4-6          # Tabela 1 nos níveis 4 a 6
  python main.py table 3 --baseline            # Tabela 3 + valores publicados
  python main.py spectrum --level 2 --steps 4  # Estudo espectral do precondicionador
  python main.py verify                        # Suíte de invariantes
        """,
    )
    parser.add_argument("--no-cache", action="store_true", help="Ignorar linhas já calculadas no cache")
    parser.add_argument("--output-dir", type=Path, default=None, help="Diretório dos relatórios")
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="Resolver os runs de um arquivo YAML")
    solve.add_argument("config", type=Path, help="Arquivo de run (YAML)")
    solve.add_argument("--output", type=Path, default=None, help="CSV de saída")

    table = subparsers.add_parser("table", help="Reproduzir uma tabela (1–7)")
    table.add_argument("table_id", type=int, help="Número da tabela")
    table.add_argument("--levels", type=str, default=None, help="Níveis, ex.: 4-6 ou 5,7 (vazio: só cabeçalho)")
    table.add_argument("--baseline", action="store_true", help="Gravar também os valores publicados")
    table.add_argument("--algorithm", type=str, default=None, help="inexact_admm | ssn: somente referência")
    table.add_argument("--output", type=Path, default=None, help="CSV de saída")

    spectrum = subparsers.add_parser("spectrum", help="Estudo espectral denso de ℂₖ⁻¹Cₖ")
    spectrum.add_argument("--level", type=int, default=2)
    spectrum.add_argument("--steps", type=int, default=4, help="Número de passos de tempo N")
    spectrum.add_argument("--gammas", type=str, default=None, help="Lista de γ, ex.: 1e-2,1e-4")
    spectrum.add_argument("--patterns", type=str, default=None, help="none,full,random,checker")
    spectrum.add_argument("--output", type=Path, default=None, help="CSV de saída")

    verify = subparsers.add_parser("verify", help="Executar a suíte de invariantes")
    verify.add_argument("--level", type=int, default=2)
    verify.add_argument("--steps", type=int, default=4)
    verify.add_argument("--seed", type=int, default=None, help="Semente das checagens aleatórias (padrão: verification.seed)")
    verify.add_argument("--config", type=Path, default=None, help="Arquivo de run: uma suíte por run, com a semente e o nível (até 3) do run")
    return parser


def main(argv=None):
    """Função principal do programa"""
    args = build_parser().parse_args(argv)
    logger, _ = setup_logger("cli", log_to_file=True)

    try:
        from main import RunOrchestrator

        orchestrator = RunOrchestrator(use_cache=not args.no_cache, output_dir=args.output_dir)

        if args.command == "solve":
            return orchestrator.cmd_solve(args.config, args.output)

        if args.command == "table":
            path, frame = orchestrator.run_table(
                args.table_id, parse_levels(args.levels), args.baseline, args.algorithm, args.output
            )
            print(frame.to_string(index=False))
            print(f"📁 {path}")
            return EXIT_OK

        if args.command == "spectrum":
            patterns = args.patterns.split(",") if args.patterns else None
            code, frame = orchestrator.run_spectrum(
                args.level, args.steps, parse_floats(args.gammas), patterns, args.output
            )
            print(frame.to_string(index=False))
            return code

        if args.command == "verify":
            if args.config is None:
                code, summary = orchestrator.run_verify(args.level, args.steps, args.seed)
                print(summary.to_string(index=False))
                return code
            codes = []
            for run in load_run_file(args.config):
                code, summary = orchestrator.run_verify(min(run.level, 3), min(run.N, 8), run.seed)
                print(f"{run.name} (semente {run.seed})")
                print(summary.to_string(index=False))
                codes.append(code)
            return max(codes)

    except ConfigurationError as e:
        logger.error(f"❌ Configuração inválida: {e}")
        return EXIT_CONFIG_ERROR
    except SolverError as e:
        logger.error(f"❌ Falha do solver: {e}")
        return EXIT_SOLVER_FAILURE
    except Exception:
        log_exception(logger, exit_after=False)
        return EXIT_SOLVER_FAILURE

    return EXIT_OK


if __name__ == "__main__":
    exit_code = main()
    sys.exit(exit_code)
