#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Análise rápida de um relatório de tabela contra os valores publicados
"""

import re
import sys
import argparse
from pathlib import Path

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent / "src"))

from core.report_writer import ReportWriter
from problems.reference_values import TABLES, compare_with_reference


def analyze_results(report_path, table_id=None):
    """Imprime os desvios relativos de cada linha do relatório"""

    print("📊 ANÁLISE DOS RESULTADOS")
    print("=" * 70)

    report_path = Path(report_path)
    if not report_path.exists():
        print(f"❌ Relatório não encontrado: {report_path}")
        return 1

    if table_id is None:
        match = re.search(r"table(\d+)", report_path.stem)
        if match is None:
            print("❌ Informe --table: o nome do arquivo não indica a tabela")
            return 2
        table_id = int(match.group(1))
    if table_id not in TABLES:
        print(f"❌ Tabela {table_id} não existe (use 1–7)")
        return 2

    report = ReportWriter.load_table(report_path)
    print(f"\n📋 Tabela {table_id}: {TABLES[table_id].caption}")
    print("-" * 40)
    print(report.to_string(index=False))

    comparison = compare_with_reference(report, table_id)
    if comparison.empty:
        print("\n⚠️ Nenhuma métrica comparável com os valores publicados")
        return 0

    print(f"\n📏 DESVIOS RELATIVOS AO PUBLICADO:")
    print("-" * 40)
    with pd.option_context("display.float_format", "{:.3e}".format):
        print(comparison.to_string(index=False))

    worst = comparison.loc[comparison["relative_deviation"].abs().idxmax()]
    print(f"\n🔍 Maior desvio: {worst['metric']} em {worst['mesh']} ({worst['relative_deviation']:+.1%})")
    print(f"\n" + "=" * 70)
    print(f"✅ Análise concluída!")
    return 0


def main():
    parser = argparse.ArgumentParser(description="Compara um relatório com os valores publicados")
    parser.add_argument("report", type=Path, help="CSV gerado por `main.py table`")
    parser.add_argument("--table", type=int, default=None, help="Número da tabela (padrão: pelo nome do arquivo)")
    args = parser.parse_args()
    return analyze_results(args.report, args.table)


if __name__ == "__main__":
    sys.exit(main())
