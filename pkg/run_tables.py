#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Script para reproduzir todas as tabelas (1–7) em sequência
"""

import sys
import argparse
from pathlib import Path

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from main import RunOrchestrator
from problems.reference_values import TABLES
from utils.exceptions import DualOcpError


def main():
    """Roda as tabelas pedidas; linhas prontas vêm do cache"""

    parser = argparse.ArgumentParser(description="Reproduz as tabelas 1–7")
    parser.add_argument("--tables", type=str, default="1,2,3,4,5,6,7", help="Tabelas, ex.: 1,3,5")
    parser.add_argument("--max-level", type=int, default=6, help="Nível máximo de malha")
    parser.add_argument("--yes", action="store_true", help="Não pedir confirmação")
    args = parser.parse_args()

    print("🌍 REPRODUÇÃO DAS TABELAS")
    print("=" * 60)
    print()
    print("⚠️  ATENÇÃO: níveis 7 e 8 podem demorar várias horas!")
    print("💾 Linhas terminadas são salvas automaticamente via cache")
    print("🔄 Se interrompido, pode ser retomado executando novamente")
    print()

    if not args.yes:
        response = input("Deseja continuar? (s/N): ").lower().strip()
        if response not in ["s", "sim", "y", "yes"]:
            print("❌ Execução cancelada pelo usuário")
            return 0

    orchestrator = RunOrchestrator()
    tables = [int(part) for part in args.tables.split(",") if part.strip()]

    try:
        for table_id in tables:
            levels = [level for level in TABLES[table_id].levels if level <= args.max_level]
            print(f"\n🚀 Tabela {table_id} ({TABLES[table_id].caption}), níveis {levels}")
            print("-" * 60)
            path, frame = orchestrator.run_table(table_id, levels, baseline=True)
            print(frame.to_string(index=False))
            print(f"   ✅ {path}")

    except KeyboardInterrupt:
        print(f"\n⚠️ PROCESSO INTERROMPIDO PELO USUÁRIO")
        print(f"💾 Linhas terminadas foram salvas no cache")
        return 1

    except DualOcpError as e:
        print(f"\n💥 ERRO: {str(e)}")
        print(f"🔄 Execute novamente para continuar das linhas em cache")
        return 1

    print(f"\n💡 Próximo passo: python analyze_results.py data/results/table1.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
