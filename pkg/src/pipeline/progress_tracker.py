#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Progress Tracker - Histórico por iteração de um solve

Este módulo é responsável por:
1. Registrar cada iteração externa (objetivo, gradiente/resíduo, passo, PCG)
2. Montar o DataFrame do histórico
3. Gerar estatísticas e um relatório resumido em texto
"""

from datetime import datetime
from typing import Any, Dict, List

import pandas as pd

from utils.logger_config import setup_logger


class ProgressTracker:
    """
    Histórico de iterações de um solver (Dual+FRCG ou Dual+SSN)
    """

    def __init__(self, algorithm: str, columns: List[str]):
        self.logger, _ = setup_logger("progress_tracker", log_to_file=True)
        self.algorithm = algorithm
        self.columns = ["iteration"] + [c for c in columns if c != "iteration"]
        self._records: List[Dict[str, Any]] = []
        self.started_at = datetime.now()
        self.events: Dict[str, int] = {}

    def record(self, iteration: int, **values: Any) -> None:
        """Registra uma iteração; colunas desconhecidas são ignoradas"""
        row = {"iteration": iteration}
        row.update({key: value for key, value in values.items() if key in self.columns})
        self._records.append(row)
        details = ", ".join(
            f"{key}={value:.3e}" if isinstance(value, float) else f"{key}={value}"
            for key, value in row.items()
            if key != "iteration"
        )
        self.logger.debug(f"🔁 {self.algorithm} it {iteration}: {details}")

    def count_event(self, name: str) -> None:
        """Eventos pontuais (reinícios, avisos de ciclo)"""
        self.events[name] = self.events.get(name, 0) + 1

    def __len__(self) -> int:
        return len(self._records)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self._records, columns=self.columns)

    def get_statistics(self) -> Dict[str, Any]:
        history = self.to_dataframe()
        stats: Dict[str, Any] = {
            "algorithm": self.algorithm,
            "timestamp": datetime.now().isoformat(),
            "iterations": int(history["iteration"].max()) if len(history) else 0,
            "events": dict(self.events),
        }
        for name in self.columns[1:]:
            if name in history and pd.api.types.is_numeric_dtype(history[name]) and len(history):
                stats[name] = {
                    "first": float(history[name].iloc[0]),
                    "last": float(history[name].iloc[-1]),
                    "mean": float(history[name].mean()),
                    "max": float(history[name].max()),
                }
        return stats

    def generate_summary_report(self) -> str:
        stats = self.get_statistics()
        report = f"""
📊 HISTÓRICO DE ITERAÇÕES - {self.algorithm}
═══════════════════════════════════════════

🕐 Gerado em: {datetime.now().strftime('%d/%m/%Y %H:%M:%S')}
🔁 Iterações: {stats['iterations']}
"""
        for name in self.columns[1:]:
            if name in stats:
                values = stats[name]
                report += f"├─ {name}: primeira {values['first']:.3e} → última {values['last']:.3e}\n"
        if self.events:
            report += "\n⚠️ EVENTOS\n"
            for name, count in self.events.items():
                report += f"├─ {name}: {count}\n"
        return report
