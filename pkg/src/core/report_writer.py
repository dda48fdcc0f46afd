#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Report Writer - Exportação de relatórios e campos

Este módulo é responsável por:
1. Escrever tabelas de relatório (CSV com cabeçalho de versão de schema)
2. Escrever a tabela do estudo espectral
3. Escrever dumps de campos nodais em texto puro
4. Carregar relatórios de volta para análise

Reais saem com %.6e: mesma entrada, mesmo arquivo byte a byte (exceto a
coluna de tempo de parede).
"""

import sys
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent))

from utils.exceptions import DimensionMismatchError
from utils.logger_config import setup_logger

SCHEMA_VERSION = 1
SCHEMA_HEADER = f"# schema_version: {SCHEMA_VERSION}"
FLOAT_FORMAT = "%.6e"


class ReportWriter:
    """
    Escreve relatórios CSV e dumps de campos num diretório de saída
    """

    def __init__(self, output_dir: Union[str, Path] = "data/results"):
        self.logger, _ = setup_logger("report_writer", log_to_file=True)
        self.output_dir = Path(output_dir)

    def _resolve(self, file_name: Union[str, Path]) -> Path:
        path = Path(file_name)
        if not path.is_absolute() and path.parent == Path("."):
            path = self.output_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def write_table(self, rows: List[Dict[str, object]], columns: List[str], file_name: Union[str, Path]) -> Path:
        """
        CSV com a linha de schema e colunas na ordem dada; lista vazia gera
        só o cabeçalho.

        Args:
            rows: Linhas (dicts) do relatório
            columns: Ordem fixa das colunas
            file_name: Nome do arquivo (relativo ao diretório de saída) ou caminho

        Returns:
            Caminho do arquivo escrito
        """
        path = self._resolve(file_name)
        frame = pd.DataFrame(rows, columns=columns)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(SCHEMA_HEADER + "\n")
            frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        self.logger.info(f"💾 Relatório salvo: {path} ({len(frame)} linhas)")
        return path

    def write_report(self, rows: List[Dict[str, object]], file_name: Union[str, Path]) -> Path:
        from pipeline.solve_report import REPORT_COLUMNS

        return self.write_table(rows, REPORT_COLUMNS, file_name)

    def write_spectrum(self, table: pd.DataFrame, file_name: Union[str, Path]) -> Path:
        from pipeline.spectral_study import SPECTRUM_COLUMNS

        return self.write_table(table.to_dict("records"), SPECTRUM_COLUMNS, file_name)

    def write_field_dump(
        self,
        values: np.ndarray,
        coordinates: np.ndarray,
        file_name: Union[str, Path],
        node_indices: Optional[np.ndarray] = None,
    ) -> Path:
        """
        Uma linha por (passo, nó): time_index node_index x1 x2 value

        Args:
            values: Função no tempo (N, n)
            coordinates: Coordenadas (n, 2) dos nós
            node_indices: Índices globais dos nós (padrão 0..n−1)
        """
        values = np.atleast_2d(np.asarray(values, dtype=float))
        if values.shape[1] != coordinates.shape[0]:
            raise DimensionMismatchError(f"Campo com {values.shape[1]} nós, coordenadas com {coordinates.shape[0]}")
        if node_indices is None:
            node_indices = np.arange(coordinates.shape[0])

        path = self._resolve(file_name)
        with open(path, "w", encoding="utf-8") as f:
            f.write("# time_index node_index x1 x2 value\n")
            for n, row in enumerate(values):
                for node, (x1, x2), value in zip(node_indices, coordinates, row):
                    f.write(f"{n} {node} {x1:.6e} {x2:.6e} {value:.6e}\n")
        self.logger.debug(f"💾 Campo salvo: {path}")
        return path

    @staticmethod
    def load_table(path: Union[str, Path]) -> pd.DataFrame:
        """Lê um CSV escrito por write_table (ignora a linha de schema)"""
        return pd.read_csv(path, comment="#")
