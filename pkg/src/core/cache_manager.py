#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Cache Manager - Cache de linhas de relatório já calculadas

Este módulo é responsável por:
1. Salvar a linha de relatório de cada run terminado
2. Verificar se uma configuração de run já foi resolvida
3. Permitir limpeza manual do cache
4. Incluir timestamps para controle de validade

A chave é o hash MD5 da configuração canônica do run (JSON com chaves
ordenadas), então qualquer mudança de parâmetro gera uma entrada nova.
"""

import hashlib
import json
import math
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent.parent))

from utils.logger_config import setup_logger


class CacheManager:
    """
    Gerenciador de cache para linhas de relatório (uma por configuração de run)
    """

    def __init__(self, cache_dir: str = "data/cache", enabled: bool = True):
        """
        Args:
            cache_dir: Diretório base do cache
            enabled: False desativa leitura e escrita (--no-cache)
        """
        self.logger, _ = setup_logger("cache_manager", log_to_file=True)
        self.enabled = enabled
        self.cache_dir = Path(cache_dir) / "report_rows"
        if self.enabled:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.logger.debug(f"💾 Cache Manager: {self.cache_dir} (ativo: {self.enabled})")

    @staticmethod
    def generate_cache_key(run_config: Dict[str, Any]) -> str:
        """MD5 do JSON canônico da configuração"""
        canonical = json.dumps(run_config, sort_keys=True, default=str)
        return hashlib.md5(canonical.encode("utf-8")).hexdigest()

    def _cache_file(self, run_config: Dict[str, Any]) -> Path:
        return self.cache_dir / f"{self.generate_cache_key(run_config)}.json"

    def save_row(self, run_config: Dict[str, Any], row: Dict[str, Any]) -> bool:
        """
        Salva uma linha de relatório

        Returns:
            True se salvou com sucesso
        """
        if not self.enabled:
            return False
        cache_data = {
            "run_config": self._serialize_data(run_config),
            "timestamp": datetime.now().isoformat(),
            "row": self._serialize_data(row),
        }
        try:
            with open(self._cache_file(run_config), "w", encoding="utf-8") as f:
                json.dump(cache_data, f, indent=2, ensure_ascii=False)
        except OSError as e:
            self.logger.error(f"❌ Erro ao salvar cache: {e}")
            return False
        self.logger.debug(f"💾 Linha salva no cache: {self.generate_cache_key(run_config)}")
        return True

    def load_row(self, run_config: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        """Linha salva ou None; arquivos corrompidos contam como ausentes"""
        if not self.enabled:
            return None
        cache_file = self._cache_file(run_config)
        if not cache_file.exists():
            return None
        try:
            with open(cache_file, "r", encoding="utf-8") as f:
                cache_data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            self.logger.warning(f"⚠️ Cache ilegível ({cache_file.name}): {e}")
            return None
        self.logger.info(f"📦 Linha encontrada no cache: {cache_file.stem}")
        return {key: (math.nan if value is None else value) for key, value in cache_data["row"].items()}

    def is_cached(self, run_config: Dict[str, Any]) -> bool:
        return self.enabled and self._cache_file(run_config).exists()

    def clear_cache(self) -> int:
        """Remove todas as linhas; retorna o número de arquivos removidos"""
        removed_count = 0
        if not self.cache_dir.exists():
            return 0
        for cache_file in self.cache_dir.glob("*.json"):
            cache_file.unlink()
            removed_count += 1
        self.logger.info(f"🗑️ Cache limpo: {removed_count} arquivos")
        return removed_count

    def _serialize_data(self, data: Any) -> Any:
        """Converte tipos numpy, datetime e NaN para JSON"""
        if isinstance(data, dict):
            return {key: self._serialize_data(value) for key, value in data.items()}
        if isinstance(data, (list, tuple)):
            return [self._serialize_data(item) for item in data]
        if isinstance(data, datetime):
            return data.isoformat()
        if isinstance(data, Path):
            return str(data)
        if isinstance(data, np.generic):
            data = data.item()
        if isinstance(data, float) and math.isnan(data):
            return None
        return data
