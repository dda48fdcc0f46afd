#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import copy
import os
import yaml
from pathlib import Path
from dotenv import load_dotenv


DEFAULT_CONFIG = {
    "logging": {"level": "INFO", "log_to_file": True, "log_directory": "logs", "backup_count": 4},
    "parabolic": {"inner_tol": 1e-11, "inner_solver": "multigrid"},
    "multigrid": {
        "coarsest_level": 2,
        "pre_sweeps": 2,
        "post_sweeps": 2,
        "damping": 0.8,
        "max_cycles": 30,
        "precond_cycles": 2,
    },
    "frcg": {
        "tol": 1e-4,
        "c": 0.4,
        "max_iter": 500,
        "restart_period": 50,
        "initial_step": "doubling",
        "min_step": 1e-3,
        "max_backtracks": 60,
    },
    "ssn": {
        "tol": 1e-4,
        "elliptic_tol": 1e-8,
        "pcg_tol": 1e-6,
        "pcg_max_iter": 500,
        "max_outer": 50,
        "exact_inner": False,
    },
    "spectrum": {
        "max_level": 2,
        "max_steps": 4,
        "gammas": [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8],
        "patterns": ["none", "full", "random"],
        "seed": 7,
    },
    "verification": {"seed": 7, "gradient_pairs": 50},
    "output": {
        "results_directory": "data/results",
        "fields_directory": "data/fields",
        "dump_fields": False,
    },
    "cache": {"enabled": True, "cache_directory": "data/cache"},
}


def _coerce(raw):
    """Converte texto de variável de ambiente ("1e-6", "true", "[1, 2]")"""
    value = yaml.safe_load(raw)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return value
    return value


class ConfigManager:
    """
    Gerenciador de configuração que combina arquivo YAML e variáveis de ambiente
    """

    def __init__(self, config_file="config.yaml"):
        self.project_root = self._find_project_root()
        self.config_file = self.project_root / config_file

        # Carregar variáveis de ambiente
        env_file = self.project_root / ".env"
        if env_file.exists():
            load_dotenv(env_file)

        self.config = self._load_yaml_config()

    def _find_project_root(self):
        """Encontra o diretório raiz do projeto"""
        current_dir = Path.cwd()

        while current_dir != current_dir.parent:
            if (current_dir / "config.yaml").exists():
                return current_dir
            current_dir = current_dir.parent

        # Se não encontrar, usar diretório atual
        return Path.cwd()

    def _load_yaml_config(self):
        """Carrega configuração do arquivo YAML por cima dos valores padrão"""
        config = copy.deepcopy(DEFAULT_CONFIG)
        if not self.config_file.exists():
            return config

        with open(self.config_file, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}

        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(config.get(section), dict):
                config[section].update(values)
            else:
                config[section] = values
        return config

    def get(self, key, default=None):
        """
        Obtém valor de configuração, priorizando variáveis de ambiente

        Args:
            key: Chave da configuração (pode usar notação de ponto: 'section.key')
            default: Valor padrão se não encontrar
        """
        env_key = key.upper().replace(".", "_")
        env_value = os.getenv(env_key)
        if env_value is not None:
            return _coerce(env_value)

        keys = key.split(".")
        value = self.config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def _section(self, section):
        values = {}
        for key, default in DEFAULT_CONFIG[section].items():
            value = self.get(f"{section}.{key}", default)
            # PyYAML lê "1e-4" (sem ponto) como string
            if isinstance(value, str) and isinstance(default, (int, float)) and not isinstance(default, bool):
                value = _coerce(value)
            values[key] = value
        return values

    def get_parabolic_config(self):
        """Retorna configuração das varreduras backward-Euler"""
        return self._section("parabolic")

    def get_multigrid_config(self):
        """Retorna configuração do multigrid geométrico"""
        return self._section("multigrid")

    def get_frcg_config(self):
        """Retorna configuração do Dual+FRCG"""
        return self._section("frcg")

    def get_ssn_config(self):
        """Retorna configuração do Dual+SSN"""
        return self._section("ssn")

    def get_spectrum_config(self):
        """Retorna configuração do estudo espectral"""
        return self._section("spectrum")

    def get_verification_config(self):
        """Retorna semente e tamanho das checagens aleatórias da suíte `verify`"""
        return self._section("verification")

    def get_output_config(self):
        """Retorna diretórios de saída"""
        output = self._section("output")
        output["results_directory"] = self.project_root / output["results_directory"]
        output["fields_directory"] = self.project_root / output["fields_directory"]
        return output

    def get_logging_config(self):
        """Retorna nível do console, diretório e rotação dos arquivos de log"""
        logging_config = self._section("logging")
        logging_config["log_directory"] = self.project_root / logging_config["log_directory"]
        return logging_config

    def get_cache_config(self):
        """Retorna configuração específica do cache"""
        return {
            "enabled": self.get("cache.enabled", True),
            "cache_directory": self.project_root / self.get("cache.cache_directory", "data/cache"),
        }


# Instância global do gerenciador de configuração
config_manager = ConfigManager()
