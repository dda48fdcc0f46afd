#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Run Config - Configuração validada de um run da CLI

Arquivos de run são YAML: um mapeamento plano ou `runs: [ {...}, ... ]`.
Todo campo é validado antes de qualquer solve; erros citam o campo.

Exemplo:
    runs:
      - name: tabela1-nivel4
        problem: example1
        gamma: 1.0e-3
        level: 4
        solver: frcg
"""

import copy
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError

PROBLEMS = ("example1", "example2", "example3", "custom")
SOLVERS = ("frcg", "ssn")
MIN_LEVEL, MAX_LEVEL = 1, 8

KNOWN_FIELDS = {
    "name", "problem", "gamma", "level", "N", "solver", "tol", "c", "seed",
    "output", "dump_fields", "inner_solver", "custom",
}

CUSTOM_FIELDS = {"nu", "a0", "T", "bounds", "control_box", "target", "initial_state", "source"}


def _number(raw: Dict[str, Any], key: str, kind=float, default=None):
    value = raw.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool):
        raise ConfigurationError(f"valor booleano não é numérico: {value!r}", field=key)
    try:
        number = kind(yaml.safe_load(value) if isinstance(value, str) else value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"valor não numérico: {value!r}", field=key)
    if kind is int and isinstance(value, float) and not value.is_integer():
        raise ConfigurationError(f"esperado inteiro, recebeu {value!r}", field=key)
    return number


@dataclass
class RunConfig:
    """
    Um run: problema, γ, malha, solver e saídas.

    `custom` descreve um problema fora dos exemplos: ν, a₀, T, limites,
    caixa de controle e expressões constantes para y_d, y₀ e f.
    """

    problem: str
    gamma: float
    level: int
    solver: str
    N: Optional[int] = None
    name: Optional[str] = None
    tol: Optional[float] = None
    c: Optional[float] = None
    seed: Optional[int] = None
    output: Optional[str] = None
    dump_fields: bool = False
    inner_solver: Optional[str] = None
    custom: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigurationError(f"problema desconhecido {self.problem!r} (use {', '.join(PROBLEMS)})", field="problem")
        if self.solver not in SOLVERS:
            raise ConfigurationError(f"solver desconhecido {self.solver!r} (use {', '.join(SOLVERS)})", field="solver")
        if not self.gamma > 0:
            raise ConfigurationError(f"γ deve ser positivo, recebeu {self.gamma}", field="gamma")
        if not MIN_LEVEL <= self.level <= MAX_LEVEL:
            raise ConfigurationError(f"nível deve estar em [{MIN_LEVEL}, {MAX_LEVEL}], recebeu {self.level}", field="level")
        if self.problem == "example3":
            if self.N not in (None, 1):
                raise ConfigurationError("Exemplo 3 é estacionário: N deve ser 1", field="N")
            self.N = 1
        elif self.N is None:
            self.N = 2**self.level
        if self.N < 1:
            raise ConfigurationError(f"N deve ser ≥ 1, recebeu {self.N}", field="N")
        if self.tol is not None and not self.tol > 0:
            raise ConfigurationError(f"tolerância deve ser positiva, recebeu {self.tol}", field="tol")
        if self.c is not None and not 0 < self.c < 1:
            raise ConfigurationError(f"constante de Armijo deve estar em (0, 1), recebeu {self.c}", field="c")
        if self.inner_solver not in (None, "multigrid", "direct"):
            raise ConfigurationError(f"solver interno desconhecido {self.inner_solver!r}", field="inner_solver")
        if self.problem == "custom":
            unknown = set(self.custom) - CUSTOM_FIELDS
            if unknown:
                raise ConfigurationError(f"campos desconhecidos: {sorted(unknown)}", field="custom")
        if self.name is None:
            self.name = f"{self.problem}-{self.solver}-l{self.level}-g{self.gamma:.0e}"
        if self.seed is None:
            self.seed = int(config_manager.get_verification_config()["seed"])

    @classmethod
    def from_mapping(cls, raw: Dict[str, Any]) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigurationError(f"run deve ser um mapeamento, recebeu {type(raw).__name__}", field="runs")
        unknown = set(raw) - KNOWN_FIELDS
        if unknown:
            raise ConfigurationError(f"campos desconhecidos: {sorted(unknown)}", field=sorted(unknown)[0])
        for key in ("problem", "gamma", "level", "solver"):
            if key not in raw:
                raise ConfigurationError("campo obrigatório ausente", field=key)

        return cls(
            problem=str(raw["problem"]),
            gamma=_number(raw, "gamma"),
            level=_number(raw, "level", int),
            solver=str(raw["solver"]),
            N=_number(raw, "N", int),
            name=raw.get("name"),
            tol=_number(raw, "tol"),
            c=_number(raw, "c"),
            seed=_number(raw, "seed", int),
            output=raw.get("output"),
            dump_fields=bool(raw.get("dump_fields", False)),
            inner_solver=raw.get("inner_solver"),
            custom=copy.deepcopy(raw.get("custom") or {}),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def cache_key_fields(self, resolved: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        Campos que determinam o resultado numérico (sem saídas, nome e
        semente, que só alimenta a suíte verify).

        Args:
            resolved: Configurações efetivas do solve (solver, multigrid,
                inner_tol) lidas de config.yaml/ambiente
        """
        values = self.to_dict()
        for key in ("name", "output", "dump_fields", "seed"):
            values.pop(key)
        if resolved:
            values["resolved"] = copy.deepcopy(resolved)
        return values


def load_run_file(path: Union[str, Path]) -> List[RunConfig]:
    """
    Lê um arquivo de run YAML.

    Returns:
        Lista de RunConfig validados
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"arquivo de run não encontrado: {path}", field="config")
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigurationError(f"YAML inválido: {e}", field="config")

    if raw is None:
        raise ConfigurationError("arquivo de run vazio", field="config")
    if isinstance(raw, dict) and "runs" in raw:
        entries = raw["runs"]
        if not isinstance(entries, list) or not entries:
            raise ConfigurationError("`runs` deve ser uma lista não vazia", field="runs")
    else:
        entries = [raw]
    return [RunConfig.from_mapping(entry) for entry in entries]
