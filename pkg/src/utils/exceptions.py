#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Hierarquia de exceções do projeto.

Erros de configuração são detectados antes de qualquer solve; erros de
solver carregam o contexto numérico (iteração, passo de tempo, resíduo).
"""

from typing import Optional


class DualOcpError(Exception):
    """Base de todas as exceções do projeto"""


class ConfigurationError(DualOcpError, ValueError):
    """Campo de configuração ou parâmetro de problema inválido"""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field is not None:
            message = f"[{field}] {message}"
        super().__init__(message)


class DimensionMismatchError(ConfigurationError):
    """Dimensões incompatíveis entre operador e vetor"""


class NonFiniteError(DualOcpError, FloatingPointError):
    """NaN/Inf detectado dentro de um laço numérico"""


class SolverError(DualOcpError, RuntimeError):
    """Base das falhas numéricas"""


class PcgBreakdownError(SolverError):
    """Direção de curvatura nula (ou negativa) no PCG"""

    def __init__(self, iteration: int, curvature: float):
        self.iteration = iteration
        self.curvature = curvature
        super().__init__(f"Breakdown do PCG na iteração {iteration} (curvatura {curvature:.3e})")


class InnerSolveError(SolverError):
    """Falha de um solve elíptico dentro de uma varredura no tempo"""

    def __init__(self, step: int, message: str):
        self.step = step
        super().__init__(f"Passo de tempo {step}: {message}")


class LineSearchError(SolverError):
    """Armijo esgotou os backtracks"""

    def __init__(self, backtracks: int, iteration: Optional[int] = None):
        self.backtracks = backtracks
        self.iteration = iteration
        where = f" (iteração {iteration})" if iteration is not None else ""
        super().__init__(
            f"Busca de Armijo falhou após {backtracks} backtracks{where}: "
            "gradiente e objetivo inconsistentes"
        )


class ConvergenceError(SolverError):
    """Limite de iterações atingido sem satisfazer a tolerância"""

    def __init__(self, message: str, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"{message} (iterações={iterations}, resíduo={residual:.3e})")


class EigenSolverError(SolverError):
    """Autovalores densos não passaram no teste de resíduo"""

    def __init__(self, message: str, max_residual: float = float("nan")):
        self.max_residual = max_residual
        super().__init__(f"{message} (resíduo máximo {max_residual:.3e})")
