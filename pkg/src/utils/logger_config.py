#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Logging dos solvers: níveis ANALYSIS/SUCCESS, emojis e cores no console,
arquivo semanal por componente em `logging.log_directory`.
"""

import logging
import sys
import traceback
from logging.handlers import TimedRotatingFileHandler

from utils.config_manager import config_manager

ROOT_LOGGER = "dual_ocp"

# Resultados de verificação/espectro e convergência ficam entre INFO e WARNING
ANALYSIS = 25
SUCCESS = 26

logging.addLevelName(ANALYSIS, "ANALYSIS")
logging.addLevelName(SUCCESS, "SUCCESS!")


def _level_method(level):
    def log(self, message, *args, **kws):
        if self.isEnabledFor(level):
            self._log(level, message, args, **kws)

    return log


logging.Logger.analysis = _level_method(ANALYSIS)
logging.Logger.success = _level_method(SUCCESS)

LOG_EMOJIS = {
    "DEBUG": "🐞",
    "INFO": "✅",
    "ANALYSIS": "🔍",
    "SUCCESS!": "✨",
    "WARNING": "⚠️",
    "ERROR": "❌",
    "CRITICAL": "🚨",
}
ANSI_COLORS = {
    "DEBUG": "\033[94m",
    "INFO": "\033[92m",
    "ANALYSIS": "\033[96m",
    "SUCCESS!": "\033[96;1m",
    "WARNING": "\033[93m",
    "ERROR": "\033[91m",
    "CRITICAL": "\033[95m",
}
ANSI_RESET = "\033[0m"


class SolverFormatter(logging.Formatter):
    """
    `[hh:mm:ss] emoji [NÍVEL] [componente] mensagem`; o componente é o
    sufixo do nome do logger (frcg, ssn, multigrid, ...).
    """

    def __init__(self, use_colors=True):
        super().__init__()
        self.use_colors = use_colors

    def format(self, record):
        emoji = LOG_EMOJIS.get(record.levelname, "❓")
        timestamp = self.formatTime(record, "%H:%M:%S")
        component = record.name.split(".", 1)[-1]
        level = record.levelname
        if self.use_colors:
            level = f"{ANSI_COLORS.get(level, '')}{level}{ANSI_RESET}"
        return f"[{timestamp}] {emoji} [{level}] [{component}] {record.getMessage()}"


def setup_logger(analysis_type="dual_ocp", log_to_file=False):
    """
    Logger `dual_ocp.<analysis_type>` com console e, opcionalmente, arquivo
    `<analysis_type>.log`.

    Solvers são instanciados muitas vezes numa mesma tabela; um logger já
    configurado é reaproveitado em vez de ter os handlers recriados.

    Args:
        analysis_type: Componente ('frcg', 'ssn', 'multigrid', ...)
        log_to_file: Pede arquivo de log; `logging.log_to_file: false` desliga
            os arquivos de todos os componentes

    Returns:
        tuple: (logger, handler do console)
    """
    settings = config_manager.get_logging_config()
    log_to_file = bool(log_to_file and settings["log_to_file"])
    logger = logging.getLogger(f"{ROOT_LOGGER}.{analysis_type}")

    console_handler = next((h for h in logger.handlers if getattr(h, "_dual_ocp_console", False)), None)
    has_file = any(isinstance(h, TimedRotatingFileHandler) for h in logger.handlers)
    if console_handler is not None and (has_file or not log_to_file):
        return logger, console_handler

    logger.setLevel(logging.DEBUG)
    logger.handlers.clear()

    if log_to_file:
        log_dir = settings["log_directory"]
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = TimedRotatingFileHandler(
            filename=log_dir / f"{analysis_type}.log",
            when="W6",
            backupCount=int(settings["backup_count"]),
            encoding="utf-8",
        )
        file_handler.setFormatter(SolverFormatter(use_colors=False))
        file_handler.setLevel(logging.DEBUG)
        logger.addHandler(file_handler)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(SolverFormatter(use_colors=sys.stderr.isatty()))
    console_handler.setLevel(getattr(logging, str(settings["level"]).upper(), logging.INFO))
    console_handler._dual_ocp_console = True
    logger.addHandler(console_handler)

    return logger, console_handler


def log_exception(logger, exit_after=True):
    """
    Loga a exceção corrente: traceback completo nos handlers de DEBUG
    (arquivo), só a mensagem no console.

    Args:
        logger: Logger que registra a exceção
        exit_after: Encerra o processo com código 1 depois de logar
    """
    exc_type, exc_value, exc_traceback = sys.exc_info()
    full = "\n" + "".join(traceback.format_exception(exc_type, exc_value, exc_traceback))

    for handler in logger.handlers:
        message = full if handler.level <= logging.DEBUG else str(exc_value)
        handler.handle(logger.makeRecord(logger.name, logging.ERROR, "(unknown file)", 0, message, None, None))

    if exit_after:
        sys.exit(1)
