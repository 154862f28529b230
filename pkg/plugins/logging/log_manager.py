"""
Modul obsahující třídu LogManager pro správu logů.
"""

import logging
import os
from logging.handlers import RotatingFileHandler
from typing import List, Optional

from plugins.logging.log_config import LogConfig
from plugins.logging.log_entry import LogEntry

# Formát logu: [čas] [úroveň] [zdroj] zpráva
log_formatter = logging.Formatter('[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s')

APP_LOGGER = "hybridplan"


class _BufferHandler(logging.Handler):
    """Handler, který ukládá záznamy do paměti správce logů."""

    def __init__(self, manager: "LogManager"):
        super().__init__(level=logging.DEBUG)
        self.manager = manager

    def emit(self, record: logging.LogRecord) -> None:
        try:
            self.manager.add_entry(LogEntry.from_record(record))
        except Exception:
            self.handleError(record)


class LogManager:
    """
    Třída pro správu logů. Nastaví konzoli, volitelně rotovaný soubor
    a uchovává záznamy v paměti, aby se varování z běhu dostala do reportu.
    """

    def __init__(self, config: Optional[LogConfig] = None):
        """
        Inicializace správce logů.

        Args:
            config: Konfigurace loggeru
        """
        self.config = config or LogConfig()
        self.log_entries: List[LogEntry] = []
        self.logger = logging.getLogger(APP_LOGGER)
        self.handlers: List[logging.Handler] = []

    def install(self) -> "LogManager":
        """Připojí handlery k aplikačnímu loggeru."""
        self.uninstall()
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False

        console = logging.StreamHandler()
        console.setFormatter(log_formatter)
        console.setLevel(self.config.level)
        self.handlers.append(console)

        # Nastavíme handler pro ukládání do souboru
        if self.config.get("log_to_file"):
            log_file = self.config.get("file")
            log_dir = os.path.dirname(log_file)
            if log_dir:  # Kontrola, zda log_dir není prázdný řetězec
                os.makedirs(log_dir, exist_ok=True)
            file_handler = RotatingFileHandler(
                log_file, maxBytes=int(self.config.get("max_bytes")),
                backupCount=int(self.config.get("backup_count")), encoding="utf-8")
            file_handler.setFormatter(log_formatter)
            file_handler.setLevel(self.config.level)
            self.handlers.append(file_handler)

        buffer = _BufferHandler(self)
        buffer.setLevel(logging.WARNING)
        self.handlers.append(buffer)

        for handler in self.handlers:
            self.logger.addHandler(handler)
        return self

    def uninstall(self) -> None:
        """Odebere a zavře handlery tohoto správce."""
        for handler in self.handlers:
            self.logger.removeHandler(handler)
            handler.close()
        self.handlers = []
        self.logger.propagate = True

    def add_entry(self, entry: LogEntry) -> None:
        self.log_entries.append(entry)
        limit = int(self.config.get("max_log_entries"))
        # Omezíme počet záznamů
        if len(self.log_entries) > limit:
            self.log_entries = self.log_entries[-limit:]

    def get_filtered_logs(self, level: str = "ALL", source: str = "ALL") -> List[LogEntry]:
        """
        Vrátí filtrované záznamy podle úrovně a zdroje.

        Args:
            level: Úroveň logu pro filtrování ("ALL" pro všechny úrovně)
            source: Zdroj logu pro filtrování ("ALL" pro všechny zdroje)
        """
        return [
            entry for entry in self.log_entries
            if (level == "ALL" or entry.level == level) and (source == "ALL" or entry.source == source)
        ]
