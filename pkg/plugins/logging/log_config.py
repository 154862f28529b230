"""
Modul obsahující třídu pro konfiguraci logovacího systému.
"""

import logging
from typing import Any, Dict, Optional


class LogConfig:
    """
    Třída pro konfiguraci logovacího systému.
    Výchozí hodnoty se přepisují sekcí "logging" z konfiguračního dokumentu.
    """

    # Výchozí hodnoty konfigurace
    DEFAULT_CONFIG = {
        "level": "INFO",
        "log_to_file": False,
        "file": "logs/hybridplan.log",
        "max_bytes": 10 * 1024 * 1024,  # 10 MB
        "backup_count": 5,
        "max_log_entries": 1000,
    }

    VALID_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Inicializace konfigurace.

        Args:
            config: Sekce "logging" z konfigurace aplikace
        """
        self.config = self.DEFAULT_CONFIG.copy()
        if config:
            self.config.update({k: v for k, v in config.items() if v is not None})
        self.config["level"] = str(self.config["level"]).upper()

    def get(self, key: str, default: Any = None) -> Any:
        """
        Vrátí hodnotu konfigurace pro daný klíč.

        Args:
            key: Klíč konfigurace
            default: Výchozí hodnota, pokud klíč neexistuje
        """
        return self.config.get(key, default)

    @property
    def level(self) -> int:
        return getattr(logging, self.config["level"], logging.INFO)

    def validate(self) -> Dict[str, str]:
        """Validuje konfiguraci a vrací slovník chyb"""
        errors = {}
        if self.config["level"] not in self.VALID_LEVELS:
            errors["logging.level"] = f"Neplatná úroveň logu. Povolené hodnoty: {', '.join(self.VALID_LEVELS)}"
        if int(self.config["max_bytes"]) < 0:
            errors["logging.max_bytes"] = "Maximální velikost souboru nesmí být záporná"
        if int(self.config["backup_count"]) < 0:
            errors["logging.backup_count"] = "Počet záložních souborů nesmí být záporný"
        return errors
