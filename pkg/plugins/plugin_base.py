# plugin_base.py
"""
Abstraktní základ pro všechny příkazové pluginy použité v aplikaci.
Plugin by měl implementovat minimálně následující metody:

- name()         => Vrací název příkazu jako řetězec (design, simulate, ...).
- description()  => Vrací stručný popis funkčnosti pluginu.
- get_default_config() => Vrací výchozí konfiguraci pluginu jako slovník.
- update_config(new_config) => Umožňuje aktualizovat konfiguraci.
- add_arguments(parser) => Přidá přepínače příkazu do argparse parseru.
- execute(data)  => Metoda, která spouští logiku pluginu.
"""

import argparse
from typing import Any, Dict, Optional


class PluginBase:
    def __init__(self, app_config: Optional[Dict[str, Any]] = None):
        self.config = self.get_default_config()
        if app_config:
            self.update_config(app_config)

    def name(self) -> str:
        """Vrací název pluginu."""
        raise NotImplementedError("Metoda name() musí být implementována.")

    def description(self) -> str:
        """Vrací popis pluginu."""
        raise NotImplementedError("Metoda description() musí být implementována.")

    def get_default_config(self) -> dict:
        """Vrací výchozí konfiguraci pluginu."""
        return {}

    def update_config(self, new_config: dict):
        """Aktualizuje konfiguraci pluginu."""
        self.config.update(new_config)

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """
        Přidá přepínače specifické pro příkaz.

        Parametry:
          parser: Subparser příkazu.
        """

    def execute(self, data):
        """Spouští logiku pluginu; data jsou argumenty příkazové řádky."""
        raise NotImplementedError("Metoda execute() musí být implementována.")
