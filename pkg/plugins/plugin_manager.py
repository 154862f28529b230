import importlib
import logging
import os
from typing import Any, Dict, List, Optional

from plugins.plugin_base import PluginBase

logger = logging.getLogger("hybridplan.plugins")

# Předem definované pořadí příkazů v nápovědě
PREDEFINED_ORDER = [
    "DesignPlugin",
    "SimulatePlugin",
    "BillPlugin",
    "ReportPlugin",
]

PLUGIN_SUFFIX = "_plugin.py"


class PluginManager:
    def __init__(self, plugin_dir: Optional[str] = None, app_config: Dict[str, Any] = None):
        self.plugin_dir = plugin_dir or os.path.dirname(os.path.abspath(__file__))
        self.plugins: List[PluginBase] = []
        self.app_config = app_config
        self.plugin_modules = {}

    def load_plugins(self, predefined_order=None) -> List[PluginBase]:
        """
        Načte všechny pluginy z adresáře a seřadí je podle zadaného pořadí

        Args:
            predefined_order: Seznam názvů tříd pluginů v požadovaném pořadí

        Returns:
            Seznam načtených pluginů
        """
        self.plugins = []
        for file in sorted(os.listdir(self.plugin_dir)):
            if not file.endswith(PLUGIN_SUFFIX):
                continue
            module_name = f"plugins.{file[:-3]}"
            try:
                mod = importlib.import_module(module_name)
            except ImportError as e:
                logger.error(f"Chyba při načítání pluginu {file}: {e}")
                continue

            # Hledání tříd pluginů definovaných přímo v modulu
            for attr_name in dir(mod):
                attr = getattr(mod, attr_name)
                if isinstance(attr, type) and issubclass(attr, PluginBase) and attr is not PluginBase \
                        and attr.__module__ == mod.__name__:
                    plugin_instance = attr(self.app_config) if self.app_config else attr()
                    self.plugins.append(plugin_instance)
                    self.plugin_modules[attr.__name__] = mod

        # Seřazení pluginů podle zadaného pořadí nebo výchozího PREDEFINED_ORDER
        order = predefined_order if predefined_order is not None else PREDEFINED_ORDER
        self.plugins.sort(key=lambda p: order.index(p.__class__.__name__)
                          if p.__class__.__name__ in order else 999)
        logger.debug(f"Načteno {len(self.plugins)} pluginů: {[p.name() for p in self.plugins]}")
        return self.plugins

    def get_plugin(self, plugin_name: str) -> Optional[PluginBase]:
        """
        Vrátí plugin podle názvu třídy nebo názvu příkazu.

        Args:
            plugin_name: Název pluginu

        Returns:
            Plugin nebo None, pokud plugin neexistuje
        """
        for plugin in self.plugins:
            if plugin.__class__.__name__ == plugin_name or plugin.name() == plugin_name:
                return plugin

        return None

    def unload_plugins(self):
        """
        Uvolní všechny načtené pluginy.
        """
        self.plugins = []
        self.plugin_modules = {}
