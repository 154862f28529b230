import argparse
import logging
import os
import sys
from typing import List, Optional

# Add repository root to sys.path for module imports
current_dir = os.path.abspath(os.path.dirname(__file__))
parent_dir = os.path.dirname(os.path.dirname(current_dir))
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

from plugins.global_context import global_context, reset_context
from plugins.logging.log_config import LogConfig
from plugins.logging.log_manager import LogManager
from plugins.plan_config import PlanToolConfig, load_config
from plugins.plugin_manager import PluginManager
from src.hybridplan import __version__
from src.hybridplan.engine.errors import (BillingConfigurationError, ConfigurationError,
                                          DocumentIOError, HybridPlanError, MissingParameterError,
                                          PlanPairError, RequirementError, ScenarioError, UnitError)

logger = logging.getLogger("hybridplan.cli")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIGURATION = 2
EXIT_IO = 3

# Pořadí je důležité: první shoda vyhrává
EXIT_CODES = [
    (DocumentIOError, EXIT_IO),
    (RequirementError, EXIT_VALIDATION),
    (PlanPairError, EXIT_VALIDATION),
    (ConfigurationError, EXIT_CONFIGURATION),
    (ScenarioError, EXIT_CONFIGURATION),
    (BillingConfigurationError, EXIT_CONFIGURATION),
    (MissingParameterError, EXIT_CONFIGURATION),
    (UnitError, EXIT_CONFIGURATION),
    (HybridPlanError, EXIT_CONFIGURATION),
    (OSError, EXIT_IO),
]


def exit_code_for(error: BaseException) -> int:
    for error_class, code in EXIT_CODES:
        if isinstance(error, error_class):
            return code
    raise error


def build_parser(manager: PluginManager) -> argparse.ArgumentParser:
    """Sestaví parser s jedním podpříkazem pro každý načtený plugin."""
    parser = argparse.ArgumentParser(
        prog="hybridplan",
        description="Návrh, simulace a vyúčtování hybridních tarifů ve sdíleném přístupu")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Konfigurační dokument (JSON)")
    common.add_argument("--log-level", choices=LogConfig.VALID_LEVELS, help="Úroveň logování")

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for plugin in manager.plugins:
        sub = subparsers.add_parser(plugin.name(), help=plugin.description(), parents=[common])
        plugin.add_arguments(sub)
    return parser


def setup_logging(config: PlanToolConfig, level: Optional[str]) -> LogManager:
    """Set up application logging"""
    settings = dict(config.logging)
    if settings.get("file"):
        settings.setdefault("log_to_file", True)
    if level:
        settings["level"] = level
    log_config = LogConfig(settings)
    errors = log_config.validate()
    if errors:
        raise ConfigurationError("Neplatná konfigurace logování", errors)
    return LogManager(log_config).install()


def main(argv: Optional[List[str]] = None) -> int:
    """
    Vstupní bod příkazové řádky.

    Returns:
        Návratový kód: 0 úspěch, 1 nesplněný požadavek, 2 chyba konfigurace, 3 chyba vstupu/výstupu
    """
    manager = PluginManager()
    manager.load_plugins()
    parser = build_parser(manager)
    args = parser.parse_args(argv)

    reset_context()
    log_manager = None
    try:
        config = load_config(args.config) if args.config else PlanToolConfig()
        global_context["config"] = config
        log_manager = setup_logging(config, args.log_level)
        global_context["log_manager"] = log_manager
        logger.info(f"Spouštím příkaz {args.command}")
        manager.get_plugin(args.command).execute(args)
    except (HybridPlanError, OSError) as e:
        code = exit_code_for(e)
        # Konfigurace se načítá dřív než logování
        if log_manager is None:
            print(f"Chyba: {e}", file=sys.stderr)
        else:
            logger.error(f"Příkaz {args.command} selhal: {e}")
        for field_name, message in sorted(getattr(e, "errors", {}).items()):
            print(f"  {field_name}: {message}", file=sys.stderr)
        return code
    finally:
        if log_manager is not None:
            log_manager.uninstall()
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
