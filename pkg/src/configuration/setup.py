import os

import dotenv
from loguru import logger

from src.utility import configure_logging

from .config import Config
from .provider import ConfigStore

ENV_PREFIX: str = "RADIAL_MULTIPLIERS"

dotenv.load_dotenv(dotenv_path=os.getenv("ENV_FILE", ".env"))


def setup_config_store(filename: str = "config/config.yml", force: bool = False) -> Config:
    """Loads the configuration file into the default context and configures logging.

    `CONFIG_FILE` in the environment takes precedence over `filename`.
    """
    config_file: str = os.getenv("CONFIG_FILE", filename)
    store: ConfigStore = ConfigStore.get_instance()

    if store.is_configured() and not force:
        return store.config()

    store.configure_context(source=config_file, env_filename=os.getenv("ENV_FILE", ".env"), env_prefix=ENV_PREFIX)

    cfg: Config = store.config()
    if not cfg:
        raise ValueError("Config Store did not return a config")

    cfg.update({"runtime:config_file": config_file})

    configure_logging(cfg.get("logging") or {})

    logger.debug(f"Config Store initialized from {config_file}")
    return cfg
