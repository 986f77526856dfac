import json
import os
from pathlib import Path
from typing import Dict, Any

from dotenv import load_dotenv

from .logging_config import get_logger

logger = get_logger(__name__)

load_dotenv(Path(__file__).parent.parent / ".env")

ENV_PREFIX = "MODFORMS"


class ConfigLoader:
    def __init__(self):
        self.config_path = Path(__file__).parent
        self._numerics = None
        self._messages = None

    def _load_json(self, filename: str) -> Dict[str, Any]:
        try:
            logger.debug(f"Reading {self.config_path / filename}")
            with open(self.config_path / filename, "r", encoding="utf-8") as f:
                data = json.load(f)
            logger.debug(f"Successfully loaded {len(data)} sections from {filename}")
            return data
        except FileNotFoundError:
            logger.warning(f"{filename} not found, using empty dict")
            return {}
        except json.JSONDecodeError as e:
            logger.error(f"Invalid JSON in {filename}: {e}")
            return {}

    def load_numerics(self) -> Dict[str, Any]:
        if self._numerics is None:
            self._numerics = self._load_json("numerics.json")
        return self._numerics

    def load_messages(self) -> Dict[str, Any]:
        if self._messages is None:
            self._messages = self._load_json("messages.json")
        return self._messages

    def reload(self) -> None:
        self._numerics = None
        self._messages = None

    def get_numeric(self, section: str, key: str, default: Any) -> Any:
        """Resolve a numerical knob: environment, then numerics.json, then ``default``.

        Environment names are ``MODFORMS_<SECTION>_<KEY>`` in upper case. The value is
        coerced to the type of ``default`` when one is given.
        """
        env_key = f"{ENV_PREFIX}_{section}_{key}".upper()
        raw = os.getenv(env_key)
        if raw is not None:
            value = self._coerce(raw, default)
            logger.debug(f"Config value for {section}.{key} from environment: {value}")
            return value
        value = self.load_numerics().get(section, {}).get(key, default)
        if isinstance(value, str) and not isinstance(default, str):
            value = self._coerce(value, default)
        return value

    @staticmethod
    def _coerce(raw: str, default: Any) -> Any:
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, complex):
            return complex(raw.replace("i", "j").replace(" ", ""))
        return raw

    def get_message(self, category: str, key: str, **kwargs) -> str:
        messages = self.load_messages()
        message = messages.get(category, {}).get(key, f"Missing message: {category}.{key}")
        if kwargs:
            try:
                return message.format(**kwargs)
            except (KeyError, IndexError) as e:
                logger.error(f"Message formatting error for {category}.{key}: {e}")
                return f"Message formatting error: {e}"
        return message

    def get_config_value(self, key: str, default: Any = None) -> Any:
        value = os.getenv(key, default)
        logger.debug(f"Config value for {key}: {value}")
        return value


config_loader = ConfigLoader()
