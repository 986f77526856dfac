import json
from pathlib import Path
from typing import List, Optional

from config.logging_config import get_logger
from models.domain.qexpansion import QExpansion

logger = get_logger(__name__)


class QExpansionRepository:
    """On-disk JSON cache of q-expansions, one file per (label, order)."""

    def __init__(self, directory: str):
        self.directory = Path(directory)

    def _path(self, label: str, order: int) -> Path:
        return self.directory / f"{label}_M{order}.json"

    def load(self, label: str, order: int) -> Optional[QExpansion]:
        """Cached expansion, or None when absent or unreadable."""
        path = self._path(label, order)
        if not path.exists():
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                expansion = QExpansion.from_payload(json.load(f))
        except (OSError, json.JSONDecodeError, KeyError) as e:
            logger.warning(f"Ignoring unreadable cache file {path}: {e}")
            return None
        logger.debug(f"Loaded {expansion!r} from {path}")
        return expansion

    def save(self, expansion: QExpansion) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(expansion.label, expansion.order)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(expansion.to_payload(), f)
        logger.debug(f"Cached {expansion!r} at {path}")
        return path

    def list_cached(self) -> List[str]:
        if not self.directory.exists():
            return []
        return sorted(p.stem for p in self.directory.glob("*.json"))

    def delete(self, label: str, order: int) -> bool:
        path = self._path(label, order)
        if path.exists():
            path.unlink()
            return True
        return False
