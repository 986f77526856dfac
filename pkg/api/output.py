import csv
import io
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from config.config_loader import config_loader
from config.logging_config import get_logger
from models.schemas.request_models import RunConfig
from models.schemas.response_models import TableResponse

logger = get_logger(__name__)


def jsonable(value: Any) -> Any:
    """Plain JSON types for meta values: complex as 'x+yi', numpy scalars unwrapped, non-finite as strings."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}i"
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def build_document(config: RunConfig, rows: List[Dict[str, Any]], **meta: Any) -> TableResponse:
    header = {"config": config.model_dump(exclude={"out"}), **meta}
    return TableResponse(meta=jsonable(header), rows=[jsonable(row) for row in rows])


def render(document: TableResponse, output_format: str) -> str:
    if output_format == "json":
        return document.model_dump_json(indent=2) + "\n"
    buffer = io.StringIO()
    buffer.write(f"# meta: {TableResponse(meta=document.meta, rows=[]).model_dump_json()}\n")
    columns = list(document.rows[0].keys()) if document.rows else []
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(document.rows)
    return buffer.getvalue()


def emit(document: TableResponse, config: RunConfig, stream=None) -> Optional[Path]:
    """Write the rendered document to --out, or to ``stream`` (stdout) when no path is given."""
    text = render(document, config.output_format)
    if config.out:
        path = Path(config.out)
        path.write_text(text, encoding="utf-8")
        logger.info(config_loader.get_message("cli", "written", rows=len(document.rows), path=path))
        return path
    stream.write(text)
    return None
