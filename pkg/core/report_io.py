"""
Report IO Module
Serialisasi hasil (JSON / CSV / human) dan penulisan file aman dengan backup
"""

import csv
import io
import json
import logging
import shutil
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from config import OutputConfig, SUCCESS_MESSAGES, get_output_path

logger = logging.getLogger(__name__)


class ReportWriter:
    """Class untuk serialisasi dan penulisan laporan"""

    @staticmethod
    def to_json(data: Dict) -> str:
        """Canonical JSON: fixed key order, so re-serialising is byte-identical"""
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @staticmethod
    def to_csv(rows: Iterable[Dict], columns: Optional[List[str]] = None) -> str:
        columns = columns or OutputConfig.CSV_COLUMNS
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n", extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return buffer.getvalue()

    @staticmethod
    def format_float(value: Optional[float]) -> str:
        if value is None:
            return "-"
        return f"{value:.{OutputConfig.FLOAT_DIGITS}g}"

    @staticmethod
    def create_backup(filepath: str) -> Optional[str]:
        """
        Buat backup file jika sudah exist
        Returns: backup path or None
        """
        path = Path(filepath)

        if not path.exists():
            return None

        timestamp = datetime.now().strftime(OutputConfig.TIMESTAMP_FORMAT)
        backup_path = path.parent / f"{path.stem}_backup_{timestamp}{path.suffix}"

        try:
            shutil.copy2(filepath, backup_path)
            logger.info(f"Backup created: {backup_path}")
            return str(backup_path)
        except OSError as e:
            logger.error(f"Failed to create backup: {e}")
            return None

    @staticmethod
    def safe_write(output_path: str, content: str, encoding: str = 'utf-8',
                   create_backup: Optional[bool] = None) -> Tuple[bool, Optional[str]]:
        """
        Safe file writing dengan backup option
        Returns: (success, error_message)
        """
        if create_backup is None:
            create_backup = OutputConfig.CREATE_BACKUP
        path = Path(output_path)

        try:
            if path.exists() and create_backup:
                ReportWriter.create_backup(output_path)

            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding=encoding, newline="") as f:
                f.write(content)

            logger.info(SUCCESS_MESSAGES['save_complete'].format(path=output_path))
            return True, None

        except OSError as e:
            error_msg = f"Gagal menulis file: {e}"
            logger.error(error_msg)
            return False, error_msg

    @staticmethod
    def resolve_output(out: str, default_name: str) -> str:
        """'auto' -> timestamped file in OUTPUT_DIR, otherwise the given path"""
        if out == 'auto':
            return str(get_output_path(default_name))
        return out
