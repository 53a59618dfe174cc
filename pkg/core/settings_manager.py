"""
Settings Manager Module
Handle preferensi numerik pengguna (presisi, kuadratur, toleransi) dengan persistence
"""

import json
import logging
from dataclasses import dataclass, asdict, field, fields
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from config import (
    BASE_DIR, FieldConfig, ThetaConfig, OracleConfig,
    OutputConfig, LogConfig, PerformanceConfig, env_precision,
)

logger = logging.getLogger(__name__)

VALID_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


@dataclass
class UserSettings:
    """User preferences data class"""

    # Theta / field
    default_precision: int = ThetaConfig.BASE_PRECISION
    epsilon_search_cap: int = FieldConfig.EPSILON_SEARCH_CAP
    dedekind_direct_limit: int = FieldConfig.DEDEKIND_DIRECT_LIMIT

    # Oracles
    gauss_nodes: int = OracleConfig.GAUSS_NODES
    series_terms: int = OracleConfig.SERIES_TERMS
    v_max: float = OracleConfig.V_MAX
    u_nodes: int = OracleConfig.U_NODES
    v_nodes: int = OracleConfig.V_NODES
    tolerance: float = OracleConfig.PETERSSON_TOLERANCE
    cycle_tolerance: float = OracleConfig.CYCLE_TOLERANCE
    mp_dps: int = OracleConfig.MP_DPS

    # Output / runtime
    output_format: str = OutputConfig.DEFAULT_FORMAT
    output_use_timestamp: bool = True
    output_create_backup: bool = True
    max_workers: int = PerformanceConfig.MAX_WORKERS
    log_level: str = 'INFO'

    # Metadata
    last_modified: str = field(default_factory=lambda: datetime.now().isoformat())
    version: str = '1.0.0'


class SettingsManager:
    """Manage application settings with persistence"""

    SETTINGS_FILE = BASE_DIR / 'settings.json'

    def __init__(self, settings_file: Optional[Path] = None):
        if settings_file is not None:
            self.SETTINGS_FILE = Path(settings_file)
        self.settings = self.load_settings()

    def load_settings(self) -> UserSettings:
        """Load settings from file or create default"""
        if self.SETTINGS_FILE.exists():
            try:
                with open(self.SETTINGS_FILE, 'r', encoding='utf-8') as f:
                    data = json.load(f)
                known = {f.name for f in fields(UserSettings)}
                unknown = set(data) - known
                if unknown:
                    logger.warning(f"Ignoring unknown setting keys: {sorted(unknown)}")
                logger.info("Settings loaded from file")
                return UserSettings(**{k: v for k, v in data.items() if k in known})
            except (OSError, ValueError, TypeError) as e:
                logger.error(f"Failed to load settings: {e}")
                logger.info("Using default settings")

        return UserSettings()

    def save_settings(self) -> bool:
        """Save current settings to file"""
        try:
            self.settings.last_modified = datetime.now().isoformat()

            with open(self.SETTINGS_FILE, 'w', encoding='utf-8') as f:
                json.dump(asdict(self.settings), f, indent=2)

            logger.info("Settings saved successfully")
            return True
        except OSError as e:
            logger.error(f"Failed to save settings: {e}")
            return False

    def reset_to_defaults(self):
        """Reset all settings to default values"""
        self.settings = UserSettings()
        logger.info("Settings reset to defaults")

    def export_settings(self, export_path: str) -> bool:
        """Export settings to specific path"""
        try:
            with open(export_path, 'w', encoding='utf-8') as f:
                json.dump(asdict(self.settings), f, indent=2)

            logger.info(f"Settings exported to: {export_path}")
            return True
        except OSError as e:
            logger.error(f"Failed to export settings: {e}")
            return False

    def import_settings(self, import_path: str) -> bool:
        """Import settings from file"""
        try:
            with open(import_path, 'r', encoding='utf-8') as f:
                data = json.load(f)

            self.settings = UserSettings(**data)
            logger.info(f"Settings imported from: {import_path}")
            return True
        except (OSError, ValueError, TypeError) as e:
            logger.error(f"Failed to import settings: {e}")
            return False

    def get_setting(self, key: str, default: Any = None) -> Any:
        return getattr(self.settings, key, default)

    def set_setting(self, key: str, value: Any) -> bool:
        """Set specific setting value; strings are coerced to the field type"""
        if not hasattr(self.settings, key) or key in ('last_modified', 'version'):
            logger.warning(f"Unknown setting key: {key}")
            return False
        current = getattr(self.settings, key)
        try:
            if isinstance(current, bool) and isinstance(value, str):
                value = value.strip().lower() in ('1', 'true', 'yes', 'y', 'on')
            elif isinstance(value, str) and not isinstance(current, str):
                value = type(current)(value)
        except ValueError as e:
            logger.error(f"Failed to set setting {key}: {e}")
            return False
        setattr(self.settings, key, value)
        logger.debug(f"Setting updated: {key} = {value}")
        return True

    def apply_to_config(self):
        """Apply user settings to config classes"""
        s = self.settings
        ThetaConfig.BASE_PRECISION = s.default_precision
        ThetaConfig.DEFAULT_PRECISION = env_precision(s.default_precision)
        FieldConfig.EPSILON_SEARCH_CAP = s.epsilon_search_cap
        FieldConfig.DEDEKIND_DIRECT_LIMIT = s.dedekind_direct_limit

        OracleConfig.GAUSS_NODES = s.gauss_nodes
        OracleConfig.SERIES_TERMS = s.series_terms
        OracleConfig.V_MAX = s.v_max
        OracleConfig.U_NODES = s.u_nodes
        OracleConfig.V_NODES = s.v_nodes
        OracleConfig.PETERSSON_TOLERANCE = s.tolerance
        OracleConfig.CYCLE_TOLERANCE = s.cycle_tolerance
        OracleConfig.MP_DPS = s.mp_dps

        OutputConfig.DEFAULT_FORMAT = s.output_format
        OutputConfig.USE_TIMESTAMP = s.output_use_timestamp
        OutputConfig.CREATE_BACKUP = s.output_create_backup
        PerformanceConfig.MAX_WORKERS = s.max_workers
        LogConfig.LOG_LEVEL = s.log_level

        logger.info("User settings applied to configuration")

    def validate_settings(self) -> Dict[str, list]:
        """Validate current settings and return issues"""
        s = self.settings
        issues = {}

        for name in ('default_precision', 'epsilon_search_cap', 'dedekind_direct_limit',
                     'gauss_nodes', 'series_terms', 'u_nodes', 'v_nodes', 'mp_dps'):
            if getattr(s, name) < 1:
                issues.setdefault('numeric', []).append(f'{name} must be positive')

        if s.v_max <= OracleConfig.V_SPLIT:
            issues.setdefault('oracle', []).append(f'v_max must exceed {OracleConfig.V_SPLIT}')
        for name in ('tolerance', 'cycle_tolerance'):
            if not 0 < getattr(s, name) < 1:
                issues.setdefault('oracle', []).append(f'{name} must be in (0, 1)')

        if s.output_format not in OutputConfig.FORMATS:
            issues.setdefault('output', []).append(f'Format must be one of: {OutputConfig.FORMATS}')

        if s.max_workers < 1:
            issues.setdefault('performance', []).append('Max workers must be at least 1')

        if s.log_level not in VALID_LOG_LEVELS:
            issues.setdefault('advanced', []).append(f'Log level must be one of: {VALID_LOG_LEVELS}')

        return issues

    def get_settings_summary(self) -> str:
        """Get human-readable summary of current settings"""
        s = self.settings

        return f"""
╔══════════════════════════════════════════════════════════════╗
║                    CURRENT SETTINGS                          ║
╚══════════════════════════════════════════════════════════════╝

🔢 FIELD & THETA
  Default precision X: {s.default_precision}
  eps_kappa scan cap:  {s.epsilon_search_cap}
  Dedekind direct <=:  {s.dedekind_direct_limit}

📐 ORACLES
  Gauss nodes:         {s.gauss_nodes}
  Series terms:        {s.series_terms}
  v max:               {s.v_max}
  u / v nodes:         {s.u_nodes} / {s.v_nodes}
  Petersson tol:       {s.tolerance}
  Cycle tol:           {s.cycle_tolerance}
  mpmath dps:          {s.mp_dps}

💾 OUTPUT
  Format:              {s.output_format}
  Use Timestamp:       {'Yes' if s.output_use_timestamp else 'No'}
  Create Backup:       {'Yes' if s.output_create_backup else 'No'}

⚡ PERFORMANCE
  Max Workers:         {s.max_workers}
  Log Level:           {s.log_level}

📊 METADATA
  Last Modified:       {s.last_modified}
  Version:             {s.version}
        """


_settings_manager = None


def get_settings_manager() -> SettingsManager:
    """Get singleton settings manager instance"""
    global _settings_manager
    if _settings_manager is None:
        _settings_manager = SettingsManager()
    return _settings_manager
