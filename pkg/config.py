"""
Configuration module for Hecke Norm
Menyimpan semua konstanta, default numerik, dan konfigurasi aplikasi
"""

import os
from pathlib import Path

# ==================== APPLICATION INFO ====================
APP_NAME = "Hecke Norm"
APP_VERSION = "1.0.0"
APP_AUTHOR = "Anindyar Bintang Rahma Esa"
APP_DESCRIPTION = "Petersson norms of Hecke's weight-one theta series for real quadratic fields"

# ==================== PATHS ====================
BASE_DIR = Path(__file__).parent
OUTPUT_DIR = BASE_DIR / "output"
LOG_DIR = BASE_DIR / "logs"

# Buat direktori jika belum ada
for directory in [OUTPUT_DIR, LOG_DIR]:
    directory.mkdir(exist_ok=True)

# ==================== ENVIRONMENT ====================
PRECISION_ENV_VAR = "HECKE_NORM_PREC"


def env_precision(default: int) -> int:
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default


# ==================== QUADRATIC FIELD ====================
class FieldConfig:
    """Konfigurasi untuk aritmetika lapangan kuadrat"""

    # Exponent cap for the epsilon_kappa power scan
    EPSILON_SEARCH_CAP = 10**6

    # psi(method="auto") sums Dedekind sums directly up to this modulus
    DEDEKIND_DIRECT_LIMIT = 20000

    # Digits used for sqrt(D) and log(epsilon)
    MP_DPS = 30

    IDEAL_KEYWORDS = ('ring', 'different')


# ==================== THETA SERIES ====================
class ThetaConfig:
    """Konfigurasi untuk ekspansi q theta"""

    # settings.json value; HECKE_NORM_PREC wins over it
    BASE_PRECISION = 6
    DEFAULT_PRECISION = env_precision(BASE_PRECISION)

    # Relative padding of the enumeration box (1 = tight box)
    BOX_SCALE = 1


# ==================== NUMERICAL ORACLES ====================
class OracleConfig:
    """Konfigurasi untuk oracle numerik (E2*, cycle integral, Petersson)"""

    GAUSS_NODES = 64
    SERIES_TERMS = 64
    V_MAX = 40.0
    V_SPLIT = 3.0
    U_NODES = 64
    V_NODES = 96
    PETERSSON_TOLERANCE = 5e-3
    CYCLE_TOLERANCE = 1e-4
    MP_DPS = 30

    VERIFY_MODES = ('cycle', 'numeric', 'both')
    DEFAULT_VERIFY_MODE = 'both'


# ==================== OUTPUT SETTINGS ====================
class OutputConfig:
    """Konfigurasi untuk output files"""

    FORMATS = ('human', 'json', 'csv')
    DEFAULT_FORMAT = 'human'

    DEFAULT_REPORT_OUTPUT = "norm_report.json"
    DEFAULT_BATCH_OUTPUT = "batch.csv"

    CSV_COLUMNS = [
        'D', 'ideal', 'kappa', 'epsilon', 'psi0', 'psi1',
        'coefficient', 'norm_value', 'verified'
    ]

    # Auto-naming dengan timestamp
    USE_TIMESTAMP = True
    TIMESTAMP_FORMAT = "%Y%m%d_%H%M%S"

    CREATE_BACKUP = True

    # Digits printed for floating values (normValue, oracle sides)
    FLOAT_DIGITS = 15


# ==================== LOGGING ====================
class LogConfig:
    """Konfigurasi untuk logging"""

    LOG_LEVEL = "INFO"  # DEBUG, INFO, WARNING, ERROR, CRITICAL
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    LOG_FILE = LOG_DIR / "app.log"


# ==================== PERFORMANCE ====================
class PerformanceConfig:
    """Konfigurasi untuk performa"""

    MAX_WORKERS = 4  # untuk thread pool (batch rows, quadrature chunks)
    QUADRATURE_CHUNKS = 8


# ==================== EXIT CODES ====================
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VERIFY_FAILED = 2

# ==================== ERROR MESSAGES ====================
ERROR_MESSAGES = {
    'NOT_FUNDAMENTAL': "Bukan diskriminan fundamental positif: {value}",
    'RANK_DEFICIENT': "Generator tidak membentuk lattice rank 2: {value}",
    'ZERO_SCALAR': "Skalar nol tidak dapat dipakai: {value}",
    'SEARCH_CAP': "Pencarian epsilon_kappa melewati batas eksponen {value}",
    'NOT_UNIMODULAR': "Determinan matriks bukan 1: {value}",
    'NOT_INTEGRAL_MATRIX': "Matriks memiliki entri non-integer: {value}",
    'INTERNAL': "Inkonsistensi internal: {value}",
    'NOT_HYPERBOLIC': "Matriks tidak hiperbolik: {value}",
    'PARABOLIC_AXIS': "Sumbu vertikal (c = 0) tidak punya semi-lingkaran: {value}",
    'NOT_INTEGRAL_IDEAL': "Bukan ideal integral dari O_F: {value}",
    'SINGULAR': "Matriks singular: {value}",
    'INTEGRALITY_VIOLATION': "Konjugat tidak berada di SL2(Z): {value}",
    'NOT_UPPER_HALF_PLANE': "Titik tidak berada di setengah bidang atas: {value}",
    'PRECISION_TOO_LOW': "Presisi deret theta terlalu rendah: {value}",
    'PARSE_ERROR': "Gagal parsing input: {value}",
    'NOT_A_LATTICE': "Input bukan lattice yang valid: {value}",
    'CONTEXT_MISMATCH': "Elemen dari lapangan berbeda: {value}",
    'INVALID_CONFIG': "Konfigurasi kuadratur tidak valid: {value}",
}

# ==================== SUCCESS MESSAGES ====================
SUCCESS_MESSAGES = {
    'save_complete': "✓ File disimpan ke: {path}",
    'verify_pass': "✓ Verifikasi PASS untuk {label}",
    'batch_complete': "✓ Batch selesai: {count} baris",
}


# ==================== HELPER FUNCTIONS ====================
def get_output_path(filename: str, use_timestamp: bool = None) -> Path:
    """Generate output path dengan optional timestamp"""
    if use_timestamp is None:
        use_timestamp = OutputConfig.USE_TIMESTAMP

    if use_timestamp:
        from datetime import datetime
        timestamp = datetime.now().strftime(OutputConfig.TIMESTAMP_FORMAT)
        name, ext = os.path.splitext(filename)
        filename = f"{name}_{timestamp}{ext}"

    return OUTPUT_DIR / filename
