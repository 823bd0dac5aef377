# app_config.py
import os
from dotenv import load_dotenv

load_dotenv()

# Logging
LOG_LEVEL = os.getenv('IGQH_LOG_LEVEL', 'WARNING')
LOG_FILE = os.getenv('IGQH_LOG_FILE')  # optional, adds a file handler

# Certification
DEFAULT_Q_SPECIALIZATION = os.getenv('IGQH_DEFAULT_Q', '1')
CHARPOLY_METHOD = os.getenv('IGQH_CHARPOLY_METHOD', 'faddeev')

# Reports
DEFAULT_REPORT_FORMAT = os.getenv('IGQH_REPORT_FORMAT', 'text')
REPORT_FORMATS = ('text', 'machine')

# Built-in elements to certify
ELEMENTS = {
    'gamma': 'gamma = D1 + D2',
    'euler': 'Euler field E = 5*D1 - t*D2',
}

# Truncation order of the certified matrix when --order is omitted
DEFAULT_ORDERS = {
    'gamma': 2,
    'euler': 4,
}

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE_ERROR = 3
EXIT_VIOLATION = 4
EXIT_INCONCLUSIVE = 5
