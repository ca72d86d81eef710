import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    # Server
    PORT = int(os.getenv("PORT", "5001"))
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

    # Binary precision (bits) for mpmath evaluation
    EVAL_PRECISION = int(os.getenv("EVAL_PRECISION", "113"))

    # Fit jobs
    FIT_WORKERS = int(os.getenv("FIT_WORKERS", "4"))
    FIT_MAX_CANDIDATES = int(os.getenv("FIT_MAX_CANDIDATES", "500000"))
    FIT_SLACK_TOLERANCE = float(os.getenv("FIT_SLACK_TOLERANCE", "2"))
