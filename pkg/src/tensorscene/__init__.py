"""Multi-microphone audio scene decomposition and unsupervised separation.

Core pieces: a nonnegative tensor-factorization autoencoder over magnitude
STFT scenes, clustering of the learned channel dictionary into sources, two
reconstruction methods, a shoebox image-source room simulator, and
SDR/SIR/SAR scoring.  A FastAPI service (``tensorscene.service``) wraps the
pipeline; the ``tensorscene`` CLI is a thin client for it.
"""

import logging
import os

__version__ = "0.1.0"

LOG_ENV_VAR = "TENSORSCENE_LOG"


def configure_logging(level: str | None = None) -> None:
    """Set up root logging from ``level`` or the TENSORSCENE_LOG env var."""
    name = (level or os.environ.get(LOG_ENV_VAR, "WARNING")).upper()
    numeric = getattr(logging, name, None)
    if not isinstance(numeric, int):
        numeric = logging.WARNING
    logging.basicConfig(
        level=numeric, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )
