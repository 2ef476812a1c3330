"""
Model side of the wire protocol: serves any PredictionOracle over
newline-delimited JSON on stdin/stdout.
"""
import json
import logging
import sys
from typing import Callable, TextIO

from pydantic import ValidationError

from app.data.models import TimeSeriesInstance
from app.schemas.protocol import EngineMessage, Handshake, PredictRequest, ProbsResponse, Ready, Shutdown
from app.services.oracle_service import PredictionOracle

logger = logging.getLogger(__name__)

ModelFactory = Callable[[int, int], PredictionOracle]


def _write(stdout: TextIO, message) -> None:
    stdout.write(json.dumps(message.model_dump()) + "\n")
    stdout.flush()


def serve(factory: ModelFactory, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout) -> int:
    """
    Answer engine requests until shutdown.

    Args:
        factory: Builds the model once the handshake announces T and V.

    Returns:
        Process exit code: 0 after a shutdown message, 1 on a protocol error.
    """
    model = None
    for raw in stdin:
        line = raw.strip()
        if not line:
            continue
        try:
            message = EngineMessage.validate_python(json.loads(line))
        except (json.JSONDecodeError, ValidationError) as e:
            logger.error("protocol error: unreadable message: %s", e)
            return 1

        if isinstance(message, Handshake):
            model = factory(message.T, message.V)
            _write(stdout, Ready(C=model.n_classes))
        elif isinstance(message, PredictRequest):
            if model is None:
                logger.error("protocol error: predict before handshake")
                return 1
            probs = model.predict(TimeSeriesInstance(message.id, message.values))
            _write(stdout, ProbsResponse(id=message.id, probs=[float(p) for p in probs]))
        elif isinstance(message, Shutdown):
            if model is not None:
                model.close()
            return 0
    logger.error("protocol error: input closed without shutdown")
    return 1
