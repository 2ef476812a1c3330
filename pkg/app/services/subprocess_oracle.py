"""
Subprocess Oracle - engine side of the wire protocol.
One request is in flight per process; concurrent callers are serialized.
"""
import json
import logging
import shlex
import subprocess
import threading
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ValidationError

from app.core.config import get_settings
from app.data.models import TimeSeriesInstance
from app.schemas.protocol import Handshake, PredictRequest, ProbsResponse, Ready, Shutdown
from app.services.oracle_service import OracleError, PredictionOracle

logger = logging.getLogger(__name__)


class OracleProtocolError(OracleError):
    """Raised on any deviation from the wire protocol."""
    pass


class SubprocessOracle(PredictionOracle):
    """Queries an external model process over newline-delimited JSON."""

    def __init__(self, command: Sequence[str], T: int, V: int, shutdown_timeout: Optional[float] = None):
        if not command:
            raise OracleProtocolError("empty model command")
        self.command = list(command)
        self.T = T
        self.V = V
        self.shutdown_timeout = shutdown_timeout or get_settings().ORACLE_SHUTDOWN_TIMEOUT
        self._lock = threading.Lock()
        self._requests = 0
        self._closed = False
        try:
            # stderr is inherited so model diagnostics reach the user
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as e:
            raise OracleProtocolError(f"cannot start model {self.command}: {e}") from e

        try:
            self._send(Handshake(T=T, V=V))
            ready = self._receive(Ready)
        except OracleProtocolError:
            self._terminate()
            raise
        if ready.C < 1:
            self._terminate()
            raise OracleProtocolError(f"model announced C={ready.C}")
        self.n_classes = ready.C
        logger.info("model process ready command=%s C=%d", " ".join(self.command), self.n_classes)

    def _send(self, message: BaseModel) -> None:
        try:
            self._proc.stdin.write(json.dumps(message.model_dump()) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise OracleProtocolError(f"model process closed its input: {e}") from e

    def _receive(self, expected: type):
        line = self._proc.stdout.readline()
        if line == "":
            raise OracleProtocolError(f"model process exited (code {self._proc.poll()}) before answering")
        try:
            payload = json.loads(line)
        except json.JSONDecodeError:
            raise OracleProtocolError(f"non-JSON line from model: {line.strip()[:200]!r}") from None
        if not isinstance(payload, dict) or payload.get("type") != expected.model_fields["type"].default:
            raise OracleProtocolError(f"expected a '{expected.model_fields['type'].default}' message, got {line.strip()[:200]!r}")
        try:
            return expected.model_validate(payload)
        except ValidationError as e:
            raise OracleProtocolError(f"malformed '{payload['type']}' message: {e}") from e

    def predict(self, instance: TimeSeriesInstance) -> np.ndarray:
        if instance.values.shape != (self.T, self.V):
            raise OracleProtocolError(
                f"instance {instance.id} has shape {instance.values.shape}, model expects ({self.T}, {self.V})"
            )
        with self._lock:
            if self._closed:
                raise OracleProtocolError("oracle already shut down")
            self._requests += 1
            request_id = f"{instance.id}#{self._requests}"
            self._send(PredictRequest(id=request_id, values=instance.values.tolist()))
            response = self._receive(ProbsResponse)
        if response.id != request_id:
            raise OracleProtocolError(f"response id {response.id} does not match request {request_id}")
        if len(response.probs) != self.n_classes:
            raise OracleProtocolError(
                f"response {response.id} has {len(response.probs)} probabilities, expected C={self.n_classes}"
            )
        return np.array(response.probs, dtype=np.float64)

    def _terminate(self) -> None:
        if self._proc.poll() is None:
            self._proc.kill()
            self._proc.wait()

    def close(self) -> None:
        """
        Send shutdown and wait for a clean exit.

        Raises:
            OracleProtocolError: If the model exits with a nonzero code or hangs.
        """
        with self._lock:
            if self._closed:
                return
            self._closed = True
            try:
                self._send(Shutdown())
                self._proc.stdin.close()
                code = self._proc.wait(timeout=self.shutdown_timeout)
            except subprocess.TimeoutExpired:
                self._terminate()
                raise OracleProtocolError("model did not exit after shutdown") from None
            except OracleProtocolError:
                self._terminate()
                raise
            finally:
                if self._proc.stdout:
                    self._proc.stdout.close()
        if code != 0:
            raise OracleProtocolError(f"model exited with code {code}")


def parse_command(spec: str) -> List[str]:
    """`cmd:"python model.py --x"` -> argv list."""
    body = spec[len("cmd:"):] if spec.startswith("cmd:") else spec
    argv = shlex.split(body)
    if not argv:
        raise OracleProtocolError(f"empty model command in '{spec}'")
    return argv
