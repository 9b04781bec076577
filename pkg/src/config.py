"""Configuration for the verification toolkit.

Values come from the environment (or a local .env file) and fall back to the
defaults below. The CLI reads them once per invocation and checks each run's
parameters through RunConfig.
"""

import os
from enum import Enum
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, model_validator

load_dotenv()

# Exploration limits
NODE_CAP: int = int(os.getenv("SYNCHRO_NODE_CAP", "1000000"))  # configs per exploration

# Bounded asynchronous oracle
DEFAULT_BUFFER_BOUND: int = int(os.getenv("SYNCHRO_BUFFER_BOUND", "3"))
DEFAULT_DEPTH_BOUND: int = int(os.getenv("SYNCHRO_DEPTH_BOUND", "12"))

# Fallback cap on k for models that are not flow-bounded (corpus command)
DEFAULT_K_CAP: int = int(os.getenv("SYNCHRO_K_CAP", "4"))

# Logging
LOG_LEVEL: str = os.getenv("SYNCHRO_LOG_LEVEL", "WARNING")
LOG_FORMAT: str = os.getenv("SYNCHRO_LOG_FORMAT", "text")  # text | json
LOG_FILE: Optional[str] = os.getenv("SYNCHRO_LOG_FILE", None)

# Bundled corpus of reconstructed protocols
MODELS_PATH = Path(__file__).resolve().parent.parent / "models"

# Name of the relay process added by the delayed-system construction
RELAY_PROCESS = "pi"


class Command(str, Enum):
    CHECK = "check"
    MIN_K = "min-k"
    DEADLOCK = "deadlock"
    REACH = "reach"
    TRACE = "trace"
    EXPLORE = "explore"
    ORACLE = "oracle"
    CORPUS = "corpus"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    DOT = "dot"


NEEDS_K = {
    Command.CHECK,
    Command.DEADLOCK,
    Command.REACH,
    Command.TRACE,
    Command.EXPLORE,
    Command.ORACLE,
}


class RunConfig(BaseModel):
    """Parameters of one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    command: Command
    input: Optional[Path] = None
    k: Optional[int] = Field(default=None, ge=1)
    k_cap: Optional[int] = Field(default=None, ge=1)
    buffer_bound: int = Field(default=DEFAULT_BUFFER_BOUND, ge=1)
    depth_bound: int = Field(default=DEFAULT_DEPTH_BOUND, ge=1)
    node_cap: int = Field(default=NODE_CAP, ge=1)
    jobs: int = Field(default=1, ge=1)
    output_format: OutputFormat = OutputFormat.TEXT

    @model_validator(mode="after")
    def _k_given_when_needed(self) -> "RunConfig":
        if self.command in NEEDS_K and self.k is None:
            raise ValueError(f"{self.command.value} needs a value for k")
        return self
