import os
from typing import List, Optional, Dict, Any
from dataclasses import dataclass

# VI_* settings may come from a .env file next to the working directory
try:
    from dotenv import load_dotenv
    load_dotenv()
except Exception:
    # without python-dotenv the process environment is used as is
    pass


ALL_ALGORITHMS = (1, 2, 3, 4, 5, 6, 7)


def _split_csv(value: Optional[str]) -> Optional[List[str]]:
    if not value:
        return None
    # "3, 1 # quick pair" -> ["3", "1"]
    no_comment = value.split('#', 1)[0]
    parts = [p.strip() for p in no_comment.split(',') if p.strip()]
    return parts or None


@dataclass
class Settings:
    # Logging
    LOG_LEVEL: str = os.environ.get('LOG_LEVEL', 'INFO').upper()

    # Solver defaults
    VI_DEFAULT_EPS: float = float(os.environ.get('VI_DEFAULT_EPS', '0.05'))
    VI_DEFAULT_SEED: int = int(os.environ.get('VI_DEFAULT_SEED', '7'))
    VI_MAX_ITER_FACTOR: int = int(os.environ.get('VI_MAX_ITER_FACTOR', '10'))
    VI_TRACE_EVERY: int = int(os.environ.get('VI_TRACE_EVERY', '0'))
    VI_START_RADIUS: float = float(os.environ.get('VI_START_RADIUS', '0.5'))

    # Experiment harness
    VI_OUTPUT_DIR: str = os.environ.get('VI_OUTPUT_DIR', 'results')
    VI_GRID_RESOLUTION: int = int(os.environ.get('VI_GRID_RESOLUTION', '400'))
    VI_WORKERS: int = int(os.environ.get('VI_WORKERS', '7'))
    VI_ALGORITHMS_RAW: Optional[str] = os.environ.get('VI_ALGORITHMS')

    @property
    def ALGORITHMS(self) -> List[int]:
        """Algorithms run by `--alg all`, in ascending order."""
        parts = _split_csv(self.VI_ALGORITHMS_RAW)
        if not parts:
            return list(ALL_ALGORITHMS)
        selected = sorted({int(p) for p in parts})
        unknown = [a for a in selected if a not in ALL_ALGORITHMS]
        if unknown:
            raise ValueError(f"VI_ALGORITHMS contains unknown algorithms: {unknown}")
        return selected

    def solver_defaults(self) -> Dict[str, Any]:
        return {
            'eps': self.VI_DEFAULT_EPS,
            'max_iter_factor': self.VI_MAX_ITER_FACTOR,
            'trace_every': self.VI_TRACE_EVERY,
        }


# process-wide settings, read once at import
settings = Settings()
