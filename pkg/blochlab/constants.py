"""
Constants, enums and settings dataclasses for blochlab.
"""

import math
from enum import Enum
from dataclasses import dataclass, field
from typing import Optional


class Verdict(Enum):
    """Continuity verdict for an operator on the logarithmic Bloch space."""
    BOUNDED = "bounded"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


class Trend(Enum):
    """Shape of a ratio sequence over its tail window."""
    DECAYING = "decaying-to-zero"
    BOUNDED = "bounded"
    GROWING = "growing"
    INCONCLUSIVE = "inconclusive"


class SeriesKind(Enum):
    """Which ratio sequence a series holds."""
    J = "J"
    I = "I"
    GROWTH = "growth"
    J_PRIMED = "J'"
    I_PRIMED = "I'"


class Space(Enum):
    """Function spaces whose norms are computed."""
    GROWTH = "growth"
    BLOCH = "bloch"
    BLOCH_SEMINORM = "bloch_seminorm"
    ZYGMUND = "zygmund"
    ZYGMUND_SEMINORM = "zygmund_seminorm"


@dataclass(frozen=True)
class GridSpec:
    """Polar grid resolution used by the disk sup-solver."""
    radial: int = 512
    angular: int = 256

    # Closest approach to the unit circle, as 1 - r
    clamp: float = 1e-12

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse the CLI form ``RxA`` (e.g. ``512x256``)."""
        parts = text.lower().split("x")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise ValueError(f"grid must look like RxA, got {text!r}")
        return cls(radial=int(parts[0]), angular=int(parts[1]))

    def __str__(self) -> str:
        return f"{self.radial}x{self.angular}"


@dataclass
class AnalysisSettings:
    """Defaults for an operator analysis run."""
    nmax: int = 400
    grid: GridSpec = field(default_factory=GridSpec)
    tol: float = 1e-6

    # None lets the worker pool pick its own size
    threads: Optional[int] = None

    # Boundary ladder r_k = 1 - 2^-k, k = 1..ladder_kmax
    ladder_kmax: int = 30

    # Monomial family size for associated-weight estimates
    assoc_nmax: int = 400


# Radius cap: r <= 1 - RADIUS_CLAMP everywhere
RADIUS_CLAMP = 1e-12

# Golden-section polish tolerance in the search parameter
REFINE_XTOL = 1e-8

# Coordinate sweeps (r then theta) after the grid pass
REFINE_SWEEPS = 4

# Nodes of the 1D boundary-clustered scan used for radial sups
RADIAL_SCAN_NODES = 4096

# Accept phi as a self-map when sup |phi| <= 1 + SELF_MAP_TOL
SELF_MAP_TOL = 1e-9

# Compactness: Q <= COMPACT_REL_THRESHOLD * scale
COMPACT_REL_THRESHOLD = 1e-6

# Scale proxy for compactness: ratios with n <= SCALE_PROXY_NMAX
SCALE_PROXY_NMAX = 10

# Tail slope (log ratio against log n) separating growth from flatness
TREND_SLOPE = 0.05

# Standard errors the slope must clear before a trend counts as significant
TREND_CONFIDENCE = 2.0

# Allowed change of the running max when N doubles, for a bounded verdict
STABILITY_REL_CHANGE = 0.05

# Every n up to this value is sampled, then 2^k * {1, 5/4, 25/16}
DENSE_SCHEDULE_MAX = 64

# Smallest admissible nmax for ratio series
MIN_NMAX = 8

# Smallest admissible grid dimension
MIN_GRID_DIM = 16

# Largest admissible declared tolerance
MAX_TOL = 1e-2

# Closed forms used across modules and suites
TWO_OVER_E = 2.0 / math.e
LOGLOG_2 = math.log(math.log(2.0))

REPORT_SCHEMA_VERSION = 1

DEFAULT_CONFIG_PATH = "config.yaml"
