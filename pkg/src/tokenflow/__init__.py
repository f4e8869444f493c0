"""tokenflow: a miniature multi-worker dataflow engine whose coordination
layer is a capability-style timestamp token.

Operators hold tokens that entitle them to send timestamped data on specific
edges. Duplicating, downgrading, or discarding a token records count deltas
in bookkeeping the runtime drains between invocations; the resulting change
batches are the only coordination traffic between workers, and a per-worker
frontier tracker turns them into per-input lower bounds. Notifications,
watermarks, and operator-level flow control are provided as ordinary library
code on top, and a benchmark harness compares the three coordination styles.
"""

from .errors import DeadlockError, ProtocolError, TokenError, TopologyError
from .idioms import Notificator, OutputBudget, WatermarkStage, watermark_forward
from .operators import (
    Captured,
    capture,
    filter_records,
    frontier_floor,
    map_records,
    noop_forward,
    rolling_count,
    rolling_count_notified,
    rolling_count_watermarked,
    watermark_noop,
    window_end,
    windowed_average,
)
from .progress import (
    ChangeBatch,
    Location,
    MutableAntichain,
    Pointstamp,
    PortRef,
    minimal_antichain,
)
from .runtime import (
    Broadcast,
    DataflowBuilder,
    Engine,
    EngineConfig,
    Exchange,
    InputDriver,
    Message,
    Pipeline,
    Stream,
)
from .timestamps import INT_TIMES, PAIR_TIMES, IntegerTimes, ProductTimes, U64_MAX
from .tokens import TimestampToken, TimestampTokenRef, TokenBookkeeping, mint_initial
from .topology import DataflowTopology, compute_location_summaries
from .tracker import FrontierTracker, brute_force_frontier

__all__ = [
    "Broadcast",
    "Captured",
    "ChangeBatch",
    "DataflowBuilder",
    "DataflowTopology",
    "DeadlockError",
    "Engine",
    "EngineConfig",
    "Exchange",
    "FrontierTracker",
    "INT_TIMES",
    "InputDriver",
    "IntegerTimes",
    "Location",
    "Message",
    "MutableAntichain",
    "Notificator",
    "OutputBudget",
    "PAIR_TIMES",
    "Pipeline",
    "Pointstamp",
    "PortRef",
    "ProductTimes",
    "ProtocolError",
    "Stream",
    "TimestampToken",
    "TimestampTokenRef",
    "TokenBookkeeping",
    "TokenError",
    "TopologyError",
    "U64_MAX",
    "WatermarkStage",
    "brute_force_frontier",
    "capture",
    "compute_location_summaries",
    "filter_records",
    "frontier_floor",
    "map_records",
    "minimal_antichain",
    "mint_initial",
    "noop_forward",
    "rolling_count",
    "rolling_count_notified",
    "rolling_count_watermarked",
    "watermark_forward",
    "watermark_noop",
    "window_end",
    "windowed_average",
]

__version__ = "0.1.0"
