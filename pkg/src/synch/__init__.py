"""k-synchronous semantics: k-exchanges and reachability"""

from .exchange import (
    ExchangeLabel,
    ReplayState,
    SyncConfig,
    apply_exchange,
    execution_of,
    k_exchange_successors,
    replay_exchanges,
    update_blocked,
)
from .explorer import (
    ReachabilityGraph,
    ReachResult,
    SearchResult,
    breadth_first,
    explore_sync,
    label_to_json,
    reachability_graph_to_dot,
    reachability_graph_to_json,
    sync_reach_local,
)

__all__ = [
    "ExchangeLabel",
    "ReachResult",
    "ReachabilityGraph",
    "ReplayState",
    "SearchResult",
    "SyncConfig",
    "apply_exchange",
    "breadth_first",
    "execution_of",
    "explore_sync",
    "k_exchange_successors",
    "label_to_json",
    "reachability_graph_to_dot",
    "reachability_graph_to_json",
    "replay_exchanges",
    "sync_reach_local",
    "update_blocked",
]
