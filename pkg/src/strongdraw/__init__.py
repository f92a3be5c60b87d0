"""strongdraw: achievement games on k-uniform hypergraphs.

The package is organised in layers:

* :mod:`strongdraw.hypercore` — targets, copies, overlap measures, links.
* :mod:`strongdraw.oracles` — small brute-force re-implementations used as
  ground truth in tests; deliberately slow and size-limited.
* :mod:`strongdraw.game` — alternating game state, legality, win/draw
  detection and incremental threat tracking.
* :mod:`strongdraw.strategy` — the second player's drawing strategies plus
  simple first-player adversaries.
* :mod:`strongdraw.verify` — canonical forms, exhaustive adversarial search,
  randomized playout harnesses and an exact solver for tiny boards.
* :mod:`strongdraw.cli` — command-line entry points and the line-JSON serve
  protocol.
"""

from .hypercore import (
    TargetGraph,
    enumerate_copies,
    get_target,
    lift,
    lowest_increasing_edge,
    make_g_minus,
    make_hat_k2l,
    make_k2t_s,
    max_overlap,
    max_overlap_roles,
    x_board,
)
from .game import (
    ArityMismatch,
    EdgeAlreadyClaimed,
    GameError,
    GameState,
    GameStatus,
    P1,
    P2,
    ThreatRecord,
    WrongTurn,
    apply_move,
    fresh_vertex,
    new_game,
    threats,
    trace_dump,
    trace_load,
)
from .strategy import (
    GreedyP1,
    InapplicableState,
    P2Player,
    RandomP1,
    ScriptedP1,
    ScriptExhausted,
    StrategyDecision,
    StrategyMemory,
    WrongTurnForStrategy,
    distraction_ready,
    get_p1_policy,
    get_p2_strategy,
    resume_player,
)
from .verify import (
    GameValue,
    VerifyReport,
    canonical_form,
    exact_solve,
    exhaustive_verify,
    playout_suite,
    position_key,
    random_states,
    validate_orbit_reduction,
)

__version__ = "0.1.0"

__all__ = [
    "TargetGraph",
    "enumerate_copies",
    "get_target",
    "lift",
    "lowest_increasing_edge",
    "make_g_minus",
    "make_hat_k2l",
    "make_k2t_s",
    "max_overlap",
    "max_overlap_roles",
    "x_board",
    "ArityMismatch",
    "EdgeAlreadyClaimed",
    "GameError",
    "GameState",
    "GameStatus",
    "P1",
    "P2",
    "ThreatRecord",
    "WrongTurn",
    "apply_move",
    "fresh_vertex",
    "new_game",
    "threats",
    "trace_dump",
    "trace_load",
    "GreedyP1",
    "InapplicableState",
    "P2Player",
    "RandomP1",
    "ScriptedP1",
    "ScriptExhausted",
    "StrategyDecision",
    "StrategyMemory",
    "WrongTurnForStrategy",
    "distraction_ready",
    "get_p1_policy",
    "get_p2_strategy",
    "resume_player",
    "GameValue",
    "VerifyReport",
    "canonical_form",
    "exact_solve",
    "exhaustive_verify",
    "playout_suite",
    "position_key",
    "random_states",
    "validate_orbit_reduction",
    "__version__",
]
