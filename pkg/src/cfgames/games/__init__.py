"""Game engines, strategies, liftings and reductions."""
from .engine import (AlreadyExited, ExitEvent, Forced, FreeSlot, PlayTranscript, Verdict, Winner,
                     detect_exit, forced_move, gs_adjudicate, gs_play, wadge_adjudicate, wadge_play)
from .lifting import BigGame, LiftedP1, LiftedP2, lift_p1, lift_p2
from .reduction import LimitImage, PrefixTransformer, strategy_to_reduction
from .strategies import (SKIP, FiniteState, ForcedThenPlayer, Player, Procedural, Role, Scripted,
                         Strategy, always_skip, const, copy_last, dump_mealy, first_letter_switch,
                         forced_then, lasso_player, observation_alphabet, parse_mealy,
                         random_player, resolve_strategy, skip_once_then_copy)

__all__ = [n for n in dir() if not n.startswith("_")]
