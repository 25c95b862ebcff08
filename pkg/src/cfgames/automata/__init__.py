from .acceptance import (Bounds, Certificate, Outcome, accepting_run, buchi_nonempty,
                         lasso_accepts_buchi, lasso_accepts_counter, verify_certificate)
from .closure import intersect_regular, union
from .machine import (Config, CounterBuchiMachine, RuleBuilder, RunRecord, TransitionRule,
                      simulate_prefix, successors)
from .textfmt import dump_automaton, parse_automaton, to_dot
from .words import (Alphabet, Lasso, RunWord, as_word, format_lasso, format_word,
                    lasso_prefix, parse_lasso, parse_word)

__all__ = [
    "Alphabet", "Bounds", "Certificate", "Config", "CounterBuchiMachine", "Lasso",
    "Outcome", "RuleBuilder", "RunRecord", "RunWord", "TransitionRule",
    "accepting_run", "as_word", "buchi_nonempty", "dump_automaton", "format_lasso",
    "format_word", "intersect_regular", "lasso_accepts_buchi", "lasso_accepts_counter",
    "lasso_prefix", "parse_automaton", "parse_lasso", "parse_word", "simulate_prefix",
    "successors", "to_dot", "union", "verify_certificate",
]
