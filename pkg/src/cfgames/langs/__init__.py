from .assembly import (ClopenCondition, LanguageHandle, NegatedCondition, assemble_A3,
                       assemble_game_language, assemble_theta_game, clopen_handle,
                       first_letter_handle, H_handle, oracle_membership, zero_star_one_handle)
from .machines import (build_H_automaton, build_h_complement, build_Lprime, build_regular_parts,
                       build_slot_checker, build_theta_checker, build_toy_A2,
                       first_letter_automaton, parse_cond, zero_star_one)
from .shapes import classify_pref_H, decide_closure_H, never_exits_pref_H

__all__ = [
    "ClopenCondition", "H_handle", "LanguageHandle", "NegatedCondition", "assemble_A3",
    "assemble_game_language", "assemble_theta_game", "build_H_automaton", "build_Lprime",
    "build_h_complement", "build_regular_parts", "build_slot_checker", "build_theta_checker",
    "build_toy_A2", "classify_pref_H", "clopen_handle", "decide_closure_H",
    "first_letter_automaton", "first_letter_handle", "never_exits_pref_H", "oracle_membership",
    "parse_cond", "zero_star_one", "zero_star_one_handle",
]
