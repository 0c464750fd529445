"""Reachability checking for timed pushdown automata.

The symbolic route (`translate`) reduces the timed model to a plain
pushdown automaton over region-valued stack symbols and decides
reachability by saturation (`pushdown`); the concrete route (`tpda`)
explores the real-valued semantics on a rational grid and serves as the
ground-truth oracle the symbolic answers are checked against.
"""

from .pushdown import (ModelError, Nop, Pda, PdaConfig, PdaRule, Pop, Push,
                       Reachable, ReplayError, Unreachable, Verdict, Witness,
                       bounded_bfs, is_state_reachable, pda_step,
                       reachable_states, witness_replay)
from .regions import (OMEGA, Item, Region, RegionError, clock_item,
                      insert_placements, is_bottom_shape, is_stack_shape,
                      parse_region, ref_item, region_of, render_region,
                      reset_insert, rotate, satisfies, sym_item,
                      time_successors)
from .tpda import (Interval, NopOp, PopOp, PushOp, ResetOp, TestOp, Tpda,
                   TpdaConfig, TpdaRule, compute_cmax, discrete_step,
                   grid_oracle, initial_config, timed_step, validate)
from .translate import (SymbolicTranslation, TranslationStats, analyze,
                        check_reachability, initial_region, merge,
                        push_regions, reachable_tpda_states, refresh)
from .dsl import ParseError, parse_model, render_model

__all__ = [name for name in dir() if not name.startswith("_")]
