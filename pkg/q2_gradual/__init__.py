# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

from ._core import (Base, Unknown, BaseT, Arrow, GBase, GFun, Num, BoolL,
                    UNKNOWN, NAT, BOOL, GFUN, GROUNDS, typeof,
                    ground_to_type, ground_of, consistent)
from ._abt import (Var, Lam, App, Lit, Inject, Project, Blame, ALam,
                   ABlame, Renaming, Substitution, IDENT, cons, ext,
                   extr, rename, subst_apply, bracket, shift, erase,
                   is_value)
from ._typecheck import (TypingError, infer, check, reconstruct,
                         check_core, type_of)
from ._reduce import (AppL, AppR, InjF, ProjF, HOLE, Rule, StepResult,
                      StuckTerm, Val, Blamed, Timeout, plug, step,
                      evaluate, run_exact, multistep)
from ._precision import (PrecTriple, type_prec, refl_prec, infer_term_prec,
                         validate_term_prec)
from ._castcomp import Inconsistent, CastRequest, compile_cast
from ._harness import (GenConfig, PrecPair, Consistent, Violation,
                       Inconclusive, Clause, Direction, ThreeValued,
                       CampaignReport, gen_type, gen_term, diverging_term,
                       abstract_mutate, gradual_verdict, sem_approx,
                       sem_approx_both, fuzz_campaign)
from ._syntax import ParseError, parse, parse_type, print_term, print_type
from ._report import campaign_report

__version__ = '2026.10.0.dev0'

__all__ = ['Base', 'Unknown', 'BaseT', 'Arrow', 'GBase', 'GFun', 'Num',
           'BoolL', 'UNKNOWN', 'NAT', 'BOOL', 'GFUN', 'GROUNDS', 'typeof',
           'ground_to_type', 'ground_of', 'consistent', 'Var', 'Lam', 'App',
           'Lit', 'Inject', 'Project', 'Blame', 'ALam', 'ABlame', 'Renaming',
           'Substitution', 'IDENT', 'cons', 'ext', 'extr', 'rename',
           'subst_apply', 'bracket', 'shift', 'erase', 'is_value',
           'TypingError', 'infer', 'check', 'reconstruct', 'check_core',
           'type_of', 'AppL', 'AppR', 'InjF', 'ProjF', 'HOLE', 'Rule',
           'StepResult', 'StuckTerm', 'Val', 'Blamed', 'Timeout', 'plug',
           'step', 'evaluate', 'run_exact', 'multistep', 'PrecTriple',
           'type_prec', 'refl_prec', 'infer_term_prec', 'validate_term_prec',
           'Inconsistent', 'CastRequest', 'compile_cast', 'GenConfig',
           'PrecPair', 'Consistent', 'Violation', 'Inconclusive', 'Clause',
           'Direction', 'ThreeValued', 'CampaignReport', 'gen_type',
           'gen_term', 'diverging_term', 'abstract_mutate',
           'gradual_verdict', 'sem_approx', 'sem_approx_both',
           'fuzz_campaign', 'ParseError', 'parse', 'parse_type',
           'print_term', 'print_type', 'campaign_report']
