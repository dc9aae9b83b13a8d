"""
Essais aléatoires de monotonie de NL sous les opérations libres
"""

import logging
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from config.settings import CLI_CONFIG, SCAN_CONFIG
from measures.trace import nl
from operations.channels import random_input_channel, random_local_channel, random_relabeling
from operations.free import convex_mix, input_enlarge, post_process, pre_process, relabel
from scenario.behaviors import CHSH_SCENARIO, sample_chsh_nonsignaling, sample_local_behavior
from scenario.strategies import enumerate_strategies

logger = logging.getLogger(__name__)


class OperationClass(Enum):
    """Classes d'opérations libres testées"""
    RELABEL = "relabel"
    CONVEXITY = "convexity"
    LOCAL_MIXING = "local_mixing"
    POST_PROCESSING = "post_processing"
    PRE_PROCESSING = "pre_processing"
    INPUT_ENLARGING = "input_enlarging"


def _trial(operation: OperationClass, trial: int, seed: int) -> Dict:
    """Un essai : (NL avant, NL après) pour un comportement non signalant aléatoire"""
    class_index = list(OperationClass).index(operation)
    rng = np.random.default_rng([seed, class_index, trial])
    behavior = sample_chsh_nonsignaling(rng)
    before = nl(behavior).value
    exact = False

    if operation == OperationClass.RELABEL:
        after = nl(relabel(behavior, random_relabeling(CHSH_SCENARIO, rng))).value
        exact = True
    elif operation == OperationClass.CONVEXITY:
        other = sample_chsh_nonsignaling(rng)
        weight = float(rng.random())
        before = weight * before + (1.0 - weight) * nl(other).value
        after = nl(convex_mix([(weight, behavior), (1.0 - weight, other)])).value
    elif operation == OperationClass.LOCAL_MIXING:
        local = sample_local_behavior(enumerate_strategies(CHSH_SCENARIO), rng)
        weight = float(rng.random())
        before = weight * before
        after = nl(convex_mix([(weight, behavior), (1.0 - weight, local)])).value
    elif operation == OperationClass.POST_PROCESSING:
        after = nl(post_process(behavior, random_local_channel(CHSH_SCENARIO, rng))).value
    elif operation == OperationClass.PRE_PROCESSING:
        after = nl(pre_process(behavior, random_input_channel(CHSH_SCENARIO, rng))).value
    else:
        party = int(rng.integers(CHSH_SCENARIO.parties))
        fixed_output = int(rng.integers(CHSH_SCENARIO.outputs[party]))
        after = nl(input_enlarge(behavior, party, fixed_output)).value

    tolerance = CLI_CONFIG["monotonicity_tolerance"]
    passed = abs(after - before) <= tolerance if exact else after <= before + tolerance
    return {
        "class": operation.value,
        "trial": trial,
        "nl_before": before,
        "nl_after": after,
        "passed": bool(passed)
    }


def run_monotonicity_trials(
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    jobs: int = 1,
    classes: Optional[List[OperationClass]] = None
) -> pd.DataFrame:
    """
    Vérifier NL(op(q)) ≤ NL(q) sur des essais aléatoires reproductibles

    Le réétiquetage doit laisser NL invariant, la convexité compare NL du
    mélange à la moyenne des NL et le mélange avec un point local de poids
    1 - π à π·NL(q).

    Returns:
        DataFrame (class, trial, nl_before, nl_after, passed), ordonné par
        classe puis par essai quel que soit jobs
    """
    if trials is None:
        trials = CLI_CONFIG["monotonicity_trials"]
    if seed is None:
        seed = SCAN_CONFIG["default_seed"]
    if classes is None:
        classes = list(OperationClass)

    rows = Parallel(n_jobs=jobs, prefer="threads")(
        delayed(_trial)(operation, trial, seed)
        for operation in classes
        for trial in range(trials)
    )
    table = pd.DataFrame(rows)

    failures = table[~table["passed"]]
    for _, row in failures.iterrows():
        logger.warning(
            "Monotonie violée (%s, essai %d) : %.12g -> %.12g",
            row["class"], row["trial"], row["nl_before"], row["nl_after"]
        )
    logger.info("%d essais, %d échecs", len(table), len(failures))
    return table
