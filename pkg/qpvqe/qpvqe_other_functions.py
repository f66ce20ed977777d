import os

import numpy as np
from tqdm import tqdm

SEED_VARIABLE = "QPVQE_SEED"


# progress() : wraps a loop in a tqdm bar when asked to, else returns it untouched
def progress(iterable, enabled=False, desc=None, total=None):
    if not enabled:
        return iterable
    return tqdm(iterable, desc=desc, total=total, leave=False)


# rng_stream() : independent generator for run number run_index of a seeded job
def rng_stream(seed, run_index=0):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(run_index)]))


# seed_from_environment() : explicit seed first, then QPVQE_SEED, then default
def seed_from_environment(seed=None, default=0):
    if seed is not None:
        return int(seed)
    value = os.environ.get(SEED_VARIABLE)
    if value is None or not value.strip():
        return default
    return int(value)
