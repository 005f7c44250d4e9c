#!/usr/bin/env python3
"""
Runtime settings (from the environment / .env) and the frozen numeric
windows used by the verification checks.
"""

import math
import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

VERSION = "1.0.0"
SCHEMA_VERSION = 1

# --- environment -----------------------------------------------------------

CACHE_DIR = Path(os.getenv("HECKE_CACHE_DIR", "tau-cache"))
CACHE_FILE_NAME = "tau.cache"
TAU_CEILING = int(os.getenv("HECKE_TAU_CEILING", str(10**6)))
SIEVE_CEILING = int(os.getenv("HECKE_SIEVE_CEILING", str(2**50)))
THREADS = max(1, int(os.getenv("HECKE_THREADS", str(os.cpu_count() or 1))))

# --- arith -------------------------------------------------------------------

SIEVE_SEGMENT = 1 << 20
# Witnesses that make Miller-Rabin deterministic below 3.3e24.
MILLER_RABIN_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# --- eigenforms --------------------------------------------------------------

TAU_WEIGHT = 12
# Exponent slack in the surrogate Ramanujan bound |a_n| <= d(n) n^eps0.
RAMANUJAN_EPS0 = 0.01

# --- characters --------------------------------------------------------------

CHARACTER_MODULUS_CEILING = 10**6
# Cyclic components above this size use baby-step/giant-step for single logs.
DLOG_TABLE_LIMIT = 10**4

# --- amplitude ---------------------------------------------------------------

CONDITION_SAMPLES = 1024
# |ratio| windows for conditions iii)-vii); power family gives constants
# between gamma^2 (1-gamma) ~ 0.02 and 2^gamma ~ 2 for gamma in [0.9, 0.97].
CONDITION_WINDOW = (1e-3, 1e3)
INVERSION_RTOL = 1e-13

# Error-profile windows on interior arcs. Taylor estimates for the power
# family: (f-g)'''(x0) = g^2 (g-1) x0^(g-3), so d1 <= (x0/N)^(1-g) / (2 g^2 (1-g))
# ~ 18 at g = 0.97, d2 <= N/x0 and d3 in [0.007, 0.08] for g in [0.9, 0.97].
PROFILE_D1_MAX = 200.0
PROFILE_D2_MAX = 20.0
PROFILE_D3_WINDOW = (1e-3, 1.0)

# --- farey -------------------------------------------------------------------

M_SLACK = 1e-9
# m <= K N^2 / (qQ f(N)); |h'| = g^2 (1-g) f/x^2 puts interior arcs near
# 2/(g^2 (1-g)) ~ 46 at g = 0.95, so K carries that with room.
PROJECTED_M_CONSTANT = 64.0
OWNER_WINDOW = (0.25, 4.0)
ARC_COUNT_WINDOW = (0.25, 4.0)

# --- oscillatory ---------------------------------------------------------------

GAUSS_ORDER = 20
PANEL_CYCLES = 0.5
MAX_PANELS = 400_000
LAMBDA_SAMPLES = 4096
DEGENERATE_LAMBDA = 1e-14
# |int e(phi)| * Lambda^(1/k) ceilings: k=1 monotone phi' gives 1/pi;
# k >= 2 from the (5 2^(k-1) - 2) (2 pi)^(-1/k) form of the k-th derivative test.
VDC_CONSTANTS = {1: 0.32, 2: 3.2, 3: 9.8, 4: 24.0}
PERRON_EPSILON = 0.1

# --- expsum ------------------------------------------------------------------

ADMISSIBILITY_ETA = 0.05
Q_CONDITION_ETA = 0.0
BOUND_RATIO_CEILING = 10.0

# --- piatetski ---------------------------------------------------------------

C_RANGE = (1.0, 12.0 / 11.0)
FLOOR_AMBIGUITY = 1e-9
ESCALATION_DPS = 50
# |psi - psi_J| <= SAWTOOTH_TAIL / (J * dist(x, Z)); Abel summation gives 1/(2 pi).
SAWTOOTH_TAIL = 1.0 / (2.0 * math.pi) + 0.05
PS_BLOCK = 1 << 16
# N grid for the lambda^2 trend and the counting-error envelope.
PS_GRID = (1_000, 10_000, 100_000)
# |diff / N| <= COUNTING_ERROR_CONSTANT * N^-COUNTING_ERROR_DECAY for unit weights.
COUNTING_ERROR_CONSTANT = 0.05
COUNTING_ERROR_DECAY = 0.1
