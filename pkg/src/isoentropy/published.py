"""Published reference values for the isotonic-oscillator entropies and variances.

Keys are ``(gamma, m)``.  Values are as printed, to four decimals.
"""

from __future__ import annotations

# (gamma, m) -> (S_rho, S_xi, S_rho + S_xi)
TABLE1 = {
    (1.5, 0): (0.6496, 1.5807, 2.2303),
    (1.5, 1): (0.9166, 1.9052, 2.8218),
    (1.5, 2): (1.0749, 2.0839, 3.1588),
    (1.5, 3): (1.1889, 2.2079, 3.3968),
    (2.5, 0): (0.6852, 1.4941, 2.1793),
    (2.5, 1): (0.9456, 1.8167, 2.7623),
    (2.5, 2): (1.0985, 2.0018, 3.1003),
    (2.5, 3): (1.2087, 2.1329, 3.3416),
    (3.5, 0): (0.6984, 1.4663, 2.1647),
    (3.5, 1): (0.9591, 1.7797, 2.7388),
    (3.5, 2): (1.1108, 1.9628, 3.0736),
    (3.5, 3): (1.2198, 2.2042, 3.4240),
}

# (gamma, m) -> (var_x, var_p, var_x * var_p)
TABLE2 = {
    (1.5, 0): (0.2268, 1.4640, 0.3320),
    (1.5, 1): (0.6352, 3.4456, 2.1887),
    (1.5, 2): (1.0238, 5.4317, 5.5608),
    (1.5, 3): (1.4074, 7.4199, 10.4424),
    (2.5, 0): (0.2365, 1.1666, 0.2759),
    (2.5, 1): (0.6746, 3.1665, 2.1362),
    (2.5, 2): (1.0869, 5.1663, 5.6152),
    (2.5, 3): (1.4875, 7.1661, 10.6597),
    (3.5, 0): (0.2405, 1.1000, 0.2646),
    (3.5, 1): (0.6939, 3.1000, 2.1511),
    (3.5, 2): (1.1225, 5.1000, 5.7235),
    (3.5, 3): (1.5367, 7.0999, 10.9108),
}

# ground states beyond the tables: gamma -> (var_x, var_p)
GROUND_STATE_VARIANCES = {
    4.5: (0.2427, 1.0714),
    5.5: (0.2441, 1.0555),
    6.5: (0.2450, 1.0455),
}

TABLE_GAMMAS = (1.5, 2.5, 3.5)
TABLE_M_MAX = 3

# Entropy-squeezing threshold and BBM bound as quoted.
HARMONIC_GROUND_ENTROPY = 1.07236
BBM_BOUND = 2.1447
