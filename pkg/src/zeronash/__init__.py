"""Zero-error Nash equilibrium coordination in Bayesian games.

Classical feasibility by exhaustive enumeration of local deterministic
strategies, Born-rule verification of entanglement-assisted strategies,
and depolarizing-noise sweeps.
"""

__version__ = "0.1.0"
