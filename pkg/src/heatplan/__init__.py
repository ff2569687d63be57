"""Carbon-neutral district-heating design toolkit.

Least-cost capacity expansion, near-optimal design generation (SPORES),
AC power-flow grid-impact quantification, and decision-space assembly.
"""

__version__ = "0.1.0"
