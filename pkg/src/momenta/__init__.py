"""Bootstrap workbench for multi-matrix models.

Moment words, exact rational/polynomial arithmetic, Schwinger-Dyson systems,
symbolic moment reduction, power series, Hankel positivity, feasibility scans,
and an independent polygon-gluing oracle.
"""

__version__ = "0.1.0"
