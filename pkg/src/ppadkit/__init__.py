"""Total search problems at desk scale: circuit-defined end-of-line
instances, Sperner colourings, discrete Brouwer functions, and exact
Nash equilibrium solvers, each paired with a brute-force oracle."""

__version__ = "0.1.0"
