"""Heat kernels and heat trace coefficients for mixed Dirichlet/Neumann problems."""

__version__ = "0.1.0"
