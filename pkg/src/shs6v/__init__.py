"""Stochastic higher spin six vertex model: exact weights, sampling, and telegraph limits."""

__version__ = "0.1.0"
