"""Numerical core of the tax-efficient supply chain engine.

  demand_kernel → scenario_ops → equilibrium_c / equilibrium_r
  → statics (sensitivities, thresholds, dominance boundary) → sweep

oracle re-derives both equilibria by brute force for verification.
"""
