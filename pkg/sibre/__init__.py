"""
Self-improvement based terminal reward shaping, with the agents, environments
and oracles used to check it
"""

__version__ = "0.4.0"
