"""Scenario runner, parameter sweeps, file emission, and the command line."""
