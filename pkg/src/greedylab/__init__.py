"""Thresholding-greedy constants of finite-dimensional bases, estimated on rational grids."""

__version__ = "0.1.0"
