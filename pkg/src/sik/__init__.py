"""Exact index iteration for closed geodesics on Finsler spheres."""

__version__ = "0.1.0"
SCHEMA = "sik/1"
