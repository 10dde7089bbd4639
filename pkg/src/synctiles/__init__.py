"""Simulation and verification toolkit for the aTAM, syncTAM and
L-syncTAM tile assembly models."""

__version__ = "0.1.0"
