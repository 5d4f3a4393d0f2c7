"""Handover-aware trajectory planning for cellular-connected UAVs."""
