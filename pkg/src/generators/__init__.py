"""Seeded random problems for sweeps and tests"""
