"""Permutation groups, group retracts and orbit lookup trees."""
