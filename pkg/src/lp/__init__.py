"""
Programmes linéaires creux et appel au solveur HiGHS
"""
