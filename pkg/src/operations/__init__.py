"""
Opérations libres et essais de monotonie
"""
