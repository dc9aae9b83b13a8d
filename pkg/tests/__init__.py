"""
Tests de la boîte à outils de non-localité
"""
