"""
Module de configuration
Paramètres numériques, limites et catalogue des familles intégrées
"""
