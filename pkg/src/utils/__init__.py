"""
Utilitaires : exceptions et journalisation
"""
