"""
Module de gestion des données
Modèles Pydantic et fichiers texte
"""
