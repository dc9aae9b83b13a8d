"""
Scénarios de Bell : indexation, stratégies déterministes, comportements
"""
