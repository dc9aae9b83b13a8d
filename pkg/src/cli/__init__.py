"""
Interface en ligne de commande et balayages
"""
