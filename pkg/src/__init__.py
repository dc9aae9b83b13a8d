"""
Non-localité de Bell : distance de trace au polytope local
Package principal de l'outil en ligne de commande
"""

__version__ = "1.0.0"
__description__ = "Quantification de la non-localité par distance de trace au polytope local"
