"""
Mesures de non-localité : NL, contenu non local, entropie relative
"""
