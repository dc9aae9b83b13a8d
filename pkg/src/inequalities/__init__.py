"""
Fonctionnelles de Bell : CHSH, CGLMP, I_nn22, Mermin
"""
