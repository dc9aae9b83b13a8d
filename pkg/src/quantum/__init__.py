"""
États purs, mesures projectives et règle de Born
"""
