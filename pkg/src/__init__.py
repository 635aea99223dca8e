"""
cantorlab: Cantor sets of stationary Bratteli diagrams.
"""
