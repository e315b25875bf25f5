"""Legendrian knots and loops of Legendrians in standard contact R^3 and S^3."""
