# Elementos finitos P1
