# Dual Parabolic Control Package
