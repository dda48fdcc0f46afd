# Solvers Dual+FRCG e Dual+SSN
