# Funcional dual, recuperação primal e persistência
