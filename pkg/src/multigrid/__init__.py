# Multigrid geométrico
