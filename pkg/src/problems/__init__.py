# Problemas de benchmark
