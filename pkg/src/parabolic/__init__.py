# Varreduras no tempo
