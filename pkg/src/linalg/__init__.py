# Álgebra linear esparsa e densa
