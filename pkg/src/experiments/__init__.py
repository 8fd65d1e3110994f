# Experiments package