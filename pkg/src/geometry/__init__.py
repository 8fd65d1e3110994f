# Geometry package