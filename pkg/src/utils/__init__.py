# GrassMean utilities package