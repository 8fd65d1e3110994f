# GrassMean package