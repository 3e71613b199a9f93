# SemiLab package
