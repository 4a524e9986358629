"""
Service modules: sequences, descriptors, alignment, distances and trees.
"""
