"""
Test suite for seqsim
"""
