"""
seqsim command line. Run with `python -m commands <subcommand> ...`.
"""
