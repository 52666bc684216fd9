"""
CV-QKD Reconciliation Simulator

Monte-Carlo simulation of multidimensional reverse reconciliation for
continuous-variable QKD: syndrome-based, bit-difference and codeword-based
schemes with LDPC, convolutional and irregular convolutional codes, plus the
secret-key-rate analytics that turn a BLER threshold into a secure distance.
"""

__version__ = "1.0.0"
