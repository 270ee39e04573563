"""
Source code for chi-lt: local total antimagic labelings and the chromatic number chi_lt.
"""
