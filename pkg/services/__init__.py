"""
Services module for characteristic class computations
"""
