"""
Command modules registered on the typer application
"""
