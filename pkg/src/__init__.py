"""lingwalk - coined quantum walks accepting binary formal languages."""
__version__ = "1.0.0"
