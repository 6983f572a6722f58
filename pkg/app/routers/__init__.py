from . import cfun, dunkl, hyper, ktypes, match, roots, spherical, transform

__all__ = ["cfun", "dunkl", "hyper", "ktypes", "match", "roots", "spherical", "transform"]
