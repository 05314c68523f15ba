"""Exact verification of star-surgery computations.

Modules: ``exactlin`` (integer and rational linear algebra), ``mcg``
(Dehn twist words on a disk with holes), ``plumbing``, ``handlebody``,
``homblowup`` (classes in CP^2 # N(-CP^2)), ``swsearch`` (the basic-class
search) and ``cli``.
"""

__version__ = "0.1.0"
