"""Pointwise Spin(7)/G2 calibrated geometry toolkit.

Submodules:

* ``multivec``: exterior algebra over R^n (n <= 8), exact or floating.
* ``spin7``: the model 4-form on R^8, cross products, form splittings,
  frames, and the structure-form certificate.
* ``g2``: the induced 3-form geometry on R^7 with associative and
  coassociative plane tests.
* ``dirac``: pointwise operator algebra of the deformation operator
  (bundle E, principal symbols, Clifford checks, symbol intertwinings).
* ``calib``: calibration values, Cayley testing, comass optimization over
  the Grassmannian, and the standard Calabi-Yau structures on C^4.
* ``surgery``: integer bookkeeping of topological invariants under
  cut-and-paste moves.
* ``index``: index formulas evaluated from integer/real inputs, with
  parity validation and derivation tables.
* ``reproduce``: end-to-end derivations of the two worked index examples.
* ``cli``: command-line front end.
"""

__version__ = "0.1.0"
