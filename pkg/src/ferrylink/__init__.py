"""Buffer-aided mobile-relay ("data ferry") UAV network toolkit.

Subpackages / modules:

- ``acm``         distance-switched coding/modulation table and data rates
- ``linkmodel``   path loss, correlated Rician MIMO channels, SINR/throughput
- ``staticrelay`` hover-point optimization when both links coexist
- ``ferry``       8-state relay-loop simulator (compiled kernel + fallback)
- ``moga``        box-archive multi-objective genetic optimizer
- ``cli``         scenario ingestion and batch experiment runner
"""

__version__ = "0.1.0"

from . import acm, errors  # noqa: F401
