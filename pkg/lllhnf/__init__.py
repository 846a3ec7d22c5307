"""lllhnf - LLL-based Hermite normal form with coefficient-growth checks.

Modules:
    constants     - alpha defaults, bound slack, exit codes, canonical corpus plan
    errors        - exception hierarchy and the Verdict check result
    exact_linalg  - exact integer/rational matrices, Bareiss, Gram-Schmidt helpers
    instance      - ProblemInstance: G with its Gram matrix, B and rank
    engine        - the HNF engine with its λ/D bookkeeping and trace events
    certify       - reference HNF, output verification, output conditions
    mixed         - mixed inner product, mixed Gram-Schmidt, checkpoint estimates
    trickledown   - monitor for the walk between kmax growth and the next pivot
    analysis      - engine observer running checkpoint, phase and descent checks
    metrics       - bit lengths and operation counts
    pipeline      - one matrix through engine, analysis and certification
    corpus        - seeded matrix generators and the canonical corpus
    matrix_file   - the plain-text matrix format
    report        - JSON run and bench reports
    workers       - thread pool for corpus runs
    cli           - command-line entry (``python main.py ...``)
"""

__version__ = "1.0.0"
