"""Command-line front end: figure tables, single points, sweeps and verify suites as CSV."""
