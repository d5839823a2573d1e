"""Bundled data.

``ks3_selected.palp`` holds ten entries of the public list of 3-dimensional
reflexive polytopes (ids 15, 16, 58, 59, 61, 65, 66, 192, 193, 197, 1-based),
copied verbatim from ``tests/fixtures/reflexive_3d.palp``.
"""
