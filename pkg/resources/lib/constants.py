#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
OArrays constants - centralized magic values.

This module consolidates all hardcoded values from throughout the codebase
to improve maintainability and make the code self-documenting.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

# =============================================================================
# Tool identity
# =============================================================================
TOOL_NAME = "oarrays"
# Written into provenance footers; fixed so output files are reproducible.
TOOL_VERSION = "1.0.0"

# =============================================================================
# CLI exit codes
# =============================================================================
EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

# =============================================================================
# Limits
# =============================================================================
# Largest array (number of runs) we are willing to materialize.
DEFAULT_CAPACITY_LIMIT = 1_000_000

# Largest dense counter allocated for a single projection or multiplicity table.
MAX_PROJECTION_CELLS = 50_000_000

# Exhaustive associativity check is O(n^3); skipped above this order.
ASSOCIATIVITY_CHECK_MAX_ORDER = 64

# compute_L / compute_d enumerate subsets directly; beyond this k it gets slow.
MAX_FACTORS = 20

# strength1_noncomplete reshuffles until the fill is not the complete design.
MAX_RESHUFFLE_ATTEMPTS = 1000

# =============================================================================
# Search
# =============================================================================
DEFAULT_SEARCH_BUDGET = 1_000_000  # explored nodes
DEFAULT_RESULT_LIMIT = 10

SEARCH_STATUS_EXHAUSTED = "exhausted"
SEARCH_STATUS_LIMIT = "limit-reached"
SEARCH_STATUS_BUDGET = "budget-exceeded"
SEARCH_STATUS_BOUND = "bound-violation"

UNIQUENESS_UNIQUE = "unique"
UNIQUENESS_NOT_UNIQUE = "not unique"
UNIQUENESS_INCONCLUSIVE = "inconclusive"

# =============================================================================
# Settings (config file keys and environment variables)
# =============================================================================
SETTING_SEARCH_BUDGET = "search_budget"
SETTING_CAPACITY_LIMIT = "capacity_limit"
SETTING_RESULT_LIMIT = "result_limit"
SETTING_WORKERS = "workers"
SETTING_DEBUG_LOGGING = "debug_logging"
SETTING_LOG_DIR = "log_dir"

ENV_SEARCH_BUDGET = "OARRAYS_SEARCH_BUDGET"
ENV_CAPACITY_LIMIT = "OARRAYS_CAPACITY_LIMIT"
ENV_LOG_DIR = "OARRAYS_LOG_DIR"

# =============================================================================
# Logging
# =============================================================================
LOG_PREFIX = "OArrays"
LOG_DIR_NAME = "logs"
LOG_FILENAME = "oarrays.log"
LOG_MAX_SIZE_BYTES = 500 * 1024
LOG_MAX_ROTATED_FILES = 3
LOG_MAX_VALUE_LENGTH = 200
LOG_TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S.%f"
LOG_TIMESTAMP_TRIM = -3  # microseconds -> milliseconds

# =============================================================================
# Groups: canonical element names (these appear in every array file)
# =============================================================================
S3_ELEMENTS = ("e", "x", "y", "a", "b", "c")
# Second ordering of S3: transpositions before 3-cycles.
S3_SECOND_ORDER = ("e", "a", "b", "c", "x", "y")
DIH4_ELEMENTS = ("e", "q", "r", "s", "a", "b", "x", "y")
DIH5_ELEMENTS = ("e", "a", "b", "c", "d", "v", "w", "x", "y", "z")

# Group tags used on line 2 of the array text format.
TAG_CYCLIC_PREFIX = "Z"
TAG_DIHEDRAL_PREFIX = "D"
TAG_S3 = "S3"
TAG_S3_SECOND = "S3b"
TAG_DIH4 = "D4"
TAG_DIH5 = "D5"

ORDERING_FIRST = "first"
ORDERING_SECOND = "second"

# =============================================================================
# Constructions
# =============================================================================
# s_1 -> tag of the nonabelian group placed on factor 1.
FIRST_FACTOR_GROUP_TAGS = {6: TAG_S3, 8: TAG_DIH4, 10: TAG_DIH5}

CASE_GCD24 = "gcd-2/4"
CASE_GCD6 = "gcd-6"
CASE_GCD3 = "gcd-3"

# Size multiplier over L_{k-1} per case.
CASE_SIZE_MULTIPLIER = {CASE_GCD24: 1, CASE_GCD6: 3, CASE_GCD3: 2}

LAYOUT_BALANCED = "balanced"
LAYOUT_LITERAL = "literal"

UNVERIFIED_NOTE = "unverified: shape outside the published catalog"

# =============================================================================
# File names
# =============================================================================
ARRAY_FILE_SUFFIX = ".oa"
JSON_FILE_SUFFIX = ".json"
CATALOG_SUMMARY_FILENAME = "catalog.txt"
CATALOG_JSON_FILENAME = "catalog.json"


# =============================================================================
# Published catalog: arrays produced by the three construction cases
# =============================================================================
@dataclass(frozen=True)
class CatalogRow:
    """One published row: factor orders, sizes and the stated fraction."""
    orders: Tuple[int, ...]
    complete_size: int
    array_size: int
    fraction: str
    note: str = ""

    @property
    def label(self) -> str:
        """Factor orders joined with x, e.g. 6x2x2."""
        return "x".join(str(s) for s in self.orders)


CATALOG_ROWS: Tuple[CatalogRow, ...] = (
    # gcd 2 or 4, half fractions of minimal size L_{k-1}
    CatalogRow((6, 2, 2), 24, 12, "1/2"),
    CatalogRow((6, 2, 2, 2), 48, 24, "1/2"),
    CatalogRow((6, 4, 4), 96, 48, "1/2"),
    CatalogRow((6, 4, 4, 4), 384, 192, "1/2"),
    CatalogRow((6, 4, 2), 48, 24, "1/2"),
    CatalogRow((6, 6, 2), 72, 36, "1/2"),
    CatalogRow((6, 6, 4), 144, 72, "1/2"),
    CatalogRow((8, 2, 2), 32, 16, "1/2"),
    CatalogRow((8, 2, 2, 2), 64, 32, "1/2"),
    CatalogRow((8, 2, 2, 2, 2), 128, 64, "1/2"),
    CatalogRow((8, 2, 2, 2, 2, 2), 256, 128, "1/2"),
    CatalogRow((8, 6, 6), 288, 144, "1/2"),
    CatalogRow((8, 6, 6, 6), 1728, 864, "1/2"),
    CatalogRow((8, 4, 2), 64, 32, "1/2"),
    CatalogRow((8, 6, 2), 96, 48, "1/2"),
    CatalogRow((8, 6, 4), 192, 96, "1/2"),
    CatalogRow((10, 2, 2), 40, 20, "1/2"),
    CatalogRow((10, 2, 2, 2), 80, 40, "1/2"),
    CatalogRow((10, 4, 4), 160, 80, "1/2"),
    CatalogRow((10, 4, 4, 4), 640, 320, "1/2"),
    CatalogRow((10, 6, 6), 360, 180, "1/2"),
    CatalogRow((10, 6, 6, 6), 2160, 1080, "1/2"),
    CatalogRow((10, 4, 2), 80, 40, "1/2"),
    CatalogRow((10, 6, 2), 120, 60, "1/2"),
    CatalogRow((10, 6, 4), 240, 120, "1/2"),
    # gcd 4, quarter fractions
    CatalogRow((8, 4, 4), 128, 32, "1/4"),
    CatalogRow((8, 4, 4, 4), 512, 128, "1/4"),
    # gcd 6, symmetric 6^k
    CatalogRow((6, 6, 6), 216, 108, "1/2", "=3L(k-1)"),
    CatalogRow((6, 6, 6, 6), 1296, 648, "1/2", "=3L(k-1)"),
    # gcd 3, 6 x 3^(k-1)
    CatalogRow((6, 3, 3), 54, 36, "2/3", "=2L(k-1)"),
    CatalogRow((6, 3, 3, 3), 162, 108, "2/3", "=2L(k-1)"),
)

CATALOG_ORDERS = frozenset(row.orders for row in CATALOG_ROWS)
