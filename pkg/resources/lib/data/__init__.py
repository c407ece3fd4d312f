#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
OArrays File Formats.

This package provides reading and writing for:
- the array text format and its JSON mirror (array_format.py)
- the catalog summary table and files (catalog_report.py)
"""
