#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#

"""
OArrays Design Layer.

This package provides the mathematics:
- lcm bounds L_t and the threshold d (numtheory.py)
- finite groups and conjugacy classes (groups.py)
- the array model and its verifiers (oarray.py)
- proper-fraction constructions and the catalog (constructions.py)
- exhaustive search for small arrays (search.py)
"""
