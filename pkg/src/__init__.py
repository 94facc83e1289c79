# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only

__version__ = "0.1.0"
