# SPDX-FileCopyrightText: 2025 The qrt-elliptic Authors
#
# SPDX-License-Identifier: MIT

from .cli import main

raise SystemExit(main())
