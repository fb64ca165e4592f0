#!/usr/bin/env python
# -*- coding:utf-8 -*-
import sys

from folda.app import main

sys.exit(main())
