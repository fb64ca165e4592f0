#!/usr/bin/env python
# -*- coding:utf-8 -*-
from folda.interfaces.cli.commands import align, bench, gen

COMMANDS = (align.register, gen.register, bench.register)
