# -*- coding: utf-8 -*-
"""Type aliases allowing to narrow down definition and reduce duplication

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

from typing import Callable, List

import numpy as np


#: Random stream threaded through every stochastic operation, owned by the caller.
RandomStream = np.random.Generator

#: Signature of a tokenizer registered with corpus.register_tokenizer
TokenizerFunction = Callable[[str], List[str]]
