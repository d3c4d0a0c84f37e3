# Copyright (c) 2025 The cvtag Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from tqdm.auto import tqdm

from cvtag.common import ConfigurationError, env_int

T = TypeVar("T")
R = TypeVar("R")


def resolve_thread_count(threads: int = 0) -> int:
    """
    Number of worker threads to use.

    Args:
        threads (int): Explicit count; 0 defers to the CVTAG_THREADS env var,
            and 0 there means one thread per cpu.
    """
    if threads == 0:
        threads = env_int("CVTAG_THREADS", 0)
    if threads < 0:
        raise ConfigurationError(f"Thread count must be >= 0, got {threads}")
    return threads or os.cpu_count() or 1


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 0, desc: str = None) -> List[R]:
    """
    Apply `fn` to every item on a thread pool and return results in input order.

    Completion order never leaks into the result, so the output is the same for
    any thread count. The progress bar goes to stderr and disables itself when
    stderr is not a terminal.
    """
    items = list(items)
    num_threads = min(resolve_thread_count(threads), max(len(items), 1))
    if num_threads == 1:
        return [fn(item) for item in tqdm(items, desc=desc, disable=None, leave=False)]

    results: List[R] = [None] * len(items)
    with ThreadPoolExecutor(max_workers=num_threads) as executor:
        futures = {executor.submit(fn, item): idx for idx, item in enumerate(items)}
        pbar = tqdm(futures, desc=desc, total=len(futures), disable=None, leave=False)
        for future in pbar:
            results[futures[future]] = future.result()
    return results
