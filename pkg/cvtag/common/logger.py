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

import logging
import os

from .errors import ConfigurationError


class GlobalLogger:
    _logger = None

    @classmethod
    def get_logger(cls, name="cvtag_logger", level=None):
        if cls._logger is None:
            if level is None:
                level = os.environ.get("CVTAG_LOG_LEVEL", "INFO").upper()
            cls._logger = logging.getLogger(name)
            cls._logger.setLevel(level)

            cls._logger.propagate = False
            cls._logger.handlers.clear()
            formatter = logging.Formatter("[%(asctime)s - %(levelname)s] %(message)s")
            # stderr, so CSV on stdout stays clean
            handler = logging.StreamHandler()
            handler.setFormatter(formatter)
            cls._logger.addHandler(handler)

        return cls._logger


cvtag_logger = GlobalLogger.get_logger()


def set_log_level(level):
    try:
        cvtag_logger.setLevel(level.upper() if isinstance(level, str) else level)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Unknown log level {level!r}") from e
