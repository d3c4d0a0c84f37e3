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

from datetime import datetime

from .logger import cvtag_logger


class EventPathTimer:
    """
    Records wall time between consecutive named events of a run.

    Each call to `record` logs the time elapsed since the previous event
    (if any) together with both event names, at DEBUG level.
    """

    def __init__(self):
        self.prev_message: str = None
        self.prev_time: datetime = None

    def reset(self):
        """Forget the previous event so the next record starts a new path."""
        self.prev_message = None
        self.prev_time = None

    def record(self, message):
        """
        Record the current time with a message.

        Args:
            message (str): Name of the event being reached.

        Returns:
            float: Seconds since the previous event, or 0.0 for the first one.
        """
        current_time = datetime.now()
        elapsed = 0.0
        if self.prev_message is not None:
            elapsed = (current_time - self.prev_time).total_seconds()
            cvtag_logger.debug(f"Time Elapsed: [{elapsed:.3f}s] From [{self.prev_message}] To [{message}]")
        self.prev_message = message
        self.prev_time = current_time
        return elapsed


_GLOBAL_EVENT_TIMER = EventPathTimer()


def event_path_timer() -> EventPathTimer:
    """Get the process-wide EventPathTimer instance."""
    assert _GLOBAL_EVENT_TIMER is not None, "event path timer is not initialized"
    return _GLOBAL_EVENT_TIMER
