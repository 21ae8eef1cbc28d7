# -*- coding: utf-8 -*-
import logging
from typing import Optional


class LogMixin:
    """
        Gives solver and runner objects a small logging surface: one-shot
        messages via log()/warn(), and progress lines built up with
        log_start(), log_continue() and log_end().
    """

    log_name: Optional[str] = None
    _pending: str = ""

    @property
    def logger(self) -> logging.Logger:
        return logging.getLogger(self.log_name or type(self).__module__)

    def log(self, msg: str) -> None:
        self.logger.debug(msg)

    def warn(self, msg: str) -> None:
        self.logger.warning(msg)

    def log_start(self, msg: str) -> None:
        self._pending = msg

    def log_continue(self, msg: str) -> None:
        self._pending += msg

    def log_end(self, msg: str) -> None:
        self.logger.debug(self._pending + msg)
        self._pending = ""
