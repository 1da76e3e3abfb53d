#!/usr/bin/env python3
"""
Logger Setup
Logging configuration for the pipeline commands
"""

import logging
import logging.handlers
import os
from typing import Optional

OWNED = "_seagrass_handler"


def setup_logger(name: Optional[str] = None, level: str = "INFO", log_file: Optional[str] = None,
                 quiet: bool = False) -> logging.Logger:
    """Setup logger with console and optional rotating file handlers (root logger when name is None)"""

    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))

    # Prevent duplicate handlers when commands run twice in one process
    for handler in list(logger.handlers):
        if getattr(handler, OWNED, False):
            logger.removeHandler(handler)
            handler.close()

    detailed_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s'
    )
    simple_formatter = logging.Formatter(
        '%(asctime)s - %(levelname)s - %(message)s'
    )

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.ERROR if quiet else logger.level)
    console_handler.setFormatter(simple_formatter)
    setattr(console_handler, OWNED, True)
    logger.addHandler(console_handler)

    if log_file:
        try:
            log_dir = os.path.dirname(log_file)
            if log_dir and not os.path.exists(log_dir):
                os.makedirs(log_dir)

            file_handler = logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=10*1024*1024,  # 10MB
                backupCount=5,
                encoding='utf-8'
            )
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(detailed_formatter)
            setattr(file_handler, OWNED, True)
            logger.addHandler(file_handler)

        except OSError as e:
            logger.warning(f"Could not setup file logging: {e}")

    return logger


def format_epoch_line(epoch: int, split: str, loss: float, lr: float, **extra) -> str:
    """Key=value epoch line, grep-friendly"""
    parts = [f"epoch={epoch}", f"split={split}", f"loss={loss:.6f}", f"lr={lr:.6f}"]
    parts.extend(f"{key}={value}" for key, value in extra.items())
    return " ".join(parts)
