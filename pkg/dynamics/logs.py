import threading

from mealpy.utils.logger import Logger

_LOG_TO = "console"
_LOG_FILE = None
_LOGGERS = {}
_LOCK = threading.Lock()


def configure(log_to="console", log_file=None):
    """Sets the destination used by loggers created from now on ("console", "file" or None)."""
    global _LOG_TO, _LOG_FILE
    _LOG_TO, _LOG_FILE = log_to, log_file


def create_logger(name, log_to=None, log_file=None):
    # mealpy attaches a new handler on every call, so loggers are built once per name
    with _LOCK:
        if name not in _LOGGERS:
            log_to = _LOG_TO if log_to is None else log_to
            log_file = _LOG_FILE if log_file is None else log_file
            if log_to == "file":
                logger = Logger(log_to, log_file=log_file or "soliton.log").create_logger(name=name)
            else:
                logger = Logger(log_to).create_logger(name=name)
            logger.propagate = False
            _LOGGERS[name] = logger
        return _LOGGERS[name]
