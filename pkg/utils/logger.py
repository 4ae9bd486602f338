import atexit
import logging
import logging.handlers
import multiprocessing
import sys
from pathlib import Path

from .config_loader import get_config

_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [PID:%(process)d] - %(message)s"


class MultiprocessLogger:
    """
    멀티프로세스 환경에서 안전한 로그 처리를 위한 클래스
    QueueHandler와 QueueListener를 사용하여 배치 생성 워커와 샘플링 워커의
    로그가 섞이지 않도록 합니다.
    """

    def __init__(
        self,
        name: str = "graphdiff",
        log_file: str | None = None,
        level: str = "INFO",
    ):
        self.name = name
        self.log_file = log_file
        self.level = level
        self.queue = multiprocessing.Queue(-1)
        self.listener: logging.handlers.QueueListener | None = None
        self.formatter = logging.Formatter(fmt=_FORMAT)
        self._setup_logging()

    def _setup_logging(self):
        """로깅 시스템 초기화"""
        self.logger = logging.getLogger(self.name)
        self.logger.setLevel(self.level)

        # 기존 핸들러 제거 (중복 방지)
        self.logger.handlers.clear()
        self.logger.propagate = False

        queue_handler = logging.handlers.QueueHandler(self.queue)
        self.logger.addHandler(queue_handler)

        handlers: list[logging.Handler] = [logging.StreamHandler(sys.stdout)]
        if self.log_file:
            handlers.append(logging.FileHandler(self.log_file))
        for handler in handlers:
            handler.setFormatter(self.formatter)

        self.listener = logging.handlers.QueueListener(self.queue, *handlers)
        self.listener.start()

        atexit.register(self.stop_listener)

    def attach_file(self, log_file: str | Path) -> None:
        """Restart the listener with an extra file handler (run log inside an output dir)."""
        self.stop_listener()
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        self.log_file = str(log_file)
        self._setup_logging()

    def stop_listener(self):
        """QueueListener 종료"""
        if self.listener:
            self.listener.stop()
            self.listener = None

    def get_logger(self) -> logging.Logger:
        """멀티프로세스 안전 로거 반환"""
        return self.logger


_multiprocess_logger_instance: MultiprocessLogger | None = None


def _get_instance() -> MultiprocessLogger:
    global _multiprocess_logger_instance

    if _multiprocess_logger_instance is None:
        _multiprocess_logger_instance = MultiprocessLogger(
            name=get_config("logging", "name", "graphdiff"),
            log_file=get_config("logging", "log_file", "") or None,
            level=get_config("logging", "level", "INFO"),
        )
    return _multiprocess_logger_instance


def logger_instance() -> logging.Logger:
    """
    멀티프로세스 환경에서 안전한 로거를 반환하는 헬퍼 함수

    이름, 레벨, 로그 파일은 env.toml 의 [logging] 섹션에서 읽는다.

    Returns:
        멀티프로세스 안전 로거
    """
    return _get_instance().get_logger()


def attach_log_file(log_file: str | Path) -> None:
    _get_instance().attach_file(log_file)
