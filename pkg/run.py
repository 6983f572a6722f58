import sys
from typing import List, Optional

from app.config import get_settings
from app.core.logging_config import LoggingConfig, get_logger
from app.exceptions.handlers import EXIT_OK, run_with_handlers
from app.main import create_app
from app.routers.utils.dependencies import Services, emit


def main(argv: Optional[List[str]] = None) -> int:
    logger = get_logger()

    def action() -> int:
        args = create_app().parse_args(argv)
        settings = get_settings()
        if args.threads:
            settings.threads = args.threads
        if args.log_level:
            LoggingConfig().set_level(args.log_level)
        logger.debug(f"Running {args.command} {args.action}")
        output = args.handler(args, Services(settings))
        emit(output, args.out, args.output)
        return EXIT_OK

    return run_with_handlers(action)


if __name__ == "__main__":
    sys.exit(main())
