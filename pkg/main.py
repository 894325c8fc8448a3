import os
import sys
from dotenv import load_dotenv
from loguru import logger
from blochlab.cli import cli

# Load environment variables before anything reads them
load_dotenv()

# Configure Loguru logger
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE  = os.getenv("LOG_FILE", "logs/blochlab.log")

# Ensure log directory exists
os.makedirs(os.path.dirname(LOG_FILE) or ".", exist_ok=True)

# Configure logger
logger.remove() # Remove default handler
logger.add(sys.stderr, level=LOG_LEVEL)
logger.add(LOG_FILE, rotation="10 MB", retention="1 week", level=LOG_LEVEL)


def main():
    """Main entry point for the blochlab command line."""
    try:
        cli(obj={})
    except KeyboardInterrupt:
        logger.info("blochlab stopped by user")
        sys.exit(130)


if __name__ == "__main__":
    main()
