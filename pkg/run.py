#!/usr/bin/env python3
"""
Run script for the hidaquat command-line interface.

This script runs one command with the configuration specified in
environment variables, a .env file, a config file and command-line flags.
"""

import sys
import logging
from dotenv import load_dotenv
from hidaquat.cli import configure_logging, main

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()

if __name__ == "__main__":
    argv = sys.argv[1:]
    configure_logging("--verbose" in argv)
    logger.info(f"Starting hidaquat: {' '.join(argv) or '(no arguments)'}")
    sys.exit(main(argv))
