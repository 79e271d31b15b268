"""Main entrypoint for the RetroBohm tool."""

from .cli import main

if __name__ == "__main__":
    main()
