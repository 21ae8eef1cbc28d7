import sys

import pytest

if __name__ == "__main__":
    # the slow Monte-Carlo runs live in tests/functional; pass it explicitly
    args = sys.argv[1:] or ["tests/unit"]
    sys.exit(pytest.main(["-q"] + args))
