from cachebox import Cache

# Weil generator matrices keyed by level N; entries are read-only arrays
_generator_cache = Cache(maxsize=512)


def get_generator_cache() -> Cache:
    """Get the global generator cache instance."""
    return _generator_cache


def clear_generator_cache():
    _generator_cache.clear()
