# Makes the tests directory importable for shared test helpers.