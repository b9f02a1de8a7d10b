from lattice_extensions.checker import ExtensionChecker  # noqa: F401
