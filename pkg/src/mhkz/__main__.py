from mhkz.cli import entrypoint

entrypoint()
