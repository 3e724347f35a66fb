"""mbrank: exact workbench for small minimal border rank tensors."""

__version__ = "0.1.0"
