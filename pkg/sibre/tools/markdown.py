"""
Markdown report files, in memory or on disk
"""

from io import BytesIO
from pathlib import Path
from typing import Union


def create_markdown_file(content: str) -> BytesIO:
    """UTF-8 bytes of `content`, always newline-terminated."""
    if not content.endswith("\n"):
        content += "\n"
    return BytesIO(content.encode("utf-8"))


def save_markdown_file(content: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(create_markdown_file(content).getvalue())
    return path
