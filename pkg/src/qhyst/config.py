"""`key = value` configuration files (one pair per line, '#' comments)."""
from __future__ import annotations

import os
import tempfile
from pathlib import Path


def parse_value(text: str):
    text = text.strip()
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    if low in ("none", ""):
        return None
    if "," in text:
        return [parse_value(t) for t in text.split(",") if t.strip()]
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        # a trailing comma keeps one-element lists lists
        body = ", ".join(format_value(v) for v in value)
        return body + ("," if len(value) == 1 else "")
    return str(value)


def load_config(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = parse_value(value)
    return out


def atomic_write(path, data: str | bytes) -> Path:
    """Write to a temporary sibling and rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"newline": ""})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dump_config(data: dict, path, header: str | None = None) -> Path:
    lines = [f"# {header}"] if header else []
    lines += [f"{k} = {format_value(v)}" for k, v in data.items()]
    return atomic_write(path, "\n".join(lines) + "\n")
