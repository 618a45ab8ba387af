# file_utils.py
import json
import os

import pandas as pd

from colors import print_colored, Colors

def _ensure_parent(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    if parent and not os.path.isdir(parent):
        os.makedirs(parent, exist_ok=True)

def write_csv(path: str, frame: pd.DataFrame) -> str:
    """Write a DataFrame as UTF-8 CSV without the pandas index. Returns the path."""
    try:
        _ensure_parent(path)
        frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise ValueError(f"Failed to write CSV file {path}: {e}")
    print_colored(f"CSV saved: {path}", Colors.SUCCESS)
    return path

def write_json(path: str, payload: dict) -> str:
    """
    Write a JSON document with sorted keys and a trailing newline.
    Sorted keys keep the bytes stable across runs.
    """
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, sort_keys=True, allow_nan=False)
            f.write("\n")
    except OSError as e:
        raise ValueError(f"Failed to write JSON file {path}: {e}")
    print_colored(f"JSON saved: {path}", Colors.SUCCESS)
    return path

def read_text_file(file_path: str) -> str:
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return f.read()
    except FileNotFoundError:
        raise ValueError(f"File not found: {file_path}")
    except UnicodeDecodeError as e:
        raise ValueError(f"File is not valid UTF-8: {file_path} ({e})")
    except OSError as e:
        raise ValueError(f"Error reading file: {e}")
