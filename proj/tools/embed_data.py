#!/usr/bin/env python3
"""Regenerates include/engage/data/embedded.hpp from the JSON files in data/."""
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
FILES = [
    ("engagement_items", "engagement_items.json"),
    ("big_five_inventory", "big_five_inventory.json"),
    ("beliefs_instrument", "beliefs_instrument.json"),
    ("au_emotion_table", "au_emotion_table.json"),
    ("emotion_descriptions", "emotion_descriptions.json"),
]

out = [
    "// Generated by tools/embed_data.py from data/*.json. Do not edit.",
    "#pragma once",
    "",
    "#include <string_view>",
    "",
    "namespace engage::data {",
    "",
]
for name, fname in FILES:
    text = (ROOT / "data" / fname).read_text()
    assert ')json"' not in text
    out.append(f'inline constexpr std::string_view {name} = R"json({text})json";')
    out.append("")
out.append("}  // namespace engage::data")
target = ROOT / "include" / "engage" / "data" / "embedded.hpp"
text = "\n".join(out) + "\n"
if "--check" in sys.argv[1:]:
    if not target.exists() or target.read_text() != text:
        sys.exit(f"{target} is stale; rerun tools/embed_data.py")
    print("embedded data is current")
    sys.exit(0)
target.parent.mkdir(parents=True, exist_ok=True)
target.write_text(text)
