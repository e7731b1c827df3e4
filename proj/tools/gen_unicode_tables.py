#!/usr/bin/env python3
"""Regenerates include/ctag/unicode_tables.hpp from Python's unicodedata.

Coverage is the Basic Multilingual Plane. Letters are general categories
L*, digits are Nd, and the fold table holds simple lowercase mappings
(at most three output code points). Code points outside the BMP are
classified as letters with identity folding at runtime.
"""

import sys
import unicodedata

HEADER = """\
// Copyright 2026 The corpus-tagger Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Generated by scripts/gen_unicode_tables.py (unicodedata {uver},
// Python {pyver}). Do not edit by hand.

#ifndef CTAG_UNICODE_TABLES_HPP_
#define CTAG_UNICODE_TABLES_HPP_

#include <cstdint>

namespace ctag::uni {{

struct Interval {{
  char32_t lo;
  char32_t hi;
}};

// Lowercase expansion of one code point, zero-padded.
struct FoldEntry {{
  char32_t from;
  char32_t to[3];
}};
"""

FOOTER = """
}  // namespace ctag::uni

#endif  // CTAG_UNICODE_TABLES_HPP_
"""


def intervals(pred):
    out = []
    start = None
    for cp in range(0x10000):
        if pred(cp):
            if start is None:
                start = cp
        else:
            if start is not None:
                out.append((start, cp - 1))
                start = None
    if start is not None:
        out.append((start, 0xFFFF))
    return out


def fmt_intervals(name, ivs):
    lines = [f"inline constexpr Interval {name}[] = {{"]
    row = []
    for lo, hi in ivs:
        row.append(f"{{0x{lo:04X}, 0x{hi:04X}}},")
        if len(row) == 4:
            lines.append("    " + " ".join(row))
            row = []
    if row:
        lines.append("    " + " ".join(row))
    lines.append("};")
    lines.append(f"inline constexpr int k{name[1:]}Count = "
                 f"sizeof({name}) / sizeof({name}[0]);")
    return "\n".join(lines)


def main(out_path):
    def is_letter(cp):
        if 0xD800 <= cp <= 0xDFFF:
            return False
        return unicodedata.category(chr(cp)).startswith("L")

    def is_digit(cp):
        if 0xD800 <= cp <= 0xDFFF:
            return False
        return unicodedata.category(chr(cp)) == "Nd"

    folds = []
    for cp in range(0x10000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        low = chr(cp).lower()
        if low != chr(cp):
            cps = [ord(c) for c in low]
            if len(cps) > 3:
                raise RuntimeError(f"fold of U+{cp:04X} too long")
            while len(cps) < 3:
                cps.append(0)
            folds.append((cp, cps))

    with open(out_path, "w", encoding="utf-8") as f:
        f.write(HEADER.format(uver=unicodedata.unidata_version,
                              pyver="%d.%d" % sys.version_info[:2]))
        f.write("\n")
        f.write(fmt_intervals("kLetterIntervals", intervals(is_letter)))
        f.write("\n\n")
        f.write(fmt_intervals("kDigitIntervals", intervals(is_digit)))
        f.write("\n\n")
        f.write("inline constexpr FoldEntry kFoldTable[] = {\n")
        row = []
        for cp, cps in folds:
            row.append("{0x%04X, {0x%04X, 0x%04X, 0x%04X}}," % (cp, *cps))
            if len(row) == 2:
                f.write("    " + " ".join(row) + "\n")
                row = []
        if row:
            f.write("    " + " ".join(row) + "\n")
        f.write("};\n")
        f.write("inline constexpr int kFoldTableCount = "
                "sizeof(kFoldTable) / sizeof(kFoldTable[0]);\n")
        f.write(FOOTER)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else
         "include/ctag/unicode_tables.hpp")
