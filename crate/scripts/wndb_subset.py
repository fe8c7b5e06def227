#!/usr/bin/env python3
"""Extract a self-consistent noun+verb subset of a WordNet 3.x database.

Keeps every sense of the seed lemmas plus the transitive closure of their
hypernym (@) and instance-hypernym (@i) pointers. Byte offsets are rewritten
so the subset is a valid WNDB directory on its own; pointers leaving the
subset are dropped.

usage: wndb_subset.py SRC_DICT DEST_DICT
"""
import os
import sys

NOUNS = """cat dog canine entity car automobile trip museum institution building
house collection art reference apartment excursion motorbike motor_bike hotel
people boy bike beach product city london history culture body object result
bell red carmine colour color vehicle abstraction institution artifact
exhibit image study perusal acceleration permanent world care view fee charge
existence footprint physician public sponsor macgregor airline""".split()
VERBS = """drive walk be book reserve rent ride join house combine allude make
distribute base charge sponsor dedicate originate result cause expand include
care view exhibit image study move open establish document illustrate
travel go""".split()

HYPER = {"@", "@i"}
HEADER = [
    "  WordNet 3.0 Copyright 2006 by Princeton University.  All rights reserved.",
    "  Subset extracted for testing; see the WordNet license at",
    "  https://wordnet.princeton.edu/license-and-commercial-use",
]


def read_data(path):
    out = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("  "):
                continue
            out[line.split(" ", 1)[0]] = line.rstrip("\n")
    return out


def read_index(path):
    out = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("  "):
                continue
            parts = line.split()
            out[parts[0]] = parts
    return out


def parse_data(line):
    head, _, gloss = line.partition(" | ")
    f = head.split()
    offset, lexfn, sstype = f[0], f[1], f[2]
    wcnt = int(f[3], 16)
    words = [(f[4 + 2 * i], f[5 + 2 * i]) for i in range(wcnt)]
    i = 4 + 2 * wcnt
    pcnt = int(f[i])
    ptrs = [tuple(f[i + 1 + 4 * k: i + 5 + 4 * k]) for k in range(pcnt)]
    rest = f[i + 1 + 4 * pcnt:]
    return offset, lexfn, sstype, words, ptrs, rest, gloss


def subset(src, dest, pos, seeds):
    data = read_data(os.path.join(src, "data." + pos))
    index = read_index(os.path.join(src, "index." + pos))
    keep = set()
    todo = []
    for w in seeds:
        if w in index:
            parts = index[w]
            scnt = int(parts[2])
            todo.extend(parts[-scnt:])
    while todo:
        off = todo.pop()
        if off in keep:
            continue
        keep.add(off)
        _, _, _, _, ptrs, _, _ = parse_data(data[off])
        for sym, target, p, _ in ptrs:
            if sym in HYPER and p == pos[0]:
                todo.append(target)
    order = sorted(keep, key=int)
    records = {}
    for off in order:
        o, lexfn, sstype, words, ptrs, rest, gloss = parse_data(data[off])
        ptrs = [p for p in ptrs if p[2] == pos[0] and p[1] in keep and p[0] in HYPER]
        records[off] = (lexfn, sstype, words, ptrs, rest, gloss)

    def render(off, newoff, mapping):
        lexfn, sstype, words, ptrs, rest, gloss = records[off]
        parts = [newoff, lexfn, sstype, "%02x" % len(words)]
        for w, lid in words:
            parts += [w, lid]
        parts.append("%03d" % len(ptrs))
        for sym, target, p, st in ptrs:
            parts += [sym, mapping[target], p, st]
        parts += rest
        return " ".join(parts) + " | " + gloss + "  \n"

    pos_off = sum(len((h + "\n").encode()) for h in HEADER)
    mapping = {}
    for off in order:
        mapping[off] = "%08d" % pos_off
        pos_off += len(render(off, "00000000", {k: "00000000" for k in keep}).encode())
    with open(os.path.join(dest, "data." + pos), "w", encoding="utf-8") as f:
        for h in HEADER:
            f.write(h + "\n")
        for off in order:
            f.write(render(off, mapping[off], mapping))

    lemmas = {}
    for off in order:
        for w, _ in records[off][2]:
            lemma = w.lower()
            if pos == "adj":
                lemma = lemma.split("(")[0]
            lemmas.setdefault(lemma, [])
    for lemma in lemmas:
        if lemma in index:
            parts = index[lemma]
            scnt = int(parts[2])
            lemmas[lemma] = [mapping[o] for o in parts[-scnt:] if o in keep]
    with open(os.path.join(dest, "index." + pos), "w", encoding="utf-8") as f:
        for h in HEADER:
            f.write(h + "\n")
        for lemma in sorted(lemmas):
            offs = lemmas[lemma]
            if not offs:
                continue
            f.write("%s %s %d 1 @ %d 0 %s  \n" % (lemma, pos[0], len(offs), len(offs), " ".join(offs)))

    with open(os.path.join(src, pos + ".exc"), encoding="utf-8") as f, \
            open(os.path.join(dest, pos + ".exc"), "w", encoding="utf-8") as g:
        for line in f:
            parts = line.split()
            bases = [b for b in parts[1:] if b in lemmas and lemmas[b]]
            if bases:
                g.write(" ".join([parts[0]] + bases) + "\n")


def main():
    src, dest = sys.argv[1], sys.argv[2]
    os.makedirs(dest, exist_ok=True)
    subset(src, dest, "noun", NOUNS)
    subset(src, dest, "verb", VERBS)


if __name__ == "__main__":
    main()
