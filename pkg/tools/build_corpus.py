#!/usr/bin/env python3
"""Regenerate the vendored solid library under src/pullupnet/data/corpus/.

Every reference generator the package knows about is serialized to one
flat file per solid: the five regular solids, the thirteen semiregular
ones and their twelve duals, prisms and antiprisms up to 20-gonal bases
(minus the two that duplicate regular solids), and the 82 constructible
ring-stack/surgery solids.  File stems are the sanitized solid names, so
directory order is stable across platforms.

Run from the repository root:

    python3 tools/build_corpus.py
"""

import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pullupnet import johnson, solids  # noqa: E402
from pullupnet.mesh import parse_netlib, serialize_netlib, validate_manifold  # noqa: E402

OUT = (Path(__file__).resolve().parent.parent
       / "src" / "pullupnet" / "data" / "corpus")


def stem_of(label):
    return re.sub(r"[^a-z0-9]+", "-", label.lower()).strip("-")


def generators():
    for mesh in solids.platonic_solids():
        yield mesh
    for mesh in solids.archimedean_solids():
        yield mesh
    for mesh in solids.catalan_solids():
        yield mesh
    for n in range(3, 21):
        if n != 4:  # square prism is the cube
            yield solids.prism(n)
    for n in range(4, 21):  # triangular antiprism is the octahedron
        yield solids.antiprism(n)
    for key in sorted(johnson.JOHNSON_RECIPES):
        yield johnson.johnson_solid(key)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for stale in OUT.glob("*.netlib"):
        stale.unlink()
    stems = set()
    count = 0
    for number, mesh in enumerate(generators()):
        stem = stem_of(mesh.label)
        if stem in stems:
            raise SystemExit("duplicate stem %r" % stem)
        stems.add(stem)
        text = serialize_netlib(mesh, number=number)
        back = parse_netlib(text)
        # the parser renumbers vertices in first-seen order; geometry must
        # survive bit for bit even so
        original = [[tuple(mesh.vertices[i]) for i in f] for f in mesh.faces]
        returned = [[tuple(back.vertices[i]) for i in f] for f in back.faces]
        if original != returned:
            raise SystemExit("round-trip changed geometry for %r" % mesh.label)
        if not validate_manifold(back).accepted:
            raise SystemExit("%r fails validation after round-trip"
                             % mesh.label)
        (OUT / (stem + ".netlib")).write_text(text)
        count += 1
    print("wrote %d solids to %s" % (count, OUT))


if __name__ == "__main__":
    main()
