"""Command-line front end: ``lieruth <command> --manifest PATH``.

Every command prints a report (JSON by default) listing named checks with
status ok/fail and an optional witness.  Exit status is 0 exactly when every
check is ok, 1 when a check fails and 2 when the input is refused.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .algebroid import Connection, IdentityReport, curvature_identities
from .errors import LieRuthError, ManifestError
from .manifest import Manifest, multivector, parse_leaf, read_manifest
from .ruth import Ruth, adjoint, change_of_connection, coadjoint
from .ruth.deformation import K1Differential, as_deformation_cochain, deformation_differential, k_differential_check
from .ruth.homotopy import serre_rep, transfer
from .weil import brst_compare, build_weil, im_form_check, im_form_check_weil, weil_cohomology, weil_square_reports

COMMANDS = ("check", "adjoint", "weil", "brst", "im", "kdiff", "cohomology", "transfer")


class Report:
    def __init__(self, command: str, manifest: Manifest):
        self.command = command
        self.digest = manifest.digest
        self.checks: List[dict] = []
        self.tables: dict = {}

    def add(self, name: str, ok: bool, witness: Optional[str] = None):
        entry = {"name": name, "status": "ok" if ok else "fail"}
        if witness is not None and not ok:
            entry["witness"] = witness
        self.checks.append(entry)

    def extend(self, reports: List[IdentityReport], prefix: str = ""):
        for rep in reports:
            self.add(prefix + rep.name, rep.ok, rep.witness)

    @property
    def ok(self) -> bool:
        return all(c["status"] == "ok" for c in self.checks)

    def as_dict(self) -> dict:
        return {"command": self.command, "input_digest": self.digest, "ok": self.ok,
                "checks": self.checks, "tables": self.tables}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"{self.command}  (manifest {self.digest[:12]})"]
        for c in self.checks:
            line = f"  [{c['status']}] {c['name']}"
            if "witness" in c:
                line += f"  -- {c['witness']}"
            lines.append(line)
        for key, value in self.tables.items():
            if isinstance(value, list) and value and all(isinstance(x, str) for x in value):
                lines.append(f"  {key}:")
                lines.extend(f"    {x}" for x in value)
            else:
                lines.append(f"  {key}: {json.dumps(value, ensure_ascii=False)}")
        lines.append("all checks ok" if self.ok else "some checks failed")
        return "\n".join(lines)


def _connections(man: Manifest) -> List[Connection]:
    return man.connections or [Connection.flat(man.algebroid)]


def _representation(man: Manifest, name: Optional[str]) -> Ruth:
    A = man.algebroid
    if name is None:
        name = next(iter(man.representations), None) or ("serre" if man.extension else "adjoint")
    block = man.representations.get(name)
    if block is None and name in ("adjoint", "coadjoint", "serre"):
        block = {"kind": name}
    if block is None:
        known = sorted(set(man.representations) | {"adjoint", "coadjoint"})
        raise ManifestError(f"no representation named {name!r}; known: {', '.join(known)}", "representations")
    kind = block.get("kind", "table")
    where = f"representations.{name}"
    if kind == "adjoint":
        return adjoint(A, _connections(man)[0])
    if kind == "coadjoint":
        return coadjoint(A, _connections(man)[0])
    if kind == "serre":
        ext = block if "ideal" in block else (man.extension or {})
        if "ideal" not in ext:
            raise ManifestError("a Serre representation needs an 'ideal' list (1-based)", "extension")
        ideal = [i - 1 for i in ext["ideal"]]
        return serre_rep(A, ideal, ext.get("splitting")).ruth
    if kind != "table":
        raise ManifestError(f"unknown representation kind {kind!r}", where)
    bundle = block.get("bundle")
    if not isinstance(bundle, list) or not all(isinstance(b, list) and len(b) == 2 for b in bundle):
        raise ManifestError("bundle must list [name, degree] pairs", where)
    table = {}
    for src, entries in (block.get("operator") or {}).items():
        rows = []
        for forms, target, coeff in entries:
            if any(not 1 <= f <= A.r for f in forms):
                raise ManifestError(f"form index out of range in D({src})", where)
            rows.append(([f - 1 for f in forms], target, parse_leaf(coeff, A.coordinates, f"{where}.{src}")))
        table[src] = rows
    try:
        return Ruth.from_table(A, [(n, d) for n, d in bundle], table, name=name)
    except KeyError as exc:
        raise ManifestError(f"unknown bundle generator {exc.args[0]!r}", where) from None


def cmd_check(man: Manifest, args) -> Report:
    rep = Report("check", man)
    A = man.algebroid
    failure = A.verify_axioms()
    if failure is None:
        rep.add("algebroid axioms", True)
    else:
        kind, idx, residue = failure
        shown = ", ".join(str(x) for x in residue)
        rep.add(f"algebroid axioms ({kind})", False, f"triple {idx}: ({shown})")
        return rep
    for n, conn in enumerate(_connections(man)):
        rep.extend(curvature_identities(A, conn), prefix=f"∇{n + 1}: ")
    return rep


def cmd_adjoint(man: Manifest, args) -> Report:
    rep = Report("adjoint", man)
    A = man.algebroid
    conns = _connections(man)
    ads = []
    for n, conn in enumerate(conns):
        ad = adjoint(A, conn)
        ads.append(ad)
        rep.extend(ad.check_structure(), prefix=f"Ad∇{n + 1}: ")
    for n in range(1, len(conns)):
        phi = change_of_connection(A, conns[0], conns[n], ads[0], ads[n])
        rep.extend(phi.check(), prefix=f"Ad∇1 → Ad∇{n + 1}: ")
        rep.add(f"Ad∇1 → Ad∇{n + 1}: invertible", phi.is_isomorphism())
    return rep


def cmd_weil(man: Manifest, args) -> Report:
    rep = Report("weil", man)
    A = man.algebroid
    for n, conn in enumerate(_connections(man)):
        W = build_weil(A, conn)
        rep.extend(weil_square_reports(W), prefix=f"∇{n + 1}: ")
        if n == 0:
            rep.tables["d_hor"] = W.table("hor")
            rep.tables["d_ver"] = W.table("ver")
    if args.cohomology:
        W = build_weil(A, _connections(man)[0])
        rep.tables["betti"] = weil_cohomology(W, args.max_degree)
        rep.tables["betti_degrees"] = f"0..{args.max_degree - 1}"
    return rep


def cmd_brst(man: Manifest, args) -> Report:
    rep = Report("brst", man)
    res = brst_compare(man.algebroid)
    witness = None
    if not res.equal:
        witness = f"{res.generator}: W(A,∇flat) gives {res.weil}, BRST gives {res.brst}"
    rep.add("W(A,∇flat) equals the BRST differential", res.equal, witness)
    rep.tables["result"] = res.status if res.equal else f"first differing generator {res.generator}"
    return rep


def cmd_im(man: Manifest, args) -> Report:
    if man.sigma is None:
        raise ManifestError("the im command needs a 'sigma' block", "sigma")
    rep = Report("im", man)
    verdict = im_form_check(man.algebroid, man.sigma)
    rep.extend(verdict.reports)
    weil_ok = im_form_check_weil(build_weil(man.algebroid, _connections(man)[0]), man.sigma)
    rep.tables["verdict"] = "IM" if verdict.is_im else "not IM"
    rep.tables["weil_cocycle_closed"] = weil_ok
    if weil_ok != verdict.is_im:
        rep.add("σ-equations agree with d_hor-closedness in W^{1,2}", False,
                f"σ-equations say {verdict.is_im}, Weil cocycle says {weil_ok}")
    return rep


def cmd_kdiff(man: Manifest, args) -> Report:
    A = man.algebroid
    block = man.kdiff
    if not block:
        raise ManifestError("the kdiff command needs a 'kdiff' block", "kdiff")
    k = args.k if args.k is not None else block.get("k", 1)
    functions = [multivector(x, A, f"kdiff.functions[{n + 1}]") for n, x in enumerate(block.get("functions", []))]
    sections = [multivector(x, A, f"kdiff.sections[{n + 1}]") for n, x in enumerate(block.get("sections", []))]
    delta = K1Differential.from_tables(A, k, functions, sections)
    rep = Report("kdiff", man)
    verdict = k_differential_check(A, delta, k)
    rep.extend(verdict.reports)
    rep.tables["classification"] = verdict.classification
    if k == 1 and verdict.classification != "not-almost":
        closed = deformation_differential(as_deformation_cochain(delta)).is_zero()
        rep.tables["deformation_cocycle"] = closed
        if closed != verdict.is_k_differential:
            rep.add("agrees with the deformation complex", False,
                    f"bracket rule says {verdict.is_k_differential}, δc = 0 says {closed}")
    return rep


def cmd_cohomology(man: Manifest, args) -> Report:
    rep = Report("cohomology", man)
    ruth = _representation(man, args.rep)
    rep.extend(ruth.check_structure(), prefix=f"{ruth.name}: ")
    rep.tables["betti"] = {str(k): b for k, b in ruth.cohomology()}
    return rep


def cmd_transfer(man: Manifest, args) -> Report:
    rep = Report("transfer", man)
    ruth = _representation(man, args.rep)
    res = transfer(ruth)
    rep.extend(res.reports)
    before = ruth.cohomology()
    after = res.ruth.cohomology()
    rep.add("Betti numbers preserved", dict(before) == {k: dict(after).get(k, 0) for k, _ in before},
            f"{before} vs {after}")
    rep.tables["betti"] = {str(k): b for k, b in before}
    rep.tables["cohomology_bundle"] = [f"{n} (degree {d})" for n, d in res.ruth.bundle]
    return rep


HANDLERS = {
    "check": cmd_check, "adjoint": cmd_adjoint, "weil": cmd_weil, "brst": cmd_brst, "im": cmd_im,
    "kdiff": cmd_kdiff, "cohomology": cmd_cohomology, "transfer": cmd_transfer,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lieruth", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--manifest", required=True, help="path to a JSON manifest")
    parser.add_argument("--max-degree", type=int, default=6, help="Weil cohomology degree cutoff N")
    parser.add_argument("--cohomology", action="store_true", help="also compute Weil cohomology (point base)")
    parser.add_argument("--rep", default=None, help="representation name for cohomology/transfer")
    parser.add_argument("--k", type=int, default=None, help="degree k for kdiff")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        man = read_manifest(args.manifest)
        report = HANDLERS[args.command](man, args)
    except LieRuthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.to_json() if args.fmt == "json" else report.to_text())
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
