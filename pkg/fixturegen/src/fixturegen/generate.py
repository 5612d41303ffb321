"""Build FCIDUMP fixtures plus reference energies from molecular geometries.

Each fixture spec yields two files under the output directory:
  {name}_{tag}.fcidump         MO-basis integrals, chemists' notation
  {name}_{tag}.reference.json  HF/FCI energies and metadata

The reference energies come from this package's own SCF and determinant-FCI
code, so they are independent of the consuming library.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import ANGSTROM_TO_BOHR
from .fci import fci_ground_energy
from .molints import Molecule
from .scf import ScfError, mo_integrals, restricted_hartree_fock


@dataclass
class FixtureSpec:
    name: str
    tag: str
    geometry: list  # [(element, (x, y, z) in Angstrom), ...]
    basis: str = "sto-3g"
    charge: int = 0
    multiplicity: int = 1

    @property
    def stem(self):
        return f"{self.name}_{self.tag}"

    @classmethod
    def from_dict(cls, d):
        geom = [(el, tuple(xyz)) for el, xyz in d["geometry"]]
        return cls(
            name=d["name"],
            tag=str(d["tag"]),
            geometry=geom,
            basis=d.get("basis", "sto-3g"),
            charge=d.get("charge", 0),
            multiplicity=d.get("multiplicity", 1),
        )


def _write_fcidump(path, n_orb, n_elec, ms2, h_mo, eri_mo, e_nuc, drop=1e-12):
    lines = [f" &FCI NORB={n_orb},NELEC={n_elec},MS2={ms2},"]
    lines.append("  ORBSYM=" + "1," * n_orb)
    lines.append("  ISYM=1,")
    lines.append(" &END")
    fmt = "%.16E %4d %4d %4d %4d"
    for i in range(n_orb):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    v = eri_mo[i, j, k, l]
                    if abs(v) > drop:
                        lines.append(fmt % (v, i + 1, j + 1, k + 1, l + 1))
    for i in range(n_orb):
        for j in range(i + 1):
            if abs(h_mo[i, j]) > drop:
                lines.append(fmt % (h_mo[i, j], i + 1, j + 1, 0, 0))
    lines.append(fmt % (e_nuc, 0, 0, 0, 0))
    Path(path).write_text("\n".join(lines) + "\n")


def generate(spec: FixtureSpec, out_dir) -> dict:
    """Run SCF + FCI for one spec and write its fixture files."""
    if not spec.geometry:
        raise ValueError("fixture geometry is empty")
    if spec.basis.lower() != "sto-3g":
        raise ValueError("only the sto-3g basis is wired up")
    if spec.multiplicity != 1:
        raise ValueError("only closed-shell singlets are generated")

    atoms = [
        (el, tuple(c * ANGSTROM_TO_BOHR for c in xyz)) for el, xyz in spec.geometry
    ]
    mol = Molecule(atoms, charge=spec.charge)
    S, T, V = mol.one_electron()
    eri = mol.two_electron()
    e_nuc = mol.nuclear_repulsion()

    e_hf, C, _ = restricted_hartree_fock(S, T + V, eri, mol.n_elec, e_nuc)
    h_mo, eri_mo = mo_integrals(T + V, eri, C)
    e_fci, fci_dim = fci_ground_energy(h_mo, eri_mo, mol.n_elec, 0, e_nuc)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_fcidump(
        out_dir / f"{spec.stem}.fcidump",
        mol.nbf, mol.n_elec, 0, h_mo, eri_mo, e_nuc,
    )
    reference = {
        "name": spec.name,
        "tag": spec.tag,
        "basis": spec.basis,
        "charge": spec.charge,
        "ms2": 0,
        "geometry": [[el, list(xyz)] for el, xyz in spec.geometry],
        "n_orb": mol.nbf,
        "n_elec": mol.n_elec,
        "e_core": e_nuc,
        "hf_energy": e_hf,
        "fci_energy": e_fci,
        "fci_dim": fci_dim,
    }
    with open(out_dir / f"{spec.stem}.reference.json", "w") as fh:
        json.dump(reference, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return reference


def load_specs(path) -> list[FixtureSpec]:
    with open(path) as fh:
        return [FixtureSpec.from_dict(d) for d in json.load(fh)]


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="generate-fixtures", description=__doc__.splitlines()[0]
    )
    parser.add_argument("--spec", required=True, help="JSON list of fixture specs")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--only", default=None, help="restrict to one name_tag stem")
    args = parser.parse_args(argv)

    specs = load_specs(args.spec)
    if args.only:
        specs = [s for s in specs if s.stem == args.only]
        if not specs:
            parser.error(f"no spec with stem {args.only!r}")
    for spec in specs:
        try:
            ref = generate(spec, args.out)
        except ScfError as exc:
            print(f"{spec.stem}: SCF failed: {exc}", file=sys.stderr)
            return 1
        print(
            f"{spec.stem}: norb={ref['n_orb']} hf={ref['hf_energy']:.10f} "
            f"fci={ref['fci_energy']:.10f} (dim {ref['fci_dim']})"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
