"""Ansatz-construction protocols.

Energy sorting appends every operator whose individually optimized energy
impact clears the threshold, ranked by impact and warm-started at its own
optimum, after a single sweep over the pool; the doubles stage runs
classically (from integrals) whenever the reference is a computational-basis
state. An adaptive one-at-a-time baseline and a fixed whole-pool baseline
share the same machinery. OVP-CEO pools get a dedicated pair-selection pass
that decides, quadruple by quadruple, whether the sum or the difference
variant joins the ansatz.
"""

from __future__ import annotations

from dataclasses import dataclass

from .integrals import hf_energy
from .landscape import (
    AnsatzElement,
    canonical_angle,
    minimize_landscape,
    reconstruct_landscape,
    sweep_optimize,
)
from .pools import (
    DOUBLE_KINDS,
    OVP_CEO_MINUS,
    OVP_CEO_PLUS,
    Pool,
    SINGLE_KINDS,
    TRIPLE_KINDS,
)
from .preselect import preselect_generator
from .simulator import SELECTION, apply_generator_exponential, expectation
from .trace import RunTrace

STAGE_CLASSICAL_DOUBLES = "classical_doubles"
STAGE_QUANTUM_DOUBLES = "quantum_doubles"
STAGE_SINGLES = "singles"
STAGE_TRIPLES = "triples"
STAGE_SCREENING = "screening"
STAGE_ADAPTIVE = "adaptive"

_DELTA_TOL = 1e-12


@dataclass
class SelectionRecord:
    index: int          # position in the pool (canonical order)
    kind: str
    orbitals: tuple
    delta_e: float      # impact of this operator alone, against the stage state
    theta: float        # warm-start parameter realizing delta_e
    selected: bool
    stage: str

    def to_dict(self):
        return {
            "index": self.index,
            "kind": self.kind,
            "orbitals": list(self.orbitals),
            "delta_e": self.delta_e,
            "theta": self.theta,
            "selected": self.selected,
            "stage": self.stage,
        }


@dataclass
class BuildResult:
    ansatz: list
    energy: float
    records: list
    trace: RunTrace
    converged: bool
    sweeps: int = 0
    screening_rounds: int = 0

    def ansatz_keys(self):
        return [e.generator.key for e in self.ansatz]


def energy_sort(
    generators,
    state,
    h,
    eps_a,
    e_ref=None,
    stage=STAGE_QUANTUM_DOUBLES,
    trace=None,
    ansatz_size=0,
):
    """One selection sweep: reconstruct each operator's landscape against the
    current state (sharing the reference energy, 4 evaluations apiece), rank
    records by impact. Returns (sorted records, e_ref)."""
    if e_ref is None:
        e_ref = expectation(state, h, SELECTION)
        if trace is not None:
            trace.record(state.counter.total, e_ref, SELECTION, stage, ansatz_size)
    records = []
    for index, gen in generators:
        land = reconstruct_landscape(state, gen, h, e_at_zero=e_ref, phase=SELECTION)
        theta, e_min = minimize_landscape(land)
        delta = e_ref - e_min
        if delta < -_DELTA_TOL:
            raise AssertionError("operator optimum above the reference energy")
        records.append(
            SelectionRecord(index, gen.kind, gen.orbitals, delta, theta, delta > eps_a, stage)
        )
        if trace is not None:
            trace.record(state.counter.total, e_ref, SELECTION, stage, ansatz_size)
    records.sort(key=lambda r: (-r.delta_e, r.index))
    return records, e_ref


def classical_sort(pool, soh, occ_mask, generators, eps_a, stage=STAGE_CLASSICAL_DOUBLES):
    """Selection records for double-kind operators from integrals alone."""
    records = []
    for index, gen in generators:
        res = preselect_generator(soh, occ_mask, gen)
        records.append(
            SelectionRecord(
                index, gen.kind, gen.orbitals, res.delta_e_max,
                canonical_angle(res.theta_max), res.delta_e_max > eps_a, stage,
            )
        )
    records.sort(key=lambda r: (-r.delta_e, r.index))
    return records


def _append_selected(pool, records, ansatz, state):
    """Append selected operators (already impact-ranked) warm-started."""
    for rec in records:
        if not rec.selected:
            continue
        gen = pool[rec.index]
        ansatz.append(AnsatzElement(gen, rec.theta))
        state = apply_generator_exponential(state, gen, rec.theta)
    return state


def _indexed(pool, predicate=None, exclude_keys=()):
    exclude = set(exclude_keys)
    return [
        (i, g)
        for i, g in enumerate(pool.generators)
        if (predicate is None or predicate(g)) and g.key not in exclude
    ]


def _classical_reference(reference, soh):
    """The basis occupation if classical preselection applies, else None."""
    if soh is None:
        return None
    return reference.basis_index()


def _screening(pool, ansatz, h, reference, state, energy, eps_a, eps_conv,
               max_sweeps, records, trace, rounds):
    """Verify no left-out operator clears the threshold; re-enter selection
    (append + re-optimize) when violated, up to `rounds` times."""
    converged = False
    sweeps = 0
    used = 0
    while used < rounds:
        used += 1
        candidates = _indexed(pool, exclude_keys=[e.generator.key for e in ansatz])
        recs, _ = energy_sort(
            candidates, state, h, eps_a, e_ref=energy,
            stage=STAGE_SCREENING, trace=trace, ansatz_size=len(ansatz),
        )
        records.extend(recs)
        violations = [r for r in recs if r.selected]
        if not violations:
            converged = True
            break
        state = _append_selected(pool, violations, ansatz, state)
        ansatz, info = sweep_optimize(
            ansatz, h, reference, eps_conv, max_sweeps,
            energy=None, trace=trace, stage=STAGE_SCREENING,
        )
        energy = info["energy"]
        sweeps += info["sweeps"]
        state = _rebuild_state(reference, ansatz)
    return state, energy, converged, sweeps, used


def _rebuild_state(reference, ansatz):
    state = reference
    for elem in ansatz:
        state = apply_generator_exponential(state, elem.generator, elem.theta)
    return state


def build_ansatz_energy_sorting(
    pool: Pool,
    h,
    reference,
    soh=None,
    eps_a=1e-13,
    eps_conv=1e-8,
    max_sweeps=100,
    stages=("doubles", "singles"),
    screening_rounds=3,
    oracle_energy=None,
) -> BuildResult:
    """Staged single-sweep construction: doubles (classical on a basis-state
    reference), then singles, then optionally triples; coordinate-descent
    optimization; final screening."""
    if "doubles" not in stages or stages[0] != "doubles":
        raise ValueError("stages must start with doubles")
    trace = RunTrace(oracle_energy)
    records = []
    ansatz = []
    state = reference
    basis = _classical_reference(reference, soh)
    e_ref = None
    if basis is not None:
        trace.record(0, hf_energy(soh, basis), SELECTION, STAGE_CLASSICAL_DOUBLES, 0)

    # stage 1: doubles
    doubles = _indexed(pool, lambda g: g.kind in DOUBLE_KINDS)
    if basis is not None:
        recs = classical_sort(pool, soh, basis, doubles, eps_a)
    else:
        recs, e_ref = energy_sort(
            doubles, state, h, eps_a, stage=STAGE_QUANTUM_DOUBLES, trace=trace
        )
    records.extend(recs)
    state = _append_selected(pool, recs, ansatz, state)

    # stage 2 (and 3): singles, then triples, against the grown state
    for stage in stages[1:]:
        kinds = {"singles": SINGLE_KINDS, "triples": TRIPLE_KINDS}[stage]
        label = STAGE_SINGLES if stage == "singles" else STAGE_TRIPLES
        group = _indexed(pool, lambda g: g.kind in kinds)
        if not group:
            continue
        recs, _ = energy_sort(
            group, state, h, eps_a, e_ref=None, stage=label,
            trace=trace, ansatz_size=len(ansatz),
        )
        records.extend(recs)
        state = _append_selected(pool, recs, ansatz, state)

    ansatz, info = sweep_optimize(
        ansatz, h, reference, eps_conv, max_sweeps, energy=None, trace=trace
    )
    energy = info["energy"]
    state = _rebuild_state(reference, ansatz)

    state, energy, converged, extra_sweeps, rounds = _screening(
        pool, ansatz, h, reference, state, energy, eps_a, eps_conv,
        max_sweeps, records, trace, screening_rounds,
    )
    return BuildResult(
        ansatz, energy, records, trace,
        converged and info["converged"], info["sweeps"] + extra_sweeps, rounds,
    )


def build_ansatz_adaptive(
    pool: Pool,
    h,
    reference,
    eps_a=1e-13,
    max_ops=200,
    eps_conv=1e-8,
    max_sweeps=100,
    oracle_energy=None,
) -> BuildResult:
    """One-at-a-time baseline: full-pool sort, append only the top operator
    warm-started, re-optimize, repeat until no impact clears the threshold."""
    trace = RunTrace(oracle_energy)
    records = []
    ansatz = []
    energy = None
    total_sweeps = 0
    converged = False
    while len(ansatz) < max_ops:
        state = _rebuild_state(reference, ansatz)
        recs, e_ref = energy_sort(
            _indexed(pool), state, h, eps_a, e_ref=energy,
            stage=STAGE_ADAPTIVE, trace=trace, ansatz_size=len(ansatz),
        )
        records.extend(recs)
        top = recs[0]
        if not top.selected:
            converged = True
            energy = e_ref
            break
        ansatz.append(AnsatzElement(pool[top.index], top.theta))
        ansatz, info = sweep_optimize(
            ansatz, h, reference, eps_conv, max_sweeps,
            energy=e_ref - top.delta_e, trace=trace,
        )
        energy = info["energy"]
        total_sweeps += info["sweeps"]
    else:
        energy = energy if energy is not None else expectation(
            _rebuild_state(reference, ansatz), h, SELECTION
        )
    return BuildResult(ansatz, energy, records, trace, converged, total_sweeps, 0)


def build_ansatz_fixed(
    pool: Pool,
    h,
    reference,
    eps_conv=1e-8,
    max_sweeps=100,
    oracle_energy=None,
) -> BuildResult:
    """Whole pool at theta = 0 in canonical order, then optimized."""
    trace = RunTrace(oracle_energy)
    ansatz = [AnsatzElement(g, 0.0) for g in pool]
    ansatz, info = sweep_optimize(
        ansatz, h, reference, eps_conv, max_sweeps, energy=None, trace=trace
    )
    return BuildResult(ansatz, info["energy"], [], trace, info["converged"], info["sweeps"], 0)


def select_ovp_ceo_pair(pairs, state, h, e_ref, trace=None, ansatz_size=0):
    """Walk impact-ordered quadruples; for each, reconstruct both the sum and
    the difference variant against the current state and append whichever
    predicts the larger impact (ties go to the plus variant).

    Returns (elements, records, state, energy)."""
    elements = []
    records = []
    for index_plus, gen_plus, index_minus, gen_minus in pairs:
        land_p = reconstruct_landscape(state, gen_plus, h, e_at_zero=e_ref, phase=SELECTION)
        theta_p, e_p = minimize_landscape(land_p)
        land_m = reconstruct_landscape(state, gen_minus, h, e_at_zero=e_ref, phase=SELECTION)
        theta_m, e_m = minimize_landscape(land_m)
        delta_p, delta_m = e_ref - e_p, e_ref - e_m
        take_plus = delta_p >= delta_m
        records.append(
            SelectionRecord(index_plus, gen_plus.kind, gen_plus.orbitals,
                            delta_p, theta_p, take_plus, STAGE_QUANTUM_DOUBLES)
        )
        records.append(
            SelectionRecord(index_minus, gen_minus.kind, gen_minus.orbitals,
                            delta_m, theta_m, not take_plus, STAGE_QUANTUM_DOUBLES)
        )
        gen, theta, e_new = (gen_plus, theta_p, e_p) if take_plus else (gen_minus, theta_m, e_m)
        elements.append(AnsatzElement(gen, theta))
        state = apply_generator_exponential(state, gen, theta)
        e_ref = e_new
        if trace is not None:
            trace.record(state.counter.total, e_ref, SELECTION,
                         STAGE_QUANTUM_DOUBLES, ansatz_size + len(elements))
    return elements, records, state, e_ref


def build_ansatz_ovp_paired(
    pool: Pool,
    h,
    reference,
    soh=None,
    eps_a=1e-13,
    eps_conv=1e-8,
    max_sweeps=100,
    screening_rounds=3,
    oracle_energy=None,
) -> BuildResult:
    """Energy sorting over an OVP-CEO pool with the paired +/- decision.

    Quadruples are ranked by their impact on the reference (classically when
    it is a basis state); each then contributes exactly one variant, chosen
    against the current state. Singles follow, then optimization and
    screening over the full pool."""
    plus = _indexed(pool, lambda g: g.kind == OVP_CEO_PLUS)
    minus_by_orbitals = {
        g.orbitals: (i, g) for i, g in _indexed(pool, lambda g: g.kind == OVP_CEO_MINUS)
    }
    if not minus_by_orbitals:
        raise ValueError("paired selection needs a plus_and_minus pool")

    trace = RunTrace(oracle_energy)
    records = []
    ansatz = []
    state = reference
    basis = _classical_reference(reference, soh)
    if basis is not None:
        trace.record(0, hf_energy(soh, basis), SELECTION, STAGE_CLASSICAL_DOUBLES, 0)
        ranked = classical_sort(pool, soh, basis, plus, eps_a)
        e_ref = expectation(state, h, SELECTION)
        trace.record(state.counter.total, e_ref, SELECTION, STAGE_CLASSICAL_DOUBLES, 0)
    else:
        ranked, e_ref = energy_sort(plus, state, h, eps_a, stage=STAGE_QUANTUM_DOUBLES,
                                    trace=trace)
    records.extend(ranked)

    pairs = []
    for rec in ranked:
        if not rec.selected:
            continue
        index_minus, gen_minus = minus_by_orbitals[rec.orbitals]
        pairs.append((rec.index, pool[rec.index], index_minus, gen_minus))
    elements, pair_records, state, energy = select_ovp_ceo_pair(
        pairs, state, h, e_ref, trace=trace
    )
    ansatz.extend(elements)
    records.extend(pair_records)

    singles = _indexed(pool, lambda g: g.kind in SINGLE_KINDS)
    if singles:
        recs, _ = energy_sort(singles, state, h, eps_a, e_ref=energy,
                              stage=STAGE_SINGLES, trace=trace, ansatz_size=len(ansatz))
        records.extend(recs)
        state = _append_selected(pool, recs, ansatz, state)

    ansatz, info = sweep_optimize(
        ansatz, h, reference, eps_conv, max_sweeps, energy=None, trace=trace
    )
    energy = info["energy"]
    state = _rebuild_state(reference, ansatz)

    # screening keeps one variant per quadruple: missed quadruples are probed
    # through their plus variant and pair-decided only on violation
    converged = False
    extra_sweeps = 0
    rounds = 0
    while rounds < screening_rounds:
        rounds += 1
        taken_quads = {e.generator.orbitals for e in ansatz
                       if e.generator.kind in DOUBLE_KINDS}
        taken_keys = {e.generator.key for e in ansatz}
        probes = [(i, g) for i, g in plus if g.orbitals not in taken_quads]
        probes += [(i, g) for i, g in singles if g.key not in taken_keys]
        recs, _ = energy_sort(probes, state, h, eps_a, e_ref=energy,
                              stage=STAGE_SCREENING, trace=trace,
                              ansatz_size=len(ansatz))
        records.extend(recs)
        violations = [r for r in recs if r.selected]
        if not violations:
            converged = True
            break
        missed_pairs = [
            (r.index, pool[r.index], *minus_by_orbitals[r.orbitals])
            for r in violations if r.kind == OVP_CEO_PLUS
        ]
        elements, pair_records, state, energy = select_ovp_ceo_pair(
            missed_pairs, state, h, energy, trace=trace, ansatz_size=len(ansatz)
        )
        ansatz.extend(elements)
        records.extend(pair_records)
        state = _append_selected(
            pool, [r for r in violations if r.kind != OVP_CEO_PLUS], ansatz, state
        )
        ansatz, sweep_info = sweep_optimize(
            ansatz, h, reference, eps_conv, max_sweeps,
            energy=None, trace=trace, stage=STAGE_SCREENING,
        )
        energy = sweep_info["energy"]
        extra_sweeps += sweep_info["sweeps"]
        state = _rebuild_state(reference, ansatz)

    return BuildResult(
        ansatz, energy, records, trace,
        converged and info["converged"], info["sweeps"] + extra_sweeps, rounds,
    )

