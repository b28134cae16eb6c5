//! The whole-sphere transform: one persistence diagram per cell, glued by
//! charge-preserving pushforwards along face maps.
//!
//! `compute_transform` enumerates the cellulation, builds each cell's
//! filtration and diagrams, and precomputes the bounded monotone map of
//! every covering pair. `verify_transform` then checks the gluing axioms
//! exhaustively: face maps transport filtrations stage by stage,
//! birth-death functions satisfy the transport equations, stored charges
//! push forward exactly, face maps compose, and every cell's total charge
//! per dimension equals the cycle space dimension of the full complex.
//!
//! The vineyard graph connects charged intervals across adjacent cells;
//! its connected components are the vines of the transform, each carrying
//! a single per-cell charge. A seeded sampling oracle recomputes diagrams
//! from random integer directions without consulting the cellulation's
//! stored filtrations and compares.

use crate::arrangement::{
    cell_of, enumerate_cells, essential_defect, Cellulation, OrderedPartition, PairSet,
};
use crate::complex::{Direction, GeometricComplex};
use crate::filtration::{
    cell_filtration, cell_poset, compose_maps, face_map, filtration_of_partition,
    is_filtration_preserving, BoundedMonotoneMap, CellPoset, Filtration,
};
use crate::pipeline::{
    birth_death, cycle_space_dim, is_monotone_preserving, persistent_homology, push_charges,
    total_charge, FieldConfig, IntegralFunction, Interval, MonotoneIntegralFunction,
};
use crate::rational::rat;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Renders an interval of a cell's poset with vertex labels, e.g.
/// `[v1=v2, TOP]`.
pub fn interval_label(poset: &CellPoset, interval: Interval) -> String {
    format!("[{}, {}]", poset.label(interval.0), poset.label(interval.1))
}

/// Persistence diagrams for every cell of the sphere, with the face-map
/// data needed to state and check the gluing axioms.
#[derive(Debug, Clone)]
pub struct Transform {
    gc: GeometricComplex,
    cellulation: Cellulation,
    field: FieldConfig,
    dims: Vec<usize>,
    filtrations: Vec<Filtration>,
    diagrams: BTreeMap<usize, Vec<IntegralFunction>>,
    arrows: Vec<BoundedMonotoneMap>,
}

impl Transform {
    pub fn geometry(&self) -> &GeometricComplex {
        &self.gc
    }

    pub fn cellulation(&self) -> &Cellulation {
        &self.cellulation
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    /// Homological dimensions the transform was computed in, ascending.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn filtration(&self, cell: usize) -> Result<&Filtration> {
        self.filtrations.get(cell).ok_or(Error::UnknownCell(cell))
    }

    pub fn diagram(&self, d: usize, cell: usize) -> Result<&IntegralFunction> {
        self.diagrams
            .get(&d)
            .ok_or(Error::UnknownDimension(d))?
            .get(cell)
            .ok_or(Error::UnknownCell(cell))
    }

    pub fn diagrams(&self, d: usize) -> Result<&[IntegralFunction]> {
        self.diagrams
            .get(&d)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownDimension(d))
    }

    /// Bounded monotone maps of the covering pairs, parallel to
    /// `cellulation.covering()`; entry k maps the poset of the covering
    /// cell onto the poset of its face.
    pub fn arrows(&self) -> &[BoundedMonotoneMap] {
        &self.arrows
    }

    /// Rebuilds a transform around precomputed cells and diagrams.
    /// Filtrations and face-map arrows are derived, not trusted input.
    pub(crate) fn from_parts(
        gc: GeometricComplex,
        cellulation: Cellulation,
        field: FieldConfig,
        dims: Vec<usize>,
        diagrams: BTreeMap<usize, Vec<IntegralFunction>>,
    ) -> Result<Transform> {
        let keys: Vec<usize> = diagrams.keys().copied().collect();
        if keys != dims {
            return Err(Error::BadTransformFile(format!(
                "diagram dimensions {keys:?} do not match declared dimensions {dims:?}"
            )));
        }
        let filtrations: Vec<Filtration> = cellulation
            .cells()
            .iter()
            .map(|c| cell_filtration(&gc, c))
            .collect();
        for (d, per_cell) in &diagrams {
            if per_cell.len() != cellulation.cells().len() {
                return Err(Error::BadTransformFile(format!(
                    "dimension {d} has {} diagrams for {} cells",
                    per_cell.len(),
                    cellulation.cells().len()
                )));
            }
            for (cell, sigma) in per_cell.iter().enumerate() {
                if sigma.chain_len() != filtrations[cell].len() {
                    return Err(Error::BadTransformFile(format!(
                        "cell {} diagram lives on a chain of {} elements, expected {}",
                        cellulation.cells()[cell].sign,
                        sigma.chain_len(),
                        filtrations[cell].len()
                    )));
                }
            }
        }
        let arrows = cellulation
            .covering()
            .iter()
            .map(|&(face, cell)| face_map(&cellulation, face, cell))
            .collect::<Result<Vec<_>>>()?;
        Ok(Transform {
            gc,
            cellulation,
            field,
            dims,
            filtrations,
            diagrams,
            arrows,
        })
    }
}

/// Computes the full transform of an embedded complex: cellulation,
/// per-cell filtrations and diagrams in the requested homological
/// dimensions, and all covering-pair face maps.
///
/// Non-essential embeddings are rejected unless `augment` is set, in
/// which case kernel normals extend the arrangement first. An already
/// essential embedding ignores the flag.
pub fn compute_transform(
    gc: &GeometricComplex,
    dims: &[usize],
    field: FieldConfig,
    augment: bool,
) -> Result<Transform> {
    let defect = essential_defect(gc);
    let pairs = if defect < 0 {
        PairSet::new(gc)
    } else if augment {
        PairSet::augmented(gc)?
    } else {
        return Err(Error::NotEssential {
            defect: defect as usize,
        });
    };
    let cellulation = enumerate_cells(gc, &pairs)?;

    let mut dims: Vec<usize> = dims.to_vec();
    dims.sort_unstable();
    dims.dedup();

    let filtrations: Vec<Filtration> = cellulation
        .cells()
        .iter()
        .map(|c| cell_filtration(gc, c))
        .collect();
    let diagrams: BTreeMap<usize, Vec<IntegralFunction>> = dims
        .iter()
        .map(|&d| {
            (
                d,
                filtrations
                    .iter()
                    .map(|f| persistent_homology(f, d, field))
                    .collect(),
            )
        })
        .collect();
    let arrows = cellulation
        .covering()
        .iter()
        .map(|&(face, cell)| face_map(&cellulation, face, cell))
        .collect::<Result<Vec<_>>>()?;

    Ok(Transform {
        gc: gc.clone(),
        cellulation,
        field,
        dims,
        filtrations,
        diagrams,
        arrows,
    })
}

/// Outcome of one named verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Results of all verification checks, in a fixed order.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Checks every gluing axiom of the transform and reports failures by
/// cell and interval. A freshly computed transform passes all checks;
/// corrupted charges are caught by the transport and total-charge checks.
pub fn verify_transform(t: &Transform) -> VerificationReport {
    let cells = t.cellulation.cells();
    let covering = t.cellulation.covering();

    // Birth-death functions recomputed once per cell and dimension; the
    // transport equations below are stated against these, not against the
    // stored diagrams.
    let bd: BTreeMap<(usize, usize), MonotoneIntegralFunction> = t
        .dims
        .iter()
        .flat_map(|&d| {
            (0..cells.len()).map(move |c| ((c, d), birth_death(&t.filtrations[c], d, t.field)))
        })
        .collect();

    let mut filtration_failures = Vec::new();
    let mut monotone_failures = Vec::new();
    let mut charge_failures = Vec::new();

    for (k, &(face, cell)) in covering.iter().enumerate() {
        let alpha = &t.arrows[k];
        let f = &t.filtrations[cell];
        let g = &t.filtrations[face];
        let pair = format!("cells {} <= {}", cells[face].sign, cells[cell].sign);

        match is_filtration_preserving(f, g, alpha) {
            Ok(true) => {}
            Ok(false) => {
                let stage = (0..g.len())
                    .find(|&a| g.stage(a) != f.stage(alpha.pullback_max(a)))
                    .expect("some stage differs");
                filtration_failures.push(format!(
                    "{pair}: face stage {} is not the source stage it pulls back to",
                    cell_poset(&cells[face]).label(stage)
                ));
            }
            Err(e) => filtration_failures.push(format!("{pair}: {e}")),
        }

        for &d in &t.dims {
            let fb = &bd[&(cell, d)];
            let gb = &bd[&(face, d)];
            match is_monotone_preserving(fb, gb, alpha) {
                Ok(true) => {}
                Ok(false) => {
                    let poset = cell_poset(&cells[face]);
                    let bad = gb
                        .poset()
                        .intervals()
                        .iter()
                        .find(|&&(a, b)| {
                            gb.value((a, b))
                                != fb.value((alpha.pullback_max(a), alpha.pullback_max(b)))
                        })
                        .copied()
                        .expect("some interval differs");
                    monotone_failures.push(format!(
                        "{pair} dim {d}: birth-death transport fails at {}",
                        interval_label(&poset, bad)
                    ));
                }
                Err(e) => monotone_failures.push(format!("{pair} dim {d}: {e}")),
            }

            let sigma = &t.diagrams[&d][cell];
            let tau = &t.diagrams[&d][face];
            match push_charges(sigma, alpha) {
                Ok(pushed) => {
                    if &pushed != tau {
                        let poset = cell_poset(&cells[face]);
                        let intervals: BTreeSet<Interval> = pushed
                            .support()
                            .chain(tau.support())
                            .map(|(i, _)| i)
                            .collect();
                        let bad = intervals
                            .into_iter()
                            .find(|&i| pushed.charge(i) != tau.charge(i))
                            .expect("some charge differs");
                        charge_failures.push(format!(
                            "{pair} dim {d}: charge at {} is {}, pushforward gives {}",
                            interval_label(&poset, bad),
                            tau.charge(bad),
                            pushed.charge(bad)
                        ));
                    }
                }
                Err(e) => charge_failures.push(format!("{pair} dim {d}: {e}")),
            }
        }
    }

    // Composable covering chains a < b < c, coverings indexed by face.
    let mut above: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &(face, _)) in covering.iter().enumerate() {
        above.entry(face).or_default().push(k);
    }
    let mut composition_failures = Vec::new();
    for (lower, &(a, b)) in covering.iter().enumerate() {
        for &upper in above.get(&b).into_iter().flatten() {
            let c = covering[upper].1;
            let chain = format!(
                "cells {} <= {} <= {}",
                cells[a].sign, cells[b].sign, cells[c].sign
            );
            let composed = match compose_maps(&t.arrows[lower], &t.arrows[upper]) {
                Ok(m) => m,
                Err(e) => {
                    composition_failures.push(format!("{chain}: {e}"));
                    continue;
                }
            };
            let direct = match face_map(&t.cellulation, a, c) {
                Ok(m) => m,
                Err(e) => {
                    composition_failures.push(format!("{chain}: {e}"));
                    continue;
                }
            };
            if composed != direct {
                composition_failures.push(format!(
                    "{chain}: composed face maps differ from the direct map"
                ));
                continue;
            }
            for &d in &t.dims {
                let sigma = &t.diagrams[&d][c];
                let two_step = push_charges(sigma, &t.arrows[upper])
                    .and_then(|mid| push_charges(&mid, &t.arrows[lower]));
                let one_step = push_charges(sigma, &direct);
                match (two_step, one_step) {
                    (Ok(x), Ok(y)) if x == y => {}
                    (Ok(_), Ok(_)) => composition_failures.push(format!(
                        "{chain} dim {d}: stepwise pushforward differs from the composite"
                    )),
                    (Err(e), _) | (_, Err(e)) => {
                        composition_failures.push(format!("{chain} dim {d}: {e}"))
                    }
                }
            }
        }
    }

    // Total charge per cell and dimension equals the cycle space
    // dimension of the full complex: the top interval count is exhaustive.
    let mut total_failures = Vec::new();
    for &d in &t.dims {
        let z = cycle_space_dim(t.gc.complex(), d, t.field) as i64;
        for (c, sigma) in t.diagrams[&d].iter().enumerate() {
            let total = total_charge(sigma);
            if total != z {
                total_failures.push(format!(
                    "cell {} dim {d}: total charge {total}, cycle space dimension {z}",
                    cells[c].sign
                ));
            }
        }
    }

    VerificationReport {
        checks: vec![
            CheckResult {
                name: "filtration transport",
                failures: filtration_failures,
            },
            CheckResult {
                name: "birth-death transport",
                failures: monotone_failures,
            },
            CheckResult {
                name: "charge transport",
                failures: charge_failures,
            },
            CheckResult {
                name: "face map composition",
                failures: composition_failures,
            },
            CheckResult {
                name: "total charge",
                failures: total_failures,
            },
        ],
    }
}

/// One charged interval of one cell's diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VineNode {
    pub cell: usize,
    pub interval: Interval,
    pub charge: i64,
}

/// A connected component of the vineyard graph. `cell_totals` sums the
/// component's charges per cell it touches; `charges` is the set of
/// distinct totals, a single value for every component of a verified
/// transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VineComponent {
    pub nodes: Vec<usize>,
    pub cell_totals: BTreeMap<usize, i64>,
    pub charges: BTreeSet<i64>,
}

/// Charged intervals of all cells in one homological dimension, with an
/// edge wherever a covering cell's charge pushes onto a charged interval
/// of the face.
#[derive(Debug, Clone)]
pub struct VineyardGraph {
    pub dim: usize,
    pub nodes: Vec<VineNode>,
    pub edges: Vec<(usize, usize)>,
    pub components: Vec<VineComponent>,
}

impl VineyardGraph {
    /// Every component carries one well-defined charge.
    pub fn is_consistent(&self) -> bool {
        self.components.iter().all(|c| c.charges.len() == 1)
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Builds the vineyard graph of the transform in dimension `d`. Edges run
/// from a node in a covering cell to the node its interval pushes onto in
/// the face, provided both ends carry charge.
pub fn vineyard(t: &Transform, d: usize) -> Result<VineyardGraph> {
    let diagrams = t.diagrams(d)?;
    let mut nodes = Vec::new();
    let mut index: BTreeMap<(usize, Interval), usize> = BTreeMap::new();
    for (cell, sigma) in diagrams.iter().enumerate() {
        for (interval, charge) in sigma.support() {
            index.insert((cell, interval), nodes.len());
            nodes.push(VineNode {
                cell,
                interval,
                charge,
            });
        }
    }

    let mut edges = Vec::new();
    let mut dsu = Dsu::new(nodes.len());
    for (k, &(face, cell)) in t.cellulation.covering().iter().enumerate() {
        let alpha = &t.arrows[k];
        for (interval, _) in diagrams[cell].support() {
            let image = (alpha.apply(interval.0), alpha.apply(interval.1));
            if diagrams[face].charge(image) != 0 {
                let from = index[&(cell, interval)];
                let to = index[&(face, image)];
                edges.push((from, to));
                dsu.union(from, to);
            }
        }
    }
    edges.sort_unstable();

    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for n in 0..nodes.len() {
        by_root.entry(dsu.find(n)).or_default().push(n);
    }
    let mut components: Vec<VineComponent> = by_root
        .into_values()
        .map(|members| {
            let mut cell_totals: BTreeMap<usize, i64> = BTreeMap::new();
            for &n in &members {
                *cell_totals.entry(nodes[n].cell).or_insert(0) += nodes[n].charge;
            }
            let charges = cell_totals.values().copied().collect();
            VineComponent {
                nodes: members,
                cell_totals,
                charges,
            }
        })
        .collect();
    components.sort_by_key(|c| c.nodes[0]);

    Ok(VineyardGraph {
        dim: d,
        nodes,
        edges,
        components,
    })
}

/// Sampling oracle configuration: integer directions are drawn uniformly
/// from `[-bound, bound]` per coordinate, zero vectors rejected.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub trials: usize,
    pub seed: u64,
    pub bound: i64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            trials: 64,
            seed: 0,
            bound: 1000,
        }
    }
}

/// Outcome of a sampling run.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub trials: usize,
    pub matches: usize,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Draws random integer directions and checks, for each, that the cell
/// found by sign lookup predicts the direction's own height order and
/// diagrams. The diagrams are recomputed from the sampled direction's
/// partition alone, an independent path around the stored filtrations.
pub fn oracle_sample_check(t: &Transform, opts: &OracleOptions) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ambient = t.gc.ambient_dim();
    let mut matches = 0usize;
    let mut mismatches = Vec::new();

    for trial in 0..opts.trials {
        let mu = loop {
            let coords: Vec<i64> = (0..ambient)
                .map(|_| rng.gen_range(-opts.bound..=opts.bound))
                .collect();
            if coords.iter().any(|&c| c != 0) {
                break Direction::new(coords.into_iter().map(rat).collect())?;
            }
        };
        let label = format!(
            "trial {trial} direction ({})",
            crate::rational::format_vector(mu.coords()).join(", ")
        );

        let cell = cell_of(&t.cellulation, &t.gc, &mu)?;
        let idx = t.cellulation.index_of_sign(&cell.sign)?;
        let partition = OrderedPartition::from_heights(&t.gc, &mu)?;
        if partition != cell.partition {
            mismatches.push(format!(
                "{label}: height order disagrees with cell {}",
                cell.sign
            ));
            continue;
        }

        let f = filtration_of_partition(&t.gc, partition.blocks());
        let mut clean = true;
        for &d in &t.dims {
            let sigma = persistent_homology(&f, d, t.field);
            if &sigma != t.diagram(d, idx)? {
                mismatches.push(format!(
                    "{label}: dim {d} diagram disagrees with cell {}",
                    cell.sign
                ));
                clean = false;
            }
        }
        if clean {
            matches += 1;
        }
    }

    Ok(OracleReport {
        trials: opts.trials,
        matches,
        mismatches,
    })
}
