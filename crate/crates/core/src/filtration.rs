//! Per-cell filtrations and the maps a face relation induces.
//!
//! Inside one cell all directions order the vertices identically, so the
//! sublevel filtration of the height function is a single combinatorial
//! object: one subcomplex per block of the cell's ordered partition, plus
//! a formal top stage holding the whole complex. The stage poset is the
//! chain of blocks with that top element appended.
//!
//! Moving to a face coarsens the partition; the induced map sends each
//! block to the block absorbing it and top to top. Such maps are bounded
//! and monotone, and they transport filtrations by the rule
//! `G(a) = F(a*)` where `a*` is the largest stage mapped at or below `a`.

use crate::arrangement::{Cell, Cellulation};
use crate::complex::{GeometricComplex, SimplicialComplex};
use crate::{Error, Result};

/// The stage chain of a cell: its partition blocks from lowest to highest,
/// then a formal top. Elements are indices `0..=block_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPoset {
    blocks: Vec<Vec<usize>>,
}

impl CellPoset {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        CellPoset { blocks }
    }

    /// Number of chain elements including the top.
    pub fn len(&self) -> usize {
        self.blocks.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the formal top element.
    pub fn top(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Human-readable element label: tied vertices joined by `=`, 1-based,
    /// and `TOP` for the formal top.
    pub fn label(&self, element: usize) -> String {
        if element == self.top() {
            "TOP".to_string()
        } else {
            self.blocks[element]
                .iter()
                .map(|v| format!("v{}", v + 1))
                .collect::<Vec<_>>()
                .join("=")
        }
    }
}

/// A filtration over a stage chain: one subcomplex per element, growing
/// along the chain, with the full complex at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    poset: CellPoset,
    stages: Vec<SimplicialComplex>,
}

impl Filtration {
    pub fn poset(&self) -> &CellPoset {
        &self.poset
    }

    pub fn stage(&self, element: usize) -> &SimplicialComplex {
        &self.stages[element]
    }

    pub fn stages(&self) -> &[SimplicialComplex] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Monotone map between chains fixing bottom and top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedMonotoneMap {
    source_len: usize,
    target_len: usize,
    map: Vec<usize>,
}

impl BoundedMonotoneMap {
    pub fn new(source_len: usize, target_len: usize, map: Vec<usize>) -> Result<Self> {
        if source_len == 0 || target_len == 0 || map.len() != source_len {
            return Err(Error::PosetMismatch);
        }
        let bounded = map[0] == 0 && map[source_len - 1] == target_len - 1;
        let monotone = map.windows(2).all(|w| w[0] <= w[1]) && map.iter().all(|&x| x < target_len);
        if !bounded || !monotone {
            return Err(Error::NotBoundedMonotone);
        }
        Ok(BoundedMonotoneMap {
            source_len,
            target_len,
            map,
        })
    }

    pub fn identity(len: usize) -> Self {
        BoundedMonotoneMap {
            source_len: len,
            target_len: len,
            map: (0..len).collect(),
        }
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn apply(&self, element: usize) -> usize {
        self.map[element]
    }

    pub fn entries(&self) -> &[usize] {
        &self.map
    }

    /// Largest source element mapped at or below `target`; total because
    /// bottom maps to bottom. Monotonicity makes the preimage a prefix.
    pub fn pullback_max(&self, target: usize) -> usize {
        (0..self.source_len)
            .rev()
            .find(|&p| self.map[p] <= target)
            .expect("bottom maps to bottom")
    }
}

/// The stage chain of a cell.
pub fn cell_poset(cell: &Cell) -> CellPoset {
    CellPoset::new(cell.partition.blocks().to_vec())
}

/// Filtration of a cell: stage `i` holds the simplices whose vertices all
/// lie in blocks `0..=i`; the top stage holds the whole complex even when
/// the last block stage already does.
pub fn cell_filtration(gc: &GeometricComplex, cell: &Cell) -> Filtration {
    filtration_of_partition(gc, &cell.partition.blocks().to_vec())
}

/// Filtration determined by an ordered vertex partition alone; the cell
/// filtration and the direction-sampling oracle both reduce to this.
pub fn filtration_of_partition(gc: &GeometricComplex, blocks: &[Vec<usize>]) -> Filtration {
    let poset = CellPoset::new(blocks.to_vec());
    let mut level = std::collections::BTreeMap::new();
    for (i, block) in blocks.iter().enumerate() {
        for &v in block {
            level.insert(v, i);
        }
    }
    let mut stages = Vec::with_capacity(poset.len());
    for i in 0..blocks.len() {
        stages.push(
            gc.complex()
                .full_subcomplex(|v| level.get(&v).is_some_and(|&l| l <= i)),
        );
    }
    stages.push(gc.complex().clone());
    Filtration { poset, stages }
}

/// Map induced by a face relation `face <= cell`: each block of the cell's
/// finer partition goes to the block of the face's partition containing
/// it, top to top.
pub fn face_map(
    cellulation: &Cellulation,
    face_idx: usize,
    cell_idx: usize,
) -> Result<BoundedMonotoneMap> {
    let face = cellulation.cell(face_idx)?;
    let cell = cellulation.cell(cell_idx)?;
    if !face.sign.face_leq(&cell.sign) {
        return Err(Error::NotAFace(
            face.sign.to_string(),
            cell.sign.to_string(),
        ));
    }
    let source = cell.partition.block_count() + 1;
    let target = face.partition.block_count() + 1;
    let mut map = Vec::with_capacity(source);
    for block in cell.partition.blocks() {
        map.push(face.partition.block_of(block[0])?);
    }
    map.push(target - 1);
    BoundedMonotoneMap::new(source, target, map)
}

/// Whether `alpha` transports `f` to `g` stage-exactly: for every target
/// element `a`, `g`'s stage at `a` equals `f`'s stage at the largest
/// source element mapped at or below `a`.
pub fn is_filtration_preserving(
    f: &Filtration,
    g: &Filtration,
    alpha: &BoundedMonotoneMap,
) -> Result<bool> {
    if alpha.source_len() != f.len() || alpha.target_len() != g.len() {
        return Err(Error::PosetMismatch);
    }
    Ok((0..g.len()).all(|a| g.stage(a) == f.stage(alpha.pullback_max(a))))
}

/// Pointwise composition `alpha . beta`, defined when `beta` lands in
/// `alpha`'s source.
pub fn compose_maps(
    alpha: &BoundedMonotoneMap,
    beta: &BoundedMonotoneMap,
) -> Result<BoundedMonotoneMap> {
    if beta.target_len() != alpha.source_len() {
        return Err(Error::PosetMismatch);
    }
    BoundedMonotoneMap::new(
        beta.source_len(),
        alpha.target_len(),
        beta.entries().iter().map(|&x| alpha.apply(x)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{enumerate_cells, Cellulation, OrderedPartition, PairSet, SignVector};
    use crate::complex::build_complex;
    use crate::complex::fixtures::{book_complex, v_complex};

    fn cellulation_of(gc: &GeometricComplex) -> Cellulation {
        enumerate_cells(gc, &PairSet::new(gc)).unwrap()
    }

    fn index_by_sign(c: &Cellulation, sign: &str) -> usize {
        c.index_of_sign(&SignVector::parse(sign).unwrap()).unwrap()
    }

    fn index_by_partition(c: &Cellulation, blocks: &[&[usize]]) -> usize {
        let p = OrderedPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap();
        c.cells()
            .iter()
            .position(|cell| cell.partition == p)
            .expect("partition is realized by some cell")
    }

    #[test]
    fn stage_chain_of_a_strict_order() {
        let gc = v_complex();
        let c = cellulation_of(&gc);
        let cell = c.cell(index_by_sign(&c, "+++")).unwrap();
        let poset = cell_poset(cell);
        assert_eq!(poset.len(), 4);
        assert_eq!(poset.top(), 3);
        assert_eq!(poset.label(0), "v1");
        assert_eq!(poset.label(3), "TOP");
    }

    #[test]
    fn stage_chain_labels_ties() {
        let gc = v_complex();
        let c = cellulation_of(&gc);
        let cell = c.cell(index_by_sign(&c, "0++")).unwrap();
        let poset = cell_poset(cell);
        assert_eq!(poset.len(), 3);
        assert_eq!(poset.label(0), "v1=v2");
        assert_eq!(poset.label(1), "v3");
    }

    #[test]
    fn filtration_of_the_east_cell() {
        let gc = v_complex();
        let c = cellulation_of(&gc);
        let cell = c.cell(index_by_sign(&c, "+++")).unwrap();
        let f = cell_filtration(&gc, cell);
        assert_eq!(f.len(), 4);
        assert_eq!(f.stage(0), &build_complex(&[vec![0]]).unwrap());
        assert_eq!(f.stage(1), &build_complex(&[vec![0, 1]]).unwrap());
        assert_eq!(f.stage(2), gc.complex());
        assert_eq!(f.stage(3), gc.complex());
    }

    #[test]
    fn filtration_of_a_tied_cell() {
        let gc = v_complex();
        let c = cellulation_of(&gc);
        let cell = c.cell(index_by_sign(&c, "0++")).unwrap();
        let f = cell_filtration(&gc, cell);
        assert_eq!(f.len(), 3);
        assert_eq!(f.stage(0), &build_complex(&[vec![0, 1]]).unwrap());
        assert_eq!(f.stage(1), gc.complex());
    }

    #[test]
    fn every_filtration_tops_out_at_the_complex() {
        for gc in [v_complex(), book_complex()] {
            let c = cellulation_of(&gc);
            for cell in c.cells() {
                let f = cell_filtration(&gc, cell);
                assert_eq!(f.stage(f.poset().top()), gc.complex());
                // Stages grow along the chain.
                for w in f.stages().windows(2) {
                    assert!(w[0].is_subcomplex_of(&w[1]));
                }
            }
        }
    }

    #[test]
    fn face_map_collapses_merged_blocks() {
        let gc = v_complex();
        let c = cellulation_of(&gc);
        let face = index_by_sign(&c, "0++");
        let cell = index_by_sign(&c, "+++");
        let alpha = face_map(&c, face, cell).unwrap();
        assert_eq!(alpha.entries(), &[0, 0, 1, 2]);
        assert_eq!(alpha.source_len(), 4);
        assert_eq!(alpha.target_len(), 3);
    }

    #[test]
    fn face_map_requires_the_face_order() {
        let gc = v_complex();
        let c = cellulation_of(&gc);
        let a = index_by_sign(&c, "+++");
        let b = index_by_sign(&c, "---");
        assert!(matches!(face_map(&c, a, b), Err(Error::NotAFace(_, _))));
        // Reflexive case: the identity.
        let alpha = face_map(&c, a, a).unwrap();
        assert_eq!(alpha, BoundedMonotoneMap::identity(4));
    }

    #[test]
    fn bounded_monotone_validation() {
        assert!(BoundedMonotoneMap::new(3, 2, vec![0, 0, 1]).is_ok());
        // Not monotone.
        assert!(BoundedMonotoneMap::new(3, 2, vec![0, 1, 0]).is_err());
        // Top not fixed.
        assert!(BoundedMonotoneMap::new(3, 3, vec![0, 1, 1]).is_err());
        // Bottom not fixed.
        assert!(BoundedMonotoneMap::new(2, 2, vec![1, 1]).is_err());
        // Length mismatch.
        assert!(BoundedMonotoneMap::new(3, 2, vec![0, 1]).is_err());
    }

    #[test]
    fn pullback_max_finds_the_stage_boundary() {
        let alpha = BoundedMonotoneMap::new(4, 3, vec![0, 0, 1, 2]).unwrap();
        assert_eq!(alpha.pullback_max(0), 1);
        assert_eq!(alpha.pullback_max(1), 2);
        assert_eq!(alpha.pullback_max(2), 3);
    }

    #[test]
    fn face_maps_preserve_filtrations() {
        for gc in [v_complex(), book_complex()] {
            let c = cellulation_of(&gc);
            for &(face, cell) in c.covering() {
                let alpha = face_map(&c, face, cell).unwrap();
                let f = cell_filtration(&gc, c.cell(cell).unwrap());
                let g = cell_filtration(&gc, c.cell(face).unwrap());
                assert!(
                    is_filtration_preserving(&f, &g, &alpha).unwrap(),
                    "{} <= {}",
                    c.cell(face).unwrap().sign,
                    c.cell(cell).unwrap().sign
                );
            }
        }
    }

    #[test]
    fn wrong_target_filtration_is_detected() {
        let gc = v_complex();
        let c = cellulation_of(&gc);
        let face = index_by_sign(&c, "0++");
        let cell = index_by_sign(&c, "+++");
        let alpha = face_map(&c, face, cell).unwrap();
        let f = cell_filtration(&gc, c.cell(cell).unwrap());
        let g = cell_filtration(&gc, c.cell(face).unwrap());
        assert!(is_filtration_preserving(&f, &g, &alpha).unwrap());
        // A different face's filtration fails the stage equations.
        let wrong = cell_filtration(&gc, c.cell(index_by_sign(&c, "-0+")).unwrap());
        assert_eq!(is_filtration_preserving(&f, &wrong, &alpha).unwrap(), false);
        // Identity on the cell itself passes.
        let id = BoundedMonotoneMap::identity(f.len());
        assert!(is_filtration_preserving(&f, &f, &id).unwrap());
    }

    #[test]
    fn composition_along_a_book_chain() {
        let gc = book_complex();
        let c = cellulation_of(&gc);
        // Bottom three vertices tied, then one tie, then the strict order.
        let zero = index_by_partition(&c, &[&[0, 1, 2], &[3]]);
        let one = index_by_partition(&c, &[&[0, 1], &[2], &[3]]);
        let two = index_by_partition(&c, &[&[0], &[1], &[2], &[3]]);
        assert!(c.face_leq(zero, one).unwrap());
        assert!(c.face_leq(one, two).unwrap());
        let g1 = face_map(&c, zero, one).unwrap();
        let g2 = face_map(&c, one, two).unwrap();
        let direct = face_map(&c, zero, two).unwrap();
        assert_eq!(compose_maps(&g1, &g2).unwrap(), direct);
    }

    #[test]
    fn composition_closure_on_the_wedge() {
        let gc = v_complex();
        let c = cellulation_of(&gc);
        let n = c.cells().len();
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    if c.face_leq(a, b).unwrap() && c.face_leq(b, d).unwrap() {
                        let ab = face_map(&c, a, b).unwrap();
                        let bd = face_map(&c, b, d).unwrap();
                        assert_eq!(compose_maps(&ab, &bd).unwrap(), face_map(&c, a, d).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn compose_rejects_mismatched_chains() {
        let a = BoundedMonotoneMap::new(4, 3, vec![0, 0, 1, 2]).unwrap();
        let b = BoundedMonotoneMap::new(2, 2, vec![0, 1]).unwrap();
        assert!(matches!(compose_maps(&a, &b), Err(Error::PosetMismatch)));
    }

    #[test]
    fn covering_relations_merge_one_adjacent_pair() {
        // Without augmentation, a covering face merges exactly two
        // consecutive blocks of the cell's order.
        for gc in [v_complex(), book_complex()] {
            let c = cellulation_of(&gc);
            for &(face_idx, cell_idx) in c.covering() {
                let face = c.cell(face_idx).unwrap();
                let cell = c.cell(cell_idx).unwrap();
                assert_eq!(cell.dim, face.dim + 1);
                let fb = face.partition.blocks();
                let cb = cell.partition.blocks();
                assert_eq!(fb.len(), cb.len() - 1);
                let split = (0..fb.len())
                    .find(|&i| {
                        let mut merged = cb[i].clone();
                        merged.extend_from_slice(&cb[i + 1]);
                        merged.sort_unstable();
                        fb[..i] == cb[..i] && fb[i] == merged && fb[i + 1..] == cb[i + 2..]
                    })
                    .is_some();
                assert!(split, "{} below {}", face.sign, cell.sign);
            }
        }
    }
}
