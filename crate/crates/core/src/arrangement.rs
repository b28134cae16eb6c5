//! The great-sphere arrangement of an embedded complex and its cellulation.
//!
//! Every vertex pair e = (v_i, v_j), i < j, contributes the normal
//! phi(v_j) - phi(v_i); directions on the same side of every such
//! hyperplane order the vertices by height the same way. A cell of the
//! sphere is the set of directions sharing one realizable sign vector.
//! When the normals fail to span the ambient space the arrangement misses
//! being a cell structure on the sphere; adding one great sphere per
//! missing rank (a kernel basis) repairs it, and those augmentation
//! normals get trailing sign entries of their own.
//!
//! Realizability of a candidate sign pattern is decided exactly: the zero
//! entries form a linear subspace, the kernel of their normals
//! parametrizes it, and the strict entries become a homogeneous strict
//! system solved by Fourier-Motzkin after normalizing `> 0` to `>= 1`.

use crate::complex::{Direction, GeometricComplex};
use crate::feasibility::{feasible_point, Inequality};
use crate::rational::{dot, primitive_direction, rat, sign_of, vec_sub, Rational};
use crate::{linalg, Error, Result};
use std::collections::BTreeMap;

/// Sign of one inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: &Rational) -> Sign {
        match sign_of(x) {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => Sign::Zero,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn from_char(c: char) -> Result<Sign> {
        match c {
            '-' => Ok(Sign::Neg),
            '0' => Ok(Sign::Zero),
            '+' => Ok(Sign::Pos),
            _ => Err(Error::BadTransformFile(format!("sign character {c:?}"))),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
            Sign::Zero => Sign::Zero,
        }
    }

    /// Specialization order on single signs: zero below both strict signs,
    /// strict signs only below themselves.
    pub fn face_leq(self, other: Sign) -> bool {
        self == Sign::Zero || self == other
    }
}

/// Sign entries for every vertex pair in lex order, then one entry per
/// augmentation normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise specialization order; `self` is a face of `other` when
    /// every entry of `self` is zero or agrees with `other`.
    pub fn face_leq(&self, other: &SignVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.face_leq(*b))
    }

    /// Sign vector of the opposite direction.
    pub fn antipode(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| s.flip()).collect())
    }

    pub fn parse(text: &str) -> Result<SignVector> {
        text.chars()
            .map(Sign::from_char)
            .collect::<Result<_>>()
            .map(SignVector)
    }
}

impl std::fmt::Display for SignVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// The index of an arrangement: vertex pairs in lex order plus any
/// augmentation normals appended to make the arrangement essential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    pairs: Vec<(usize, usize)>,
    augmentation: Vec<Vec<Rational>>,
}

impl PairSet {
    /// Pairs of the embedding's vertex set, no augmentation.
    pub fn new(gc: &GeometricComplex) -> Self {
        let vs = gc.vertices();
        let mut pairs = Vec::new();
        for (a, &u) in vs.iter().enumerate() {
            for &w in &vs[a + 1..] {
                pairs.push((u, w));
            }
        }
        PairSet {
            pairs,
            augmentation: Vec::new(),
        }
    }

    /// Pairs plus the augmentation normals needed for essentiality.
    pub fn augmented(gc: &GeometricComplex) -> Result<Self> {
        let mut ps = PairSet::new(gc);
        ps.augmentation = augment(gc)?;
        Ok(ps)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn augmentation(&self) -> &[Vec<Rational>] {
        &self.augmentation
    }

    /// Total number of sign entries: pairs first, augmentation last.
    pub fn sign_len(&self) -> usize {
        self.pairs.len() + self.augmentation.len()
    }
}

/// Normal of one pair: coordinates of the later vertex minus the earlier.
pub fn pair_normal(gc: &GeometricComplex, e: (usize, usize)) -> Result<Vec<Rational>> {
    Ok(vec_sub(gc.coords(e.1)?, gc.coords(e.0)?))
}

/// All pair normals keyed by pair, in lex order.
pub fn normals(gc: &GeometricComplex) -> BTreeMap<(usize, usize), Vec<Rational>> {
    PairSet::new(gc)
        .pairs
        .iter()
        .map(|&e| {
            (
                e,
                pair_normal(gc, e).expect("pairs come from the vertex set"),
            )
        })
        .collect()
}

fn pair_normal_rows(gc: &GeometricComplex) -> Vec<Vec<Rational>> {
    normals(gc).into_values().collect()
}

/// Rank defect of the pair normals: `N - rank` in ambient dimension
/// `N + 1`. Negative exactly when the arrangement is essential.
pub fn essential_defect(gc: &GeometricComplex) -> i64 {
    let n = gc.ambient_dim() as i64 - 1;
    n - linalg::rank(&pair_normal_rows(gc)) as i64
}

/// Basis of the orthogonal complement of the pair normals' span: the
/// `k + 1` extra great-sphere normals that make a defect-`k` arrangement
/// essential. Rejects arrangements that are already essential.
pub fn augment(gc: &GeometricComplex) -> Result<Vec<Vec<Rational>>> {
    if essential_defect(gc) < 0 {
        return Err(Error::AlreadyEssential);
    }
    Ok(linalg::kernel_basis(
        &pair_normal_rows(gc),
        gc.ambient_dim(),
    ))
}

/// Sign vector of a direction: one entry per pair, then one per
/// augmentation normal.
pub fn sign_vector(gc: &GeometricComplex, pairs: &PairSet, mu: &Direction) -> Result<SignVector> {
    if mu.dim() != gc.ambient_dim() {
        return Err(Error::DirectionLength(mu.dim(), gc.ambient_dim()));
    }
    let mut signs = Vec::with_capacity(pairs.sign_len());
    for &e in &pairs.pairs {
        signs.push(Sign::of(&dot(mu.coords(), &pair_normal(gc, e)?)));
    }
    for w in &pairs.augmentation {
        signs.push(Sign::of(&dot(mu.coords(), w)));
    }
    Ok(SignVector(signs))
}

/// Vertex blocks listed from lowest to highest height.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// Blocks must be nonempty and pairwise disjoint; vertex order inside
    /// a block is normalized.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        if blocks.is_empty() {
            return Err(Error::MalformedPartition);
        }
        let mut normalized = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::MalformedPartition);
            }
            let mut b = block;
            b.sort_unstable();
            for &v in &b {
                if !seen.insert(v) {
                    return Err(Error::MalformedPartition);
                }
            }
            normalized.push(b);
        }
        Ok(OrderedPartition { blocks: normalized })
    }

    /// Groups the vertices of `gc` by exact height under `mu`, lowest
    /// block first.
    pub fn from_heights(gc: &GeometricComplex, mu: &Direction) -> Result<Self> {
        let mut by_height: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for v in gc.vertices() {
            by_height
                .entry(crate::complex::height(gc, mu, v)?)
                .or_default()
                .push(v);
        }
        OrderedPartition::new(by_height.into_values().collect())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: usize) -> Result<usize> {
        self.blocks
            .iter()
            .position(|b| b.contains(&v))
            .ok_or(Error::UnknownVertex(v))
    }

    fn covers_exactly(&self, vertices: &[usize]) -> bool {
        let mut all: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        all == vertices
    }

    /// Pair signs this partition demands: 0 for a tie, + when the later
    /// pair vertex sits in a later block.
    fn pair_signs(&self, pairs: &PairSet) -> Result<Vec<Sign>> {
        pairs
            .pairs
            .iter()
            .map(|&(i, j)| {
                let (bi, bj) = (self.block_of(i)?, self.block_of(j)?);
                Ok(match bj.cmp(&bi) {
                    std::cmp::Ordering::Less => Sign::Neg,
                    std::cmp::Ordering::Equal => Sign::Zero,
                    std::cmp::Ordering::Greater => Sign::Pos,
                })
            })
            .collect()
    }
}

/// Every ordered set partition of `vertices`: each set partition in
/// restricted-growth order, each block arrangement in lexicographic
/// permutation order. The count over all of them is the Fubini number.
pub fn ordered_partitions(vertices: &[usize]) -> Vec<OrderedPartition> {
    use itertools::Itertools;
    let n = vertices.len();
    let mut rgs_list: Vec<Vec<usize>> = Vec::new();
    fn grow(prefix: &mut Vec<usize>, used: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for block in 0..=used {
            prefix.push(block);
            grow(prefix, used.max(block + 1), n, out);
            prefix.pop();
        }
    }
    if n > 0 {
        grow(&mut Vec::new(), 0, n, &mut rgs_list);
    }
    let mut result = Vec::new();
    for rgs in rgs_list {
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(vertices[i]);
        }
        for perm in (0..k).permutations(k) {
            let ordered: Vec<Vec<usize>> = perm.iter().map(|&b| blocks[b].clone()).collect();
            result.push(OrderedPartition::new(ordered).expect("blocks partition the vertex set"));
        }
    }
    result
}

/// Decides whether some direction realizes the partition's height order
/// together with the demanded augmentation signs, returning a witness
/// direction if so.
///
/// Ties and zero-pattern entries form the equality system; its kernel
/// parametrizes the candidate directions, and the strict entries become a
/// feasibility problem in the kernel coordinates.
pub fn realizable(
    gc: &GeometricComplex,
    pairs: &PairSet,
    partition: &OrderedPartition,
    aug_pattern: &[Sign],
) -> Result<Option<Direction>> {
    if aug_pattern.len() != pairs.augmentation.len() {
        return Err(Error::PatternLength(
            aug_pattern.len(),
            pairs.augmentation.len(),
        ));
    }
    if !partition.covers_exactly(&gc.vertices()) {
        return Err(Error::MalformedPartition);
    }

    let mut equalities: Vec<Vec<Rational>> = Vec::new();
    for block in &partition.blocks {
        let base = gc.coords(block[0])?;
        for &v in &block[1..] {
            equalities.push(vec_sub(gc.coords(v)?, base));
        }
    }
    let mut stricts: Vec<Vec<Rational>> = Vec::new();
    for pair in partition.blocks.windows(2) {
        stricts.push(vec_sub(gc.coords(pair[1][0])?, gc.coords(pair[0][0])?));
    }
    for (w, &s) in pairs.augmentation.iter().zip(aug_pattern) {
        match s {
            Sign::Zero => equalities.push(w.clone()),
            Sign::Pos => stricts.push(w.clone()),
            Sign::Neg => stricts.push(w.iter().map(|x| -x).collect()),
        }
    }

    let kernel = linalg::kernel_basis(&equalities, gc.ambient_dim());
    if kernel.is_empty() {
        return Ok(None);
    }
    if stricts.is_empty() {
        // No strict demands; any nonzero direction of the kernel works.
        let mu = Direction::new(primitive_direction(&kernel[0]))?;
        return Ok(Some(mu));
    }
    let rows: Vec<Inequality> = stricts
        .iter()
        .map(|s| Inequality::new(kernel.iter().map(|w| dot(s, w)).collect(), rat(1)))
        .collect();
    let Some(y) = feasible_point(&rows, kernel.len()) else {
        return Ok(None);
    };
    let mut mu = vec![Rational::from_integer(0.into()); gc.ambient_dim()];
    for (coef, w) in y.iter().zip(&kernel) {
        for (m, x) in mu.iter_mut().zip(w) {
            *m += coef * x;
        }
    }
    let witness = Direction::new(primitive_direction(&mu))?;
    Ok(Some(witness))
}

/// One cell of the sphere: a realizable sign vector, the height order it
/// encodes, its dimension in the sphere, and a witness direction interior
/// to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub sign: SignVector,
    pub partition: OrderedPartition,
    pub dim: usize,
    pub witness: Direction,
}

impl Cell {
    /// Trailing augmentation signs of the cell, if any.
    pub fn aug_signs<'a>(&'a self, pairs: &PairSet) -> &'a [Sign] {
        &self.sign.signs()[pairs.pairs.len()..]
    }
}

/// The full cell structure of the sphere of directions.
#[derive(Debug, Clone)]
pub struct Cellulation {
    pairs: PairSet,
    cells: Vec<Cell>,
    covering: Vec<(usize, usize)>,
    sign_index: BTreeMap<String, usize>,
}

impl Cellulation {
    pub fn pairs(&self) -> &PairSet {
        &self.pairs
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, idx: usize) -> Result<&Cell> {
        self.cells.get(idx).ok_or(Error::UnknownCell(idx))
    }

    /// Covering pairs `(face, cell)` of the face order, lex sorted.
    pub fn covering(&self) -> &[(usize, usize)] {
        &self.covering
    }

    pub fn index_of_sign(&self, sign: &SignVector) -> Result<usize> {
        self.sign_index
            .get(&sign.to_string())
            .copied()
            .ok_or_else(|| Error::UnknownSignVector(sign.to_string()))
    }

    /// Face order on cell indices.
    pub fn face_leq(&self, a: usize, b: usize) -> Result<bool> {
        Ok(self.cell(a)?.sign.face_leq(&self.cell(b)?.sign))
    }

    pub fn counts_by_dim(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.cells {
            *counts.entry(c.dim).or_insert(0) += 1;
        }
        counts
    }

    /// Alternating cell count; always `1 + (-1)^N` for a cellulated
    /// N-sphere.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Assembles a cellulation from already-validated parts; used by the
    /// transform file reader. Cells must be sorted by sign string.
    pub(crate) fn from_parts(
        pairs: PairSet,
        cells: Vec<Cell>,
        covering: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut sign_index = BTreeMap::new();
        for (i, c) in cells.iter().enumerate() {
            if sign_index.insert(c.sign.to_string(), i).is_some() {
                return Err(Error::BadTransformFile(format!(
                    "duplicate cell sign {}",
                    c.sign
                )));
            }
        }
        Ok(Cellulation {
            pairs,
            cells,
            covering,
            sign_index,
        })
    }
}

/// Enumerates every cell of the sphere for an essential arrangement by
/// testing all ordered set partitions of the vertex set (and, when
/// augmentation normals are present, all sign patterns for them) for
/// realizability. Rejects non-essential input with the defect.
pub fn enumerate_cells(gc: &GeometricComplex, pairs: &PairSet) -> Result<Cellulation> {
    use itertools::Itertools;

    let mut span_rows = pair_normal_rows(gc);
    span_rows.extend(pairs.augmentation.iter().cloned());
    if linalg::rank(&span_rows) < gc.ambient_dim() {
        let defect = essential_defect(gc);
        debug_assert!(defect >= 0);
        return Err(Error::NotEssential {
            defect: defect as usize,
        });
    }

    let patterns: Vec<Vec<Sign>> = if pairs.augmentation.is_empty() {
        vec![Vec::new()]
    } else {
        (0..pairs.augmentation.len())
            .map(|_| [Sign::Neg, Sign::Zero, Sign::Pos])
            .multi_cartesian_product()
            .collect()
    };

    let mut cells = Vec::new();
    for partition in ordered_partitions(&gc.vertices()) {
        let pair_signs = partition.pair_signs(pairs)?;
        for pattern in &patterns {
            let Some(witness) = realizable(gc, pairs, &partition, pattern)? else {
                continue;
            };
            let mut signs = pair_signs.clone();
            signs.extend_from_slice(pattern);
            let sign = SignVector(signs);
            debug_assert_eq!(sign_vector(gc, pairs, &witness)?, sign);
            let dim = cell_dimension(gc, pairs, &sign)?;
            cells.push(Cell {
                sign,
                partition: partition.clone(),
                dim,
                witness,
            });
        }
    }

    cells.sort_by_key(|c| c.sign.to_string());
    let mut sign_index = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        let previous = sign_index.insert(c.sign.to_string(), i);
        debug_assert!(previous.is_none(), "sign vectors identify cells");
    }

    let covering = covering_relation(&cells);

    let cellulation = Cellulation {
        pairs: pairs.clone(),
        cells,
        covering,
        sign_index,
    };
    debug_assert_eq!(
        cellulation.euler_characteristic(),
        1 + if (gc.ambient_dim() - 1) % 2 == 0 {
            1
        } else {
            -1
        }
    );
    Ok(cellulation)
}

/// Cell dimension inside the sphere: the zero entries of the sign vector
/// cut the ambient space down to a linear subspace; subtract one more for
/// projectivizing to the sphere.
pub(crate) fn cell_dimension(
    gc: &GeometricComplex,
    pairs: &PairSet,
    sign: &SignVector,
) -> Result<usize> {
    let mut zero_rows: Vec<Vec<Rational>> = Vec::new();
    for (&e, s) in pairs.pairs.iter().zip(sign.signs()) {
        if *s == Sign::Zero {
            zero_rows.push(pair_normal(gc, e)?);
        }
    }
    for (w, s) in pairs
        .augmentation
        .iter()
        .zip(&sign.signs()[pairs.pairs.len()..])
    {
        if *s == Sign::Zero {
            zero_rows.push(w.clone());
        }
    }
    let nullity = gc.ambient_dim() - linalg::rank(&zero_rows);
    debug_assert!(nullity >= 1);
    Ok(nullity - 1)
}

/// Covering pairs of the face order: related, distinct, nothing strictly
/// between. Lex sorted by index pair.
pub(crate) fn covering_relation(cells: &[Cell]) -> Vec<(usize, usize)> {
    let mut covering = Vec::new();
    for a in 0..cells.len() {
        for b in 0..cells.len() {
            if a == b || !cells[a].sign.face_leq(&cells[b].sign) {
                continue;
            }
            let has_middle = (0..cells.len()).any(|m| {
                m != a
                    && m != b
                    && cells[a].sign.face_leq(&cells[m].sign)
                    && cells[m].sign.face_leq(&cells[b].sign)
            });
            if !has_middle {
                covering.push((a, b));
            }
        }
    }
    covering
}

/// Cell containing a direction, by sign vector lookup.
pub fn cell_of<'a>(
    cellulation: &'a Cellulation,
    gc: &GeometricComplex,
    mu: &Direction,
) -> Result<&'a Cell> {
    let sign = sign_vector(gc, cellulation.pairs(), mu)?;
    let idx = cellulation.index_of_sign(&sign)?;
    cellulation.cell(idx)
}
