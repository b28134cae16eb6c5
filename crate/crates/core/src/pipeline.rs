//! Persistence diagrams as integral functions on interval posets.
//!
//! For a filtration F over a chain P, the birth-death function assigns to
//! an interval [a, b] the dimension of the space of d-cycles of F(a) that
//! bound in F(b); intervals ending at the formal top instead count all
//! d-cycles of F(a), making essential classes visible. The persistence
//! diagram is the Moebius inversion of that function over the interval
//! poset Int(P), an integral charge per interval. Pushing charges along
//! the map induced by a bounded monotone map of chains sums them over
//! preimage intervals; exact preservation of that rule is what the engine
//! verifies transform-wide.
//!
//! Homology is plain simplicial homology with coefficients in GF(p),
//! dimension counts only, never reduced.

use crate::complex::SimplicialComplex;
use crate::filtration::{BoundedMonotoneMap, Filtration};
use crate::{gf, Error, Result};
use std::collections::BTreeMap;

/// An interval `[lo, hi]` of a chain, as element indices with `lo <= hi`.
pub type Interval = (usize, usize);

/// Prime field order for homology coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldConfig {
    p: u64,
}

impl FieldConfig {
    pub fn new(p: u64) -> Result<Self> {
        if !gf::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(Error::FieldTooLarge(p));
        }
        Ok(FieldConfig { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { p: 2 }
    }
}

/// All intervals of a chain of `chain_len` elements, ordered
/// lexicographically; `[a, b] <= [c, d]` iff `a <= c` and `b <= d`. The
/// lex order is a linear extension of that partial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPoset {
    chain_len: usize,
    intervals: Vec<Interval>,
}

impl IntervalPoset {
    pub fn new(chain_len: usize) -> Result<Self> {
        if chain_len == 0 {
            return Err(Error::EmptyChain);
        }
        let mut intervals = Vec::with_capacity(chain_len * (chain_len + 1) / 2);
        for lo in 0..chain_len {
            for hi in lo..chain_len {
                intervals.push((lo, hi));
            }
        }
        Ok(IntervalPoset {
            chain_len,
            intervals,
        })
    }

    pub fn chain_len(&self) -> usize {
        self.chain_len
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Componentwise order on intervals.
    pub fn leq(i: Interval, j: Interval) -> bool {
        i.0 <= j.0 && i.1 <= j.1
    }

    /// Covering pairs of the interval order: one endpoint steps by one.
    pub fn covering_pairs(&self) -> Vec<(Interval, Interval)> {
        let mut pairs = Vec::new();
        for &(lo, hi) in &self.intervals {
            if lo + 1 <= hi {
                pairs.push(((lo, hi), (lo + 1, hi)));
            }
            if hi + 1 < self.chain_len {
                pairs.push(((lo, hi), (lo, hi + 1)));
            }
        }
        pairs.sort_unstable();
        pairs
    }
}

/// Interval poset of a chain with `chain_len` elements.
pub fn interval_poset(chain_len: usize) -> Result<IntervalPoset> {
    IntervalPoset::new(chain_len)
}

/// The map `Int(P) -> Int(Q)` induced endpointwise by a bounded monotone
/// map of chains, keyed by source interval.
pub fn induced_interval_map(alpha: &BoundedMonotoneMap) -> BTreeMap<Interval, Interval> {
    let poset = IntervalPoset::new(alpha.source_len()).expect("chains are nonempty");
    poset
        .intervals()
        .iter()
        .map(|&(lo, hi)| ((lo, hi), (alpha.apply(lo), alpha.apply(hi))))
        .collect()
}

/// Monotone integer-valued function on the interval poset of a chain,
/// stored densely in lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneIntegralFunction {
    poset: IntervalPoset,
    values: Vec<i64>,
}

impl MonotoneIntegralFunction {
    /// Validates length and monotonicity against the interval order.
    pub fn new(chain_len: usize, values: Vec<i64>) -> Result<Self> {
        let poset = IntervalPoset::new(chain_len)?;
        if values.len() != poset.len() {
            return Err(Error::PosetMismatch);
        }
        for (a, &i) in poset.intervals().iter().enumerate() {
            for (b, &j) in poset.intervals().iter().enumerate() {
                if IntervalPoset::leq(i, j) && values[a] > values[b] {
                    return Err(Error::NotBoundedMonotone);
                }
            }
        }
        Ok(MonotoneIntegralFunction { poset, values })
    }

    pub fn poset(&self) -> &IntervalPoset {
        &self.poset
    }

    pub fn chain_len(&self) -> usize {
        self.poset.chain_len
    }

    pub fn value(&self, interval: Interval) -> i64 {
        let idx = self
            .poset
            .intervals()
            .binary_search(&interval)
            .expect("interval of the chain");
        self.values[idx]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

/// Finitely supported integer charge function on the interval poset of a
/// chain. Zero charges are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralFunction {
    chain_len: usize,
    charges: BTreeMap<Interval, i64>,
}

impl IntegralFunction {
    pub fn new(chain_len: usize, charges: BTreeMap<Interval, i64>) -> Result<Self> {
        if chain_len == 0 {
            return Err(Error::EmptyChain);
        }
        for (&(lo, hi), _) in &charges {
            if lo > hi || hi >= chain_len {
                return Err(Error::PosetMismatch);
            }
        }
        let charges = charges.into_iter().filter(|&(_, c)| c != 0).collect();
        Ok(IntegralFunction { chain_len, charges })
    }

    pub fn zero(chain_len: usize) -> Result<Self> {
        IntegralFunction::new(chain_len, BTreeMap::new())
    }

    pub fn chain_len(&self) -> usize {
        self.chain_len
    }

    pub fn charge(&self, interval: Interval) -> i64 {
        self.charges.get(&interval).copied().unwrap_or(0)
    }

    /// Charged intervals in lex order with their charges.
    pub fn support(&self) -> impl Iterator<Item = (Interval, i64)> + '_ {
        self.charges.iter().map(|(&i, &c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.charges.is_empty()
    }

    /// Downset sums: the value at J of summing charges over all I <= J.
    /// Inverse to Moebius inversion, in lex order over the poset.
    pub fn downset_sums(&self) -> Vec<i64> {
        let poset = IntervalPoset::new(self.chain_len).expect("chain_len >= 1");
        poset
            .intervals()
            .iter()
            .map(|&j| {
                self.charges
                    .iter()
                    .filter(|(&i, _)| IntervalPoset::leq(i, j))
                    .map(|(_, &c)| c)
                    .sum()
            })
            .collect()
    }
}

/// Builds the GF(p) boundary matrix rows of a complex in dimension `d`:
/// one column per d-simplex of `sub`, one row per (d-1)-simplex of `sub`.
fn boundary_rows(sub: &SimplicialComplex, d: usize, p: u64) -> Vec<Vec<u64>> {
    if d == 0 {
        return Vec::new();
    }
    let cols = sub.simplices_of_dim(d);
    let rows_ix: BTreeMap<&Vec<usize>, usize> = sub
        .simplices_of_dim(d - 1)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let mut rows = vec![vec![0u64; cols.len()]; rows_ix.len()];
    for (c, simplex) in cols.iter().enumerate() {
        for drop in 0..simplex.len() {
            let mut face = (*simplex).clone();
            face.remove(drop);
            let r = rows_ix[&face];
            let coefficient = if drop % 2 == 0 { 1 } else { p - 1 };
            rows[r][c] = (rows[r][c] + coefficient) % p;
        }
    }
    rows
}

/// Dimension of the space of d-cycles of `k` over GF(p). For d = 0 the
/// boundary map is zero, so this is the vertex count.
pub fn cycle_space_dim(k: &SimplicialComplex, d: usize, field: FieldConfig) -> usize {
    let n = k.simplices_of_dim(d).len();
    n - gf::rank_mod(&boundary_rows(k, d, field.p()), field.p())
}

/// Cycle and boundary data of one filtration stage, in the coordinates of
/// the top stage's d-simplices.
struct StageSpaces {
    cycle_basis: Vec<Vec<u64>>,
    boundary_span: Vec<Vec<u64>>,
    boundary_rank: usize,
}

fn stage_spaces(f: &Filtration, d: usize, p: u64) -> Vec<StageSpaces> {
    let ambient = f.stage(f.poset().top());
    let ambient_cols: BTreeMap<&Vec<usize>, usize> = ambient
        .simplices_of_dim(d)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let ambient_len = ambient_cols.len();

    let embed = |local_cols: &[&Vec<usize>], v: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; ambient_len];
        for (i, s) in local_cols.iter().enumerate() {
            out[ambient_cols[*s]] = v[i];
        }
        out
    };

    (0..f.len())
        .map(|stage_ix| {
            let stage = f.stage(stage_ix);
            let local_cols = stage.simplices_of_dim(d);
            let kernel = gf::kernel_basis_mod(&boundary_rows(stage, d, p), local_cols.len(), p);
            let cycle_basis: Vec<Vec<u64>> = kernel.iter().map(|v| embed(&local_cols, v)).collect();

            // Boundaries of the stage's (d+1)-simplices, spanning B_d.
            let mut boundary_span = Vec::new();
            for simplex in stage.simplices_of_dim(d + 1) {
                let mut chain = vec![0u64; ambient_len];
                for drop in 0..simplex.len() {
                    let mut face = simplex.clone();
                    face.remove(drop);
                    let col = ambient_cols[&face];
                    let coefficient = if drop % 2 == 0 { 1 } else { p - 1 };
                    chain[col] = (chain[col] + coefficient) % p;
                }
                boundary_span.push(chain);
            }
            let boundary_rank = gf::rank_mod(&boundary_span, p);
            StageSpaces {
                cycle_basis,
                boundary_span,
                boundary_rank,
            }
        })
        .collect()
}

/// Birth-death function of a filtration in homological dimension `d`: at
/// `[a, b]` with `b` below the top, the dimension of the d-cycles of the
/// stage at `a` that bound in the stage at `b`; at `[a, top]`, all
/// d-cycles of the stage at `a`.
pub fn birth_death(f: &Filtration, d: usize, field: FieldConfig) -> MonotoneIntegralFunction {
    let p = field.p();
    let top = f.poset().top();
    let spaces = stage_spaces(f, d, p);
    let poset = IntervalPoset::new(f.len()).expect("stage chains are nonempty");
    let values: Vec<i64> = poset
        .intervals()
        .iter()
        .map(|&(a, b)| {
            let z = spaces[a].cycle_basis.len();
            if b == top {
                z as i64
            } else {
                // dim(Z ^ B) = dim Z + dim B - dim(Z + B), all inside the
                // chain group of the top stage.
                let mut stacked = spaces[a].cycle_basis.clone();
                stacked.extend(spaces[b].boundary_span.iter().cloned());
                let sum_rank = gf::rank_mod(&stacked, p);
                (z + spaces[b].boundary_rank - sum_rank) as i64
            }
        })
        .collect();
    MonotoneIntegralFunction::new(f.len(), values)
        .expect("birth-death functions are monotone by inclusion of spaces")
}

/// Moebius inversion over the interval poset: the unique charge function
/// whose downset sums reproduce `f`.
pub fn mobius_invert(f: &MonotoneIntegralFunction) -> IntegralFunction {
    let poset = f.poset();
    let intervals = poset.intervals();
    let mut sigma: Vec<i64> = Vec::with_capacity(intervals.len());
    for (jx, &j) in intervals.iter().enumerate() {
        // Lex order is a linear extension, so every I < J is already done.
        let below: i64 = intervals[..jx]
            .iter()
            .enumerate()
            .filter(|&(_, &i)| IntervalPoset::leq(i, j))
            .map(|(ix, _)| sigma[ix])
            .sum();
        sigma.push(f.values()[jx] - below);
    }
    let charges = intervals
        .iter()
        .zip(&sigma)
        .filter(|&(_, &c)| c != 0)
        .map(|(&i, &c)| (i, c))
        .collect();
    IntegralFunction::new(f.chain_len(), charges).expect("intervals come from the poset")
}

/// Pushforward of charges along the induced interval map: every source
/// charge lands on the image interval, summing where images collide.
pub fn push_charges(f: &IntegralFunction, alpha: &BoundedMonotoneMap) -> Result<IntegralFunction> {
    if alpha.source_len() != f.chain_len() {
        return Err(Error::PosetMismatch);
    }
    let mut charges: BTreeMap<Interval, i64> = BTreeMap::new();
    for ((lo, hi), c) in f.support() {
        let image = (alpha.apply(lo), alpha.apply(hi));
        *charges.entry(image).or_insert(0) += c;
    }
    IntegralFunction::new(alpha.target_len(), charges)
}

/// Whether `tau` is exactly the pushforward of `sigma` along `alpha`.
pub fn is_charge_preserving(
    sigma: &IntegralFunction,
    tau: &IntegralFunction,
    alpha: &BoundedMonotoneMap,
) -> Result<bool> {
    if tau.chain_len() != alpha.target_len() {
        return Err(Error::PosetMismatch);
    }
    Ok(&push_charges(sigma, alpha)? == tau)
}

/// Whether `g` is the transport of `f` along `alpha` in the stage-exact
/// sense: `g[a, b] = f[a*, b*]` with starred endpoints the largest source
/// elements mapping at or below the targets.
pub fn is_monotone_preserving(
    f: &MonotoneIntegralFunction,
    g: &MonotoneIntegralFunction,
    alpha: &BoundedMonotoneMap,
) -> Result<bool> {
    if alpha.source_len() != f.chain_len() || alpha.target_len() != g.chain_len() {
        return Err(Error::PosetMismatch);
    }
    Ok(g.poset()
        .intervals()
        .iter()
        .all(|&(a, b)| g.value((a, b)) == f.value((alpha.pullback_max(a), alpha.pullback_max(b)))))
}

/// Persistence diagram of a filtration in dimension `d`: the Moebius
/// inversion of its birth-death function.
pub fn persistent_homology(f: &Filtration, d: usize, field: FieldConfig) -> IntegralFunction {
    mobius_invert(&birth_death(f, d, field))
}

/// Sum of all charges.
pub fn total_charge(f: &IntegralFunction) -> i64 {
    f.support().map(|(_, c)| c).sum()
}
