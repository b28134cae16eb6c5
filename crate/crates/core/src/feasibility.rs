//! Exact feasibility for systems of linear inequalities `<a, y> >= b`.
//!
//! Strict homogeneous systems `<a, y> > 0` are decided by solving
//! `<a, y> >= 1` instead: a strict solution scales to one of the
//! normalized system, and any solution of the latter is strict. Variables
//! are eliminated by Fourier-Motzkin with rows kept in primitive integer
//! form so duplicates and dominated rows can be pruned; a witness is then
//! rebuilt by back substitution, picking midpoints of the surviving
//! bound intervals.

use crate::rational::{dot, primitive_direction, rat, Rational};
use num::{Signed, Zero};

/// One inequality `<coeffs, y> >= bound`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
}

impl Inequality {
    pub fn new(coeffs: Vec<Rational>, bound: Rational) -> Self {
        Inequality { coeffs, bound }
    }

    /// Positive rescaling to integer entries with gcd 1. Preserves the
    /// solution set and makes syntactic duplicates canonical.
    fn primitive(&self) -> Inequality {
        let mut all = self.coeffs.clone();
        all.push(self.bound.clone());
        let prim = primitive_direction(&all);
        let (bound, coeffs) = prim.split_last().unwrap();
        Inequality {
            coeffs: coeffs.to_vec(),
            bound: bound.clone(),
        }
    }

    fn satisfied_by(&self, y: &[Rational]) -> bool {
        dot(&self.coeffs, y) >= self.bound
    }
}

/// Drops rows implied by another row with the same coefficient vector and a
/// weaker bound, removes tautologies, and detects constant contradictions.
/// Returns None when a row `0 >= b` with `b > 0` survives.
fn prune(rows: Vec<Inequality>) -> Option<Vec<Inequality>> {
    use std::collections::BTreeMap;
    let mut strongest: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for row in rows {
        let row = row.primitive();
        if row.coeffs.iter().all(Rational::is_zero) {
            if row.bound.is_positive() {
                return None;
            }
            continue;
        }
        strongest
            .entry(row.coeffs)
            .and_modify(|b| {
                if row.bound > *b {
                    *b = row.bound.clone();
                }
            })
            .or_insert(row.bound);
    }
    Some(
        strongest
            .into_iter()
            .map(|(coeffs, bound)| Inequality { coeffs, bound })
            .collect(),
    )
}

/// Decides `A y >= b` over `nvars` rational unknowns, returning a witness
/// when the system is feasible.
pub fn feasible_point(rows: &[Inequality], nvars: usize) -> Option<Vec<Rational>> {
    debug_assert!(rows.iter().all(|r| r.coeffs.len() == nvars));
    // Eliminate the last variable first, remembering each level's bounding
    // rows for back substitution.
    let mut levels: Vec<Vec<Inequality>> = Vec::new();
    let mut current = prune(rows.to_vec())?;
    for var in (0..nvars).rev() {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut kept = Vec::new();
        for row in &current {
            match crate::rational::sign_of(&row.coeffs[var]) {
                1 => lower.push(row.clone()),
                -1 => upper.push(row.clone()),
                _ => kept.push(row.clone()),
            }
        }
        for lo in &lower {
            for hi in &upper {
                // Positive combination cancelling the eliminated variable.
                let cl = lo.coeffs[var].clone();
                let cu = hi.coeffs[var].clone();
                let coeffs: Vec<Rational> = (0..var)
                    .map(|j| &lo.coeffs[j] * -&cu + &hi.coeffs[j] * &cl)
                    .collect();
                let bound = &lo.bound * -&cu + &hi.bound * &cl;
                kept.push(Inequality { coeffs, bound });
            }
        }
        let mut shortened = kept;
        for row in &mut shortened {
            row.coeffs.truncate(var);
        }
        levels.push(lower.into_iter().chain(upper).collect::<Vec<_>>());
        current = prune(shortened)?;
    }
    // No variables left: pruning already rejected positive constants.
    debug_assert!(current.is_empty());

    let mut y: Vec<Rational> = Vec::new();
    for var in 0..nvars {
        let bounds = &levels[nvars - 1 - var];
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for row in bounds {
            let rest = dot(&row.coeffs[..var], &y);
            let value = (&row.bound - rest) / &row.coeffs[var];
            if row.coeffs[var].is_positive() {
                if lo.as_ref().is_none_or(|l| value > *l) {
                    lo = Some(value);
                }
            } else if hi.as_ref().is_none_or(|h| value < *h) {
                hi = Some(value);
            }
        }
        let pick = match (lo, hi) {
            (Some(l), Some(h)) => {
                debug_assert!(l <= h, "elimination left an empty interval");
                (l + h) / rat(2)
            }
            (Some(l), None) => l,
            (None, Some(h)) => h,
            (None, None) => Rational::zero(),
        };
        y.push(pick);
    }
    debug_assert!(rows.iter().all(|r| r.satisfied_by(&y)));
    Some(y)
}
