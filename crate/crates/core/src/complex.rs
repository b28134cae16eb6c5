//! Simplicial complexes, their embeddings, and direction vectors.
//!
//! A complex is a finite set of sorted vertex lists closed under taking
//! faces. An embedding assigns exact rational coordinates to each vertex;
//! vertices must land on distinct points, but simplices may otherwise
//! degenerate (collinear triangles are legal input, the arrangement layer
//! copes by augmentation).

use crate::rational::{dot, vec_sub, Rational};
use crate::{linalg, Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Finite abstract simplicial complex. Every simplex is a sorted, duplicate
/// free vertex list; faces of members are members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Complex with no simplices.
    pub fn empty() -> Self {
        SimplicialComplex {
            simplices: BTreeSet::new(),
        }
    }

    /// All simplices in canonical (sorted list, lexicographic) order.
    pub fn simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter()
    }

    /// Simplices with exactly `d + 1` vertices, canonical order.
    pub fn simplices_of_dim(&self, d: usize) -> Vec<&Vec<usize>> {
        self.simplices.iter().filter(|s| s.len() == d + 1).collect()
    }

    /// Sorted vertex set.
    pub fn vertices(&self) -> Vec<usize> {
        self.simplices
            .iter()
            .filter(|s| s.len() == 1)
            .map(|s| s[0])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Largest simplex dimension, or None when empty.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.simplices.contains(simplex)
    }

    /// Simplices not strictly contained in another member. Regenerating the
    /// closure from these returns the same complex.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .cloned()
            .collect()
    }

    /// Subcomplex of the simplices whose vertices all satisfy `keep`.
    pub fn full_subcomplex(&self, keep: impl Fn(usize) -> bool) -> SimplicialComplex {
        SimplicialComplex {
            simplices: self
                .simplices
                .iter()
                .filter(|s| s.iter().all(|&v| keep(v)))
                .cloned()
                .collect(),
        }
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.is_subset(&other.simplices)
    }
}

/// Downward closure of a list of maximal simplices. The vertex set is the
/// union of the lists; a vertex repeated inside one simplex is an error.
pub fn build_complex(maximal: &[Vec<usize>]) -> Result<SimplicialComplex> {
    let mut simplices = BTreeSet::new();
    for simplex in maximal {
        if simplex.is_empty() {
            return Err(Error::EmptySimplex);
        }
        let mut sorted = simplex.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(simplex.clone(), w[0]));
            }
        }
        // Every nonempty subset, via the bit patterns of the index set.
        for mask in 1u64..(1 << sorted.len()) {
            let face: Vec<usize> = (0..sorted.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| sorted[i])
                .collect();
            simplices.insert(face);
        }
    }
    Ok(SimplicialComplex { simplices })
}

/// A complex embedded in R^(N+1) by exact rational vertex coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricComplex {
    complex: SimplicialComplex,
    ambient_dim: usize,
    coords: BTreeMap<usize, Vec<Rational>>,
}

impl GeometricComplex {
    /// Validates that the coordinate table covers exactly the vertex set,
    /// every vector has length `ambient_dim >= 1`, and no two vertices
    /// share a point.
    pub fn new(
        complex: SimplicialComplex,
        ambient_dim: usize,
        coords: BTreeMap<usize, Vec<Rational>>,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::AmbientDimZero);
        }
        for v in complex.vertices() {
            let Some(c) = coords.get(&v) else {
                return Err(Error::MissingCoordinates(v));
            };
            if c.len() != ambient_dim {
                return Err(Error::CoordinateLength(v, c.len(), ambient_dim));
            }
        }
        for &v in coords.keys() {
            if !complex.contains(&[v]) {
                return Err(Error::UnknownVertex(v));
            }
        }
        let vs = complex.vertices();
        for (i, &u) in vs.iter().enumerate() {
            for &w in &vs[i + 1..] {
                if coords[&u] == coords[&w] {
                    return Err(Error::CoincidentVertices(u, w));
                }
            }
        }
        Ok(GeometricComplex {
            complex,
            ambient_dim,
            coords,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.complex.vertices()
    }

    pub fn coords(&self, v: usize) -> Result<&Vec<Rational>> {
        self.coords.get(&v).ok_or(Error::UnknownVertex(v))
    }
}

/// A nonzero vector of the ambient space. Directions are never normalized;
/// every positive multiple denotes the same point of the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Direction(Vec<Rational>);

impl Direction {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.iter().all(num::Zero::is_zero) {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction(coords))
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Height of vertex `v` in direction `mu`: the inner product of `mu` with
/// the vertex's coordinates.
pub fn height(gc: &GeometricComplex, mu: &Direction, v: usize) -> Result<Rational> {
    if mu.dim() != gc.ambient_dim() {
        return Err(Error::DirectionLength(mu.dim(), gc.ambient_dim()));
    }
    Ok(dot(mu.coords(), gc.coords(v)?))
}

/// Dimension of the affine hull of the embedded vertex set `s`: the rank of
/// the differences against the first listed vertex. Singletons have hull
/// dimension 0; the empty set is rejected.
pub fn affine_dim(gc: &GeometricComplex, s: &[usize]) -> Result<usize> {
    let Some((&first, rest)) = s.split_first() else {
        return Err(Error::EmptyVertexSet);
    };
    let base = gc.coords(first)?;
    let rows: Vec<Vec<Rational>> = rest
        .iter()
        .map(|&v| Ok(vec_sub(gc.coords(v)?, base)))
        .collect::<Result<_>>()?;
    Ok(linalg::rank(&rows))
}

/// Specialization order on embeddings of one complex: `phi` precedes `psi`
/// when every nonempty vertex subset has affine hull dimension under `phi`
/// at most its dimension under `psi`. Both embeddings must share the
/// complex and the ambient dimension.
pub fn specialization_leq(phi: &GeometricComplex, psi: &GeometricComplex) -> Result<bool> {
    if phi.complex != psi.complex || phi.ambient_dim != psi.ambient_dim {
        return Err(Error::MismatchedEmbeddings);
    }
    let vs = phi.vertices();
    debug_assert!(vs.len() < 64);
    for mask in 1u64..(1 << vs.len()) {
        let subset: Vec<usize> = (0..vs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| vs[i])
            .collect();
        if affine_dim(phi, &subset)? > affine_dim(psi, &subset)? {
            return Ok(false);
        }
    }
    Ok(true)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use fixtures::{book_complex, v_complex};

    #[test]
    fn closure_of_a_path() {
        let k = build_complex(&[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(k.len(), 5);
        assert_eq!(k.vertices(), vec![0, 1, 2]);
        assert_eq!(k.simplices_of_dim(1).len(), 2);
    }

    #[test]
    fn closure_of_two_triangles() {
        let k = build_complex(&[vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert_eq!(k.simplices_of_dim(0).len(), 4);
        assert_eq!(k.simplices_of_dim(1).len(), 5);
        assert_eq!(k.simplices_of_dim(2).len(), 2);
        assert!(k.contains(&[3]));
        assert!(!k.contains(&[2, 3]));
    }

    #[test]
    fn closure_of_a_point() {
        let k = build_complex(&[vec![0]]).unwrap();
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn closure_is_downward_closed() {
        let k = build_complex(&[vec![4, 1, 7], vec![2, 7]]).unwrap();
        for s in k.simplices() {
            for drop in 0..s.len() {
                if s.len() > 1 {
                    let mut face = s.clone();
                    face.remove(drop);
                    assert!(k.contains(&face), "missing face {face:?} of {s:?}");
                }
            }
        }
    }

    #[test]
    fn repeated_vertex_is_rejected() {
        assert!(matches!(
            build_complex(&[vec![0, 0, 1]]),
            Err(Error::DuplicateVertex(_, 0))
        ));
        assert!(build_complex(&[vec![]]).is_err());
    }

    #[test]
    fn maximal_simplices_regenerate() {
        let k = build_complex(&[vec![0, 1, 2], vec![0, 1, 3], vec![3]]).unwrap();
        let max = k.maximal_simplices();
        assert_eq!(max, vec![vec![0, 1, 2], vec![0, 1, 3]]);
        assert_eq!(build_complex(&max).unwrap(), k);
    }

    #[test]
    fn embedding_validation() {
        let k = build_complex(&[vec![0, 1]]).unwrap();
        let good = BTreeMap::from([(0, vec![rat(0)]), (1, vec![rat(1)])]);
        assert!(GeometricComplex::new(k.clone(), 1, good.clone()).is_ok());

        let missing = BTreeMap::from([(0, vec![rat(0)])]);
        assert!(matches!(
            GeometricComplex::new(k.clone(), 1, missing),
            Err(Error::MissingCoordinates(1))
        ));

        let coincident = BTreeMap::from([(0, vec![rat(2)]), (1, vec![rat(2)])]);
        assert!(matches!(
            GeometricComplex::new(k.clone(), 1, coincident),
            Err(Error::CoincidentVertices(0, 1))
        ));

        assert!(matches!(
            GeometricComplex::new(k.clone(), 0, BTreeMap::new()),
            Err(Error::AmbientDimZero)
        ));

        let wrong_len = BTreeMap::from([(0, vec![rat(0), rat(0)]), (1, vec![rat(1)])]);
        assert!(GeometricComplex::new(k, 1, wrong_len).is_err());
    }

    #[test]
    fn zero_direction_is_rejected() {
        assert!(Direction::new(vec![rat(0), rat(0)]).is_err());
        assert!(Direction::new(vec![rat(0), ratio(1, 3)]).is_ok());
    }

    #[test]
    fn heights_in_the_wedge() {
        let gc = v_complex();
        let mu = Direction::new(vec![rat(1), rat(0)]).unwrap();
        assert_eq!(height(&gc, &mu, 0).unwrap(), rat(-1));
        assert_eq!(height(&gc, &mu, 1).unwrap(), rat(0));
        assert_eq!(height(&gc, &mu, 2).unwrap(), rat(1));
        let up = Direction::new(vec![rat(0), rat(1)]).unwrap();
        assert_eq!(height(&gc, &up, 0).unwrap(), rat(1));
        assert_eq!(height(&gc, &up, 1).unwrap(), rat(0));
        assert_eq!(height(&gc, &up, 2).unwrap(), rat(1));
    }

    #[test]
    fn height_respects_scaling() {
        let gc = v_complex();
        let mu = Direction::new(vec![ratio(2, 3), rat(-1)]).unwrap();
        let scaled = Direction::new(vec![ratio(4, 3), rat(-2)]).unwrap();
        for v in gc.vertices() {
            let h = height(&gc, &mu, v).unwrap();
            assert_eq!(height(&gc, &scaled, v).unwrap(), h * rat(2));
        }
    }

    #[test]
    fn height_rejects_dimension_mismatch() {
        let gc = v_complex();
        let mu = Direction::new(vec![rat(1)]).unwrap();
        assert!(height(&gc, &mu, 0).is_err());
        let ok = Direction::new(vec![rat(1), rat(0)]).unwrap();
        assert!(matches!(height(&gc, &ok, 9), Err(Error::UnknownVertex(9))));
    }

    #[test]
    fn affine_dims_of_the_wedge() {
        let gc = v_complex();
        assert_eq!(affine_dim(&gc, &[0]).unwrap(), 0);
        assert_eq!(affine_dim(&gc, &[0, 1]).unwrap(), 1);
        assert_eq!(affine_dim(&gc, &[0, 1, 2]).unwrap(), 2);
        assert!(affine_dim(&gc, &[]).is_err());
    }

    #[test]
    fn affine_dims_of_the_book() {
        let gc = book_complex();
        assert_eq!(affine_dim(&gc, &[0, 1, 2, 3]).unwrap(), 3);
        assert_eq!(affine_dim(&gc, &[0, 1, 2]).unwrap(), 2);
    }

    #[test]
    fn affine_dim_is_bounded() {
        let gc = book_complex();
        let vs = gc.vertices();
        for mask in 1u64..(1 << vs.len()) {
            let s: Vec<usize> = (0..vs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vs[i])
                .collect();
            let d = affine_dim(&gc, &s).unwrap();
            assert!(d <= s.len() - 1);
            assert!(d <= gc.ambient_dim());
        }
    }

    #[test]
    fn specialization_is_reflexive_and_translation_invariant() {
        let gc = v_complex();
        assert!(specialization_leq(&gc, &gc).unwrap());

        let shifted = GeometricComplex::new(
            gc.complex().clone(),
            2,
            gc.vertices()
                .into_iter()
                .map(|v| {
                    let c = gc.coords(v).unwrap();
                    (v, vec![&c[0] + rat(1), &c[1] + rat(1)])
                })
                .collect(),
        )
        .unwrap();
        assert!(specialization_leq(&gc, &shifted).unwrap());
        assert!(specialization_leq(&shifted, &gc).unwrap());
    }

    #[test]
    fn collapse_to_a_line_specializes_the_wedge() {
        let gc = v_complex();
        // Same complex with vertex 0 dropped onto the line through the
        // other two points.
        let flat = GeometricComplex::new(
            gc.complex().clone(),
            2,
            BTreeMap::from([
                (0, vec![rat(-1), rat(-1)]),
                (1, vec![rat(0), rat(0)]),
                (2, vec![rat(1), rat(1)]),
            ]),
        )
        .unwrap();
        assert!(specialization_leq(&flat, &gc).unwrap());
        assert!(!specialization_leq(&gc, &flat).unwrap());
    }

    #[test]
    fn specialization_is_transitive_on_a_chain() {
        let gc = v_complex();
        let mk = |c0: Vec<Rational>| {
            GeometricComplex::new(
                gc.complex().clone(),
                2,
                BTreeMap::from([
                    (0, c0),
                    (1, vec![rat(0), rat(0)]),
                    (2, vec![rat(1), rat(1)]),
                ]),
            )
            .unwrap()
        };
        let flat = mk(vec![rat(-1), rat(-1)]);
        let also_flat = mk(vec![rat(-2), rat(-2)]);
        assert!(specialization_leq(&also_flat, &flat).unwrap());
        assert!(specialization_leq(&flat, &gc).unwrap());
        assert!(specialization_leq(&also_flat, &gc).unwrap());
    }

    #[test]
    fn specialization_rejects_mismatches() {
        let a = v_complex();
        let other = build_complex(&[vec![0, 1]]).unwrap();
        let b = GeometricComplex::new(
            other,
            2,
            BTreeMap::from([(0, vec![rat(0), rat(0)]), (1, vec![rat(1), rat(0)])]),
        )
        .unwrap();
        assert!(matches!(
            specialization_leq(&a, &b),
            Err(Error::MismatchedEmbeddings)
        ));
    }
}
