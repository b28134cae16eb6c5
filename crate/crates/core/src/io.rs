//! JSON formats for embedded complexes and computed transforms.
//!
//! All numeric data is written as exact rational strings; no floating
//! point appears in any file. Transform files store only the data that
//! cannot be rederived cheaply (cells, diagrams); filtrations and face
//! maps are rebuilt on load. Loading revalidates everything it can:
//! witnesses must land in their cells, partitions must match witness
//! heights, cell dimensions and covering pairs must agree with
//! recomputation.

use crate::arrangement::{
    cell_dimension, covering_relation, essential_defect, sign_vector, Cell, Cellulation,
    OrderedPartition, PairSet, SignVector,
};
use crate::complex::{build_complex, Direction, GeometricComplex};
use crate::filtration::cell_poset;
use crate::pipeline::{FieldConfig, IntegralFunction, Interval};
use crate::rational::{format_vector, parse_vector};
use crate::transform::Transform;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

/// One vertex with exact rational coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: usize,
    pub coords: Vec<String>,
}

/// An embedded complex: ambient dimension, coordinates, and the maximal
/// simplices whose downward closure is the complex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFile {
    pub ambient_dim: usize,
    pub vertices: Vec<VertexEntry>,
    pub maximal_simplices: Vec<Vec<usize>>,
}

/// One cell of a stored cellulation. `poset` lists the height chain of the
/// cell in human-readable labels, blocks low to high and then "TOP".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellEntry {
    pub sign: String,
    pub dim: usize,
    pub partition: Vec<Vec<usize>>,
    pub witness: Vec<String>,
    pub poset: Vec<String>,
}

/// One charged interval of a stored diagram.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub interval: [usize; 2],
    pub charge: i64,
}

/// A computed transform: the input complex, the field, the cells, the
/// covering pairs of the face order, per-dimension diagrams (outer list
/// parallel to `cells`), and the block assignment map of each covering
/// pair (parallel to `face_relations`, mapping blocks of the cell chain
/// to blocks of the face chain). Keys of `diagrams` are homological
/// dimensions as decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransformFile {
    pub input: ComplexFile,
    pub field: u64,
    pub augmented_normals: Vec<Vec<String>>,
    pub cells: Vec<CellEntry>,
    pub face_relations: Vec<[usize; 2]>,
    pub diagrams: BTreeMap<String, Vec<Vec<DiagramPoint>>>,
    pub arrows: Vec<Vec<usize>>,
}

pub fn complex_to_file(gc: &GeometricComplex) -> ComplexFile {
    ComplexFile {
        ambient_dim: gc.ambient_dim(),
        vertices: gc
            .vertices()
            .into_iter()
            .map(|v| VertexEntry {
                id: v,
                coords: format_vector(gc.coords(v).expect("vertex has coordinates")),
            })
            .collect(),
        maximal_simplices: gc.complex().maximal_simplices(),
    }
}

pub fn complex_from_file(cf: &ComplexFile) -> Result<GeometricComplex> {
    let complex = build_complex(&cf.maximal_simplices)?;
    let mut coords = BTreeMap::new();
    for entry in &cf.vertices {
        if coords
            .insert(entry.id, parse_vector(&entry.coords)?)
            .is_some()
        {
            return Err(Error::BadComplexFile(format!(
                "vertex {} is listed twice",
                entry.id
            )));
        }
    }
    GeometricComplex::new(complex, cf.ambient_dim, coords)
}

pub fn transform_to_file(t: &Transform) -> TransformFile {
    let pairs = t.cellulation().pairs();
    TransformFile {
        input: complex_to_file(t.geometry()),
        field: t.field().p(),
        augmented_normals: pairs
            .augmentation()
            .iter()
            .map(|w| format_vector(w))
            .collect(),
        cells: t
            .cellulation()
            .cells()
            .iter()
            .map(|c| {
                let poset = cell_poset(c);
                CellEntry {
                    sign: c.sign.to_string(),
                    dim: c.dim,
                    partition: c.partition.blocks().to_vec(),
                    witness: format_vector(c.witness.coords()),
                    poset: (0..poset.len()).map(|i| poset.label(i)).collect(),
                }
            })
            .collect(),
        face_relations: t
            .cellulation()
            .covering()
            .iter()
            .map(|&(a, b)| [a, b])
            .collect(),
        diagrams: t
            .dims()
            .iter()
            .map(|&d| {
                let per_cell = t
                    .diagrams(d)
                    .expect("dimension was computed")
                    .iter()
                    .map(|sigma| {
                        sigma
                            .support()
                            .map(|((lo, hi), charge)| DiagramPoint {
                                interval: [lo, hi],
                                charge,
                            })
                            .collect()
                    })
                    .collect();
                (d.to_string(), per_cell)
            })
            .collect(),
        arrows: t
            .arrows()
            .iter()
            .map(|alpha| alpha.entries().to_vec())
            .collect(),
    }
}

pub fn transform_from_file(tf: &TransformFile) -> Result<Transform> {
    let bad = |msg: String| Error::BadTransformFile(msg);
    let gc = complex_from_file(&tf.input)?;
    let field = FieldConfig::new(tf.field)?;

    let pairs = if tf.augmented_normals.is_empty() {
        if essential_defect(&gc) >= 0 {
            return Err(bad(
                "embedding is not essential and the file carries no augmentation".into(),
            ));
        }
        PairSet::new(&gc)
    } else {
        let pairs = PairSet::augmented(&gc)
            .map_err(|e| bad(format!("file carries augmentation normals but {e}")))?;
        let recomputed: Vec<Vec<String>> = pairs
            .augmentation()
            .iter()
            .map(|w| format_vector(w))
            .collect();
        if recomputed != tf.augmented_normals {
            return Err(bad("augmentation normals do not match the embedding".into()));
        }
        pairs
    };

    let mut cells = Vec::with_capacity(tf.cells.len());
    for entry in &tf.cells {
        let sign = SignVector::parse(&entry.sign)?;
        if sign.len() != pairs.sign_len() {
            return Err(bad(format!(
                "cell {} has {} sign entries, expected {}",
                entry.sign,
                sign.len(),
                pairs.sign_len()
            )));
        }
        let partition = OrderedPartition::new(entry.partition.clone())?;
        let witness = Direction::new(parse_vector(&entry.witness)?)?;
        if sign_vector(&gc, &pairs, &witness)? != sign {
            return Err(bad(format!(
                "witness of cell {} lies outside the cell",
                entry.sign
            )));
        }
        if OrderedPartition::from_heights(&gc, &witness)? != partition {
            return Err(bad(format!(
                "partition of cell {} does not match its witness heights",
                entry.sign
            )));
        }
        if cell_dimension(&gc, &pairs, &sign)? != entry.dim {
            return Err(bad(format!(
                "cell {} is stored with dimension {}",
                entry.sign, entry.dim
            )));
        }
        let cell = Cell {
            sign,
            partition,
            dim: entry.dim,
            witness,
        };
        let poset = cell_poset(&cell);
        let labels: Vec<String> = (0..poset.len()).map(|i| poset.label(i)).collect();
        if labels != entry.poset {
            return Err(bad(format!(
                "poset labels of cell {} do not match its partition",
                entry.sign
            )));
        }
        cells.push(cell);
    }
    if !cells
        .windows(2)
        .all(|w| w[0].sign.to_string() < w[1].sign.to_string())
    {
        return Err(bad("cells are not sorted by sign vector".into()));
    }

    let covering = covering_relation(&cells);
    let stored: Vec<(usize, usize)> = tf.face_relations.iter().map(|&[a, b]| (a, b)).collect();
    if covering != stored {
        return Err(bad(
            "face relations do not match the covering pairs of the cells".into(),
        ));
    }
    let cellulation = Cellulation::from_parts(pairs, cells, covering)?;

    let mut dims = Vec::new();
    let mut diagrams: BTreeMap<usize, Vec<IntegralFunction>> = BTreeMap::new();
    for (key, per_cell) in &tf.diagrams {
        let d: usize = key
            .parse()
            .map_err(|_| bad(format!("diagram key {key:?} is not a dimension")))?;
        if per_cell.len() != cellulation.cells().len() {
            return Err(bad(format!(
                "dimension {d} has {} diagrams for {} cells",
                per_cell.len(),
                cellulation.cells().len()
            )));
        }
        let mut functions = Vec::with_capacity(per_cell.len());
        for (cell, points) in per_cell.iter().enumerate() {
            let chain_len = cellulation.cells()[cell].partition.block_count() + 1;
            let mut charges: BTreeMap<Interval, i64> = BTreeMap::new();
            for point in points {
                let interval = (point.interval[0], point.interval[1]);
                if charges.insert(interval, point.charge).is_some() {
                    return Err(bad(format!(
                        "cell {} dim {d} charges interval {:?} twice",
                        cellulation.cells()[cell].sign,
                        point.interval
                    )));
                }
            }
            functions.push(IntegralFunction::new(chain_len, charges).map_err(|e| {
                bad(format!(
                    "cell {} dim {d}: {e}",
                    cellulation.cells()[cell].sign
                ))
            })?);
        }
        dims.push(d);
        diagrams.insert(d, functions);
    }
    dims.sort_unstable();

    let t = Transform::from_parts(gc, cellulation, field, dims, diagrams)?;
    let rebuilt: Vec<Vec<usize>> = t
        .arrows()
        .iter()
        .map(|alpha| alpha.entries().to_vec())
        .collect();
    if rebuilt != tf.arrows {
        return Err(bad(
            "arrows do not match the face maps recomputed from the cells".into(),
        ));
    }
    Ok(t)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn complex_to_json(gc: &GeometricComplex) -> Result<String> {
    to_pretty_json(&complex_to_file(gc))
}

pub fn complex_from_json(text: &str) -> Result<GeometricComplex> {
    complex_from_file(&serde_json::from_str(text)?)
}

pub fn transform_to_json(t: &Transform) -> Result<String> {
    to_pretty_json(&transform_to_file(t))
}

pub fn transform_from_json(text: &str) -> Result<Transform> {
    transform_from_file(&serde_json::from_str(text)?)
}

pub fn load_complex(path: &Path) -> Result<GeometricComplex> {
    complex_from_json(&fs::read_to_string(path)?)
}

pub fn load_transform(path: &Path) -> Result<Transform> {
    transform_from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{book_complex, collinear_complex, v_complex};
    use crate::transform::{compute_transform, verify_transform};

    fn wedge_transform() -> Transform {
        compute_transform(&v_complex(), &[0, 1], FieldConfig::default(), false).unwrap()
    }

    #[test]
    fn complex_round_trips_through_json() {
        for gc in [v_complex(), book_complex(), collinear_complex()] {
            let text = complex_to_json(&gc).unwrap();
            let back = complex_from_json(&text).unwrap();
            assert_eq!(back, gc);
        }
    }

    #[test]
    fn complex_json_is_exact_and_stable() {
        let gc = v_complex();
        let text = complex_to_json(&gc).unwrap();
        assert!(text.contains("\"-1\""));
        assert!(!text.contains('.'), "no decimal points anywhere");
        assert_eq!(text, complex_to_json(&gc).unwrap());
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn duplicate_vertex_entries_are_rejected() {
        let mut cf = complex_to_file(&v_complex());
        let copy = cf.vertices[0].clone();
        cf.vertices.push(copy);
        assert!(matches!(
            complex_from_file(&cf),
            Err(Error::BadComplexFile(_))
        ));
    }

    #[test]
    fn missing_and_malformed_coordinates_are_rejected() {
        let mut cf = complex_to_file(&v_complex());
        cf.vertices.pop();
        assert!(matches!(
            complex_from_file(&cf),
            Err(Error::MissingCoordinates(2))
        ));

        let mut cf = complex_to_file(&v_complex());
        cf.vertices[0].coords[0] = "1.5".into();
        assert!(matches!(complex_from_file(&cf), Err(Error::BadRational(_))));
    }

    #[test]
    fn transform_round_trips_through_json() {
        let t = wedge_transform();
        let text = transform_to_json(&t).unwrap();
        let back = transform_from_json(&text).unwrap();

        assert_eq!(back.geometry(), t.geometry());
        assert_eq!(back.field(), t.field());
        assert_eq!(back.dims(), t.dims());
        assert_eq!(back.cellulation().covering(), t.cellulation().covering());
        assert_eq!(
            back.cellulation().cells().len(),
            t.cellulation().cells().len()
        );
        for (a, b) in back
            .cellulation()
            .cells()
            .iter()
            .zip(t.cellulation().cells())
        {
            assert_eq!(a, b);
        }
        for &d in t.dims() {
            assert_eq!(back.diagrams(d).unwrap(), t.diagrams(d).unwrap());
        }
        assert!(verify_transform(&back).all_passed());

        // Serialization is deterministic byte for byte.
        assert_eq!(transform_to_json(&back).unwrap(), text);
    }

    #[test]
    fn augmented_transform_round_trips() {
        let t =
            compute_transform(&collinear_complex(), &[0], FieldConfig::default(), true).unwrap();
        let text = transform_to_json(&t).unwrap();
        let back = transform_from_json(&text).unwrap();
        assert_eq!(
            back.cellulation().pairs().augmentation(),
            t.cellulation().pairs().augmentation()
        );
        assert!(verify_transform(&back).all_passed());
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let t = wedge_transform();
        let mut tf = transform_to_file(&t);
        tf.cells[0].witness = tf.cells[11].witness.clone();
        let err = transform_from_file(&tf).unwrap_err();
        assert!(matches!(err, Error::BadTransformFile(_)));
        assert!(err.to_string().contains("witness"));
    }

    #[test]
    fn tampered_partition_is_rejected() {
        let t = wedge_transform();
        let mut tf = transform_to_file(&t);
        tf.cells[0].partition.reverse();
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("partition"));
    }

    #[test]
    fn tampered_dimension_is_rejected() {
        let t = wedge_transform();
        let mut tf = transform_to_file(&t);
        tf.cells[0].dim += 1;
        assert!(matches!(
            transform_from_file(&tf),
            Err(Error::BadTransformFile(_))
        ));
    }

    #[test]
    fn tampered_face_relations_are_rejected() {
        let t = wedge_transform();
        let mut tf = transform_to_file(&t);
        tf.face_relations.pop();
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("face relations"));
    }

    #[test]
    fn tampered_poset_labels_are_rejected() {
        let t = wedge_transform();
        let mut tf = transform_to_file(&t);
        tf.cells[0].poset.swap(0, 1);
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("poset"));
    }

    #[test]
    fn tampered_arrows_are_rejected() {
        let t = wedge_transform();
        let mut tf = transform_to_file(&t);
        // The rebuilt map always carries top to top, so zeroing the last
        // entry is guaranteed to disagree.
        *tf.arrows[0].last_mut().unwrap() = 0;
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("arrows"));
    }

    #[test]
    fn unsorted_cells_are_rejected() {
        let t = wedge_transform();
        let mut tf = transform_to_file(&t);
        tf.cells.swap(0, 1);
        for per_cell in tf.diagrams.values_mut() {
            per_cell.swap(0, 1);
        }
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("sorted"));
    }

    #[test]
    fn bad_diagram_data_is_rejected() {
        let t = wedge_transform();

        let mut tf = transform_to_file(&t);
        tf.diagrams.get_mut("0").unwrap()[0].push(DiagramPoint {
            interval: [9, 9],
            charge: 1,
        });
        assert!(matches!(
            transform_from_file(&tf),
            Err(Error::BadTransformFile(_))
        ));

        let mut tf = transform_to_file(&t);
        let points = &mut tf.diagrams.get_mut("0").unwrap()[0];
        let copy = points[0].clone();
        points.push(copy);
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("twice"));

        let mut tf = transform_to_file(&t);
        let per_cell = tf.diagrams.get_mut("0").unwrap().clone();
        tf.diagrams.insert("x".into(), per_cell);
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("dimension"));
    }

    #[test]
    fn non_prime_field_is_rejected() {
        let t = wedge_transform();
        let mut tf = transform_to_file(&t);
        tf.field = 4;
        assert!(matches!(transform_from_file(&tf), Err(Error::NotPrime(4))));
    }

    #[test]
    fn missing_augmentation_is_rejected() {
        let t =
            compute_transform(&collinear_complex(), &[0], FieldConfig::default(), true).unwrap();
        let mut tf = transform_to_file(&t);
        tf.augmented_normals.clear();
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("not essential"));

        let t2 = wedge_transform();
        let mut tf2 = transform_to_file(&t2);
        tf2.augmented_normals = vec![vec!["0".into(), "1".into()]];
        let err2 = transform_from_file(&tf2).unwrap_err();
        assert!(err2.to_string().contains("augmentation"));
    }

    #[test]
    fn tampered_augmentation_normals_are_rejected() {
        let t =
            compute_transform(&collinear_complex(), &[0], FieldConfig::default(), true).unwrap();
        let mut tf = transform_to_file(&t);
        tf.augmented_normals[0][0] = "7".into();
        let err = transform_from_file(&tf).unwrap_err();
        assert!(err.to_string().contains("augmentation"));
    }

    #[test]
    fn book_transform_round_trips() {
        let t = compute_transform(&book_complex(), &[0, 1], FieldConfig::default(), false).unwrap();
        let back = transform_from_json(&transform_to_json(&t).unwrap()).unwrap();
        assert_eq!(back.cellulation().cells().len(), 74);
        for &d in t.dims() {
            assert_eq!(back.diagrams(d).unwrap(), t.diagrams(d).unwrap());
        }
    }
}
