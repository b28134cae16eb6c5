//! Human-readable renderings of computed structures: an SVG of the circle
//! of directions for ambient dimension 2, and DOT graphs for cell posets,
//! interval posets with charges, and vineyards.
//!
//! Cell ordering around the circle is decided exactly (octant of the
//! witness, then a cross product); floating point enters only when the
//! final slot coordinates are written out.

use crate::arrangement::Cell;
use crate::filtration::cell_poset;
use crate::pipeline::IntervalPoset;
use crate::rational::{sign_of, Rational};
use crate::transform::{interval_label, Transform, VineyardGraph};
use crate::{Error, Result};
use num::ToPrimitive;
use std::cmp::Ordering;
use std::fmt::Write as _;

/// Height order of a cell in vertex labels, e.g. `v1=v2 < v3`.
pub fn order_label(cell: &Cell) -> String {
    let poset = cell_poset(cell);
    (0..poset.len() - 1)
        .map(|i| poset.label(i))
        .collect::<Vec<_>>()
        .join(" < ")
}

fn octant(x: i8, y: i8) -> u8 {
    match (x, y) {
        (1, 0) => 0,
        (1, 1) => 1,
        (0, 1) => 2,
        (-1, 1) => 3,
        (-1, 0) => 4,
        (-1, -1) => 5,
        (0, -1) => 6,
        (1, -1) => 7,
        _ => unreachable!("directions are nonzero"),
    }
}

/// Counterclockwise order on nonzero plane vectors, starting from the
/// positive x axis. Exact: octant first, cross product within an octant.
fn cyclic_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    let qa = octant(sign_of(&a[0]), sign_of(&a[1]));
    let qb = octant(sign_of(&b[0]), sign_of(&b[1]));
    qa.cmp(&qb).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        match sign_of(&cross) {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    })
}

fn unit_f64(v: &[Rational]) -> (f64, f64) {
    let x = v[0].to_f64().expect("witness coordinates fit in f64");
    let y = v[1].to_f64().expect("witness coordinates fit in f64");
    let n = x.hypot(y);
    (x / n, y / n)
}

const PALETTE: [&str; 8] = [
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c",
];

/// SVG of a one-dimensional arrangement: the circle of directions with
/// its 0-cells as dots and 1-cells as colored arcs, each labeled by sign
/// vector and carrying the height order as a tooltip.
pub fn svg_circle(t: &Transform) -> Result<String> {
    if t.geometry().ambient_dim() != 2 {
        return Err(Error::NotRenderable);
    }
    let cells = t.cellulation().cells();

    // All cells in exact counterclockwise witness order; dots and arcs
    // alternate around the circle.
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| cyclic_cmp(cells[a].witness.coords(), cells[b].witness.coords()));
    debug_assert!((0..order.len())
        .all(|i| { cells[order[i]].dim != cells[order[(i + 1) % order.len()]].dim }));

    const SIZE: f64 = 640.0;
    const RADIUS: f64 = 240.0;
    let center = SIZE / 2.0;
    let place = |v: &[Rational], radius: f64| -> (f64, f64) {
        let (x, y) = unit_f64(v);
        (center + radius * x, center - radius * y)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\" \
         font-family=\"monospace\" font-size=\"15\">"
    );
    let _ = writeln!(
        svg,
        "  <circle cx=\"{center}\" cy=\"{center}\" r=\"{RADIUS}\" fill=\"none\" \
         stroke=\"#dddddd\" stroke-width=\"1\"/>"
    );

    for (slot, &idx) in order.iter().enumerate() {
        let cell = &cells[idx];
        if cell.dim != 1 {
            continue;
        }
        // Endpoints are the cyclic neighbors, both 0-cells.
        let prev = &cells[order[(slot + order.len() - 1) % order.len()]];
        let next = &cells[order[(slot + 1) % order.len()]];
        let (x1, y1) = place(prev.witness.coords(), RADIUS);
        let (x2, y2) = place(next.witness.coords(), RADIUS);
        let color = PALETTE[slot % PALETTE.len()];
        let _ = writeln!(
            svg,
            "  <path d=\"M {x1:.3} {y1:.3} A {RADIUS} {RADIUS} 0 0 0 {x2:.3} {y2:.3}\" \
             fill=\"none\" stroke=\"{color}\" stroke-width=\"6\">\
             <title>{}: {}</title></path>",
            cell.sign,
            order_label(cell)
        );
        let (lx, ly) = place(cell.witness.coords(), RADIUS + 42.0);
        let _ = writeln!(
            svg,
            "  <text x=\"{lx:.3}\" y=\"{ly:.3}\" text-anchor=\"middle\" \
             dominant-baseline=\"middle\" fill=\"{color}\">{}</text>",
            cell.sign
        );
    }

    for &idx in &order {
        let cell = &cells[idx];
        if cell.dim != 0 {
            continue;
        }
        let (x, y) = place(cell.witness.coords(), RADIUS);
        let _ = writeln!(
            svg,
            "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"7\" fill=\"#222222\">\
             <title>{}: {}</title></circle>",
            cell.sign,
            order_label(cell)
        );
        let (lx, ly) = place(cell.witness.coords(), RADIUS - 46.0);
        let _ = writeln!(
            svg,
            "  <text x=\"{lx:.3}\" y=\"{ly:.3}\" text-anchor=\"middle\" \
             dominant-baseline=\"middle\" fill=\"#222222\">{}</text>",
            cell.sign
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn dot_escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering of one cell's stage chain: bottom block up to TOP, each
/// node annotated with the simplex count of its filtration stage.
pub fn chain_dot(t: &Transform, cell: usize) -> Result<String> {
    let poset = cell_poset(t.cellulation().cell(cell)?);
    let filtration = t.filtration(cell)?;
    let mut dot = String::new();
    let _ = writeln!(dot, "digraph chain {{");
    let _ = writeln!(dot, "  rankdir=BT;");
    let _ = writeln!(dot, "  node [shape=box];");
    for a in 0..poset.len() {
        let _ = writeln!(
            dot,
            "  p{a} [label=\"{}\\n{} simplices\"];",
            dot_escape(&poset.label(a)),
            filtration.stage(a).len()
        );
    }
    for a in 0..poset.len() - 1 {
        let _ = writeln!(dot, "  p{a} -> p{};", a + 1);
    }
    dot.push_str("}\n");
    Ok(dot)
}

/// DOT rendering of one cell's interval poset: covering edges point up,
/// and every computed dimension with charge on an interval annotates its
/// node.
pub fn interval_poset_dot(t: &Transform, cell: usize) -> Result<String> {
    let poset_labels = cell_poset(t.cellulation().cell(cell)?);
    let chain_len = poset_labels.len();
    let poset = IntervalPoset::new(chain_len)?;
    let index: std::collections::BTreeMap<(usize, usize), usize> = poset
        .intervals()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();

    let mut dot = String::new();
    let _ = writeln!(dot, "digraph intervals {{");
    let _ = writeln!(dot, "  rankdir=BT;");
    let _ = writeln!(dot, "  node [shape=box];");
    for (i, &interval) in poset.intervals().iter().enumerate() {
        let mut label = interval_label(&poset_labels, interval);
        for &d in t.dims() {
            let charge = t.diagram(d, cell)?.charge(interval);
            if charge != 0 {
                let _ = write!(label, "\ndim {d}: {charge}");
            }
        }
        let _ = writeln!(
            dot,
            "  i{i} [label=\"{}\"];",
            dot_escape(&label).replace('\n', "\\n")
        );
    }
    for (lo, hi) in poset.covering_pairs() {
        let _ = writeln!(dot, "  i{} -> i{};", index[&lo], index[&hi]);
    }
    dot.push_str("}\n");
    Ok(dot)
}

/// DOT rendering of a vineyard graph: one node per charged interval,
/// filled by connected component, with pushforward edges pointing from
/// covering cells to their faces.
pub fn vineyard_dot(t: &Transform, graph: &VineyardGraph) -> String {
    let cells = t.cellulation().cells();
    let mut component_of = vec![0usize; graph.nodes.len()];
    for (c, component) in graph.components.iter().enumerate() {
        for &n in &component.nodes {
            component_of[n] = c;
        }
    }

    let mut dot = String::new();
    let _ = writeln!(dot, "digraph vineyard {{");
    let _ = writeln!(dot, "  rankdir=BT;");
    let _ = writeln!(dot, "  node [shape=box, style=filled];");
    for (n, node) in graph.nodes.iter().enumerate() {
        let poset = cell_poset(&cells[node.cell]);
        let _ = writeln!(
            dot,
            "  n{n} [label=\"{}\\n{}\\ncharge {}\", fillcolor=\"{}\"];",
            dot_escape(&cells[node.cell].sign.to_string()),
            dot_escape(&interval_label(&poset, node.interval)),
            node.charge,
            PALETTE[component_of[n] % PALETTE.len()]
        );
    }
    for &(from, to) in &graph.edges {
        let _ = writeln!(dot, "  n{from} -> n{to};");
    }
    dot.push_str("}\n");
    dot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::SignVector;
    use crate::complex::fixtures::{book_complex, collinear_complex, v_complex};
    use crate::pipeline::FieldConfig;
    use crate::rational::rat;
    use crate::transform::{compute_transform, vineyard};

    fn wedge_transform() -> Transform {
        compute_transform(&v_complex(), &[0, 1], FieldConfig::default(), false).unwrap()
    }

    #[test]
    fn cyclic_order_walks_counterclockwise() {
        let east = vec![rat(1), rat(0)];
        let ne = vec![rat(1), rat(1)];
        let north = vec![rat(0), rat(5)];
        let west = vec![rat(-3), rat(0)];
        let south = vec![rat(0), rat(-1)];
        let se_low = vec![rat(4), rat(-1)];
        let se_high = vec![rat(1), rat(-4)];
        let mut dirs = vec![
            south.clone(),
            west.clone(),
            ne.clone(),
            east.clone(),
            se_low.clone(),
            north.clone(),
            se_high.clone(),
        ];
        dirs.sort_by(|a, b| cyclic_cmp(a, b));
        assert_eq!(dirs, vec![east, ne, north, west, south, se_high, se_low]);
    }

    #[test]
    fn svg_draws_every_cell_once() {
        let t = wedge_transform();
        let svg = svg_circle(&t).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<path").count(), 6);
        assert_eq!(svg.matches("<circle").count(), 7);
        assert_eq!(svg.matches("<title>").count(), 12);
        for cell in t.cellulation().cells() {
            assert!(svg.contains(&format!("{}:", cell.sign)));
        }
        assert!(svg.contains("v1=v2"));
        assert_eq!(svg, svg_circle(&t).unwrap());
    }

    #[test]
    fn svg_rejects_higher_dimensional_arrangements() {
        let t = compute_transform(&book_complex(), &[0], FieldConfig::default(), false).unwrap();
        assert!(matches!(svg_circle(&t), Err(Error::NotRenderable)));
    }

    #[test]
    fn svg_handles_augmented_arrangements() {
        let t =
            compute_transform(&collinear_complex(), &[0], FieldConfig::default(), true).unwrap();
        let svg = svg_circle(&t).unwrap();
        assert_eq!(svg.matches("<path").count(), 4);
        assert_eq!(svg.matches("<title>").count(), 8);
    }

    #[test]
    fn chain_dot_labels_the_stages() {
        let t = wedge_transform();
        let idx = t
            .cellulation()
            .index_of_sign(&SignVector::parse("+++").unwrap())
            .unwrap();
        let dot = chain_dot(&t, idx).unwrap();
        assert!(dot.contains("digraph chain"));
        assert!(dot.contains("v1\\n1 simplices"));
        assert!(dot.contains("TOP\\n5 simplices"));
        assert_eq!(dot.matches("->").count(), 3);
    }

    #[test]
    fn interval_dot_carries_charges_and_covering_edges() {
        let t = wedge_transform();
        let idx = t
            .cellulation()
            .index_of_sign(&SignVector::parse("+++").unwrap())
            .unwrap();
        let dot = interval_poset_dot(&t, idx).unwrap();
        assert!(dot.contains("[v2, v2]\\ndim 0: 1"));
        assert!(dot.contains("[v1, TOP]\\ndim 0: 1"));
        // Ten intervals of a four-chain, twelve covering edges.
        assert_eq!(dot.matches("label=").count(), 10);
        assert_eq!(dot.matches("->").count(), 12);
    }

    #[test]
    fn vineyard_dot_colors_components() {
        let t = wedge_transform();
        let graph = vineyard(&t, 0).unwrap();
        let dot = vineyard_dot(&t, &graph);
        assert_eq!(dot.matches("fillcolor").count(), graph.nodes.len());
        assert_eq!(dot.matches("->").count(), graph.edges.len());
        let distinct: std::collections::BTreeSet<&str> = PALETTE
            .iter()
            .copied()
            .filter(|c| dot.contains(c))
            .collect();
        assert_eq!(distinct.len(), graph.components.len().min(PALETTE.len()));
    }
}
