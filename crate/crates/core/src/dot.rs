//! Graphviz output. Layout is left to `dot`; elements of equal height share a
//! rank and appear in the order of an optional horizontal key.

use std::fmt::Write as _;

use crate::grid::{Grid, GridCongruence, GridQuotient};
use crate::lattice::{BorderedDiagram, FiniteLattice};

const HEADER: &str =
    "  rankdir=BT;\n  node [shape=circle, width=0.3, fixedsize=true, fontsize=10];\n";

fn ranks(l: &FiniteLattice, key: Option<&[i64]>) -> Vec<Vec<usize>> {
    let mut ranks = vec![Vec::new(); l.length() + 1];
    for x in 0..l.size() {
        ranks[l.height(x)].push(x);
    }
    if let Some(key) = key {
        for r in &mut ranks {
            r.sort_by_key(|&x| (key[x], x));
        }
    }
    ranks
}

fn write_ranks(out: &mut String, ranks: &[Vec<usize>]) {
    for r in ranks {
        let names: Vec<String> = r.iter().map(|x| format!("n{x}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", names.join("; "));
    }
}

pub fn lattice_to_dot(l: &FiniteLattice, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n{HEADER}");
    for x in 0..l.size() {
        let _ = writeln!(out, "  n{x} [label=\"{x}\"];");
    }
    write_ranks(&mut out, &ranks(l, None));
    for (a, b) in l.cover_pairs() {
        let _ = writeln!(out, "  n{a} -> n{b} [arrowhead=none];");
    }
    out.push_str("}\n");
    out
}

/// Left chain edges blue, right chain edges red, edges on both purple;
/// narrows drawn as double circles.
pub fn diagram_to_dot(d: &BorderedDiagram, name: &str, key: Option<&[i64]>) -> String {
    let l = d.lattice();
    let on = |chain: &[usize], a: usize, b: usize| chain.windows(2).any(|w| w == [a, b]);
    let narrows = l.narrows();
    let mut out = format!("digraph {name} {{\n{HEADER}");
    for x in 0..l.size() {
        let shape = if narrows.contains(&x) {
            ", shape=doublecircle"
        } else {
            ""
        };
        let _ = writeln!(out, "  n{x} [label=\"{x}\"{shape}];");
    }
    write_ranks(&mut out, &ranks(l, key));
    for (a, b) in l.cover_pairs() {
        let color = match (on(d.left_chain(), a, b), on(d.right_chain(), a, b)) {
            (true, true) => ", color=purple, penwidth=2",
            (true, false) => ", color=blue, penwidth=2",
            (false, true) => ", color=red, penwidth=2",
            (false, false) => "",
        };
        let _ = writeln!(out, "  n{a} -> n{b} [arrowhead=none{color}];");
    }
    out.push_str("}\n");
    out
}

/// A grid quotient with nodes labelled by block tops and spread by `j − i`.
pub fn quotient_to_dot(q: &GridQuotient, name: &str) -> String {
    let key: Vec<i64> = q.tops.iter().map(|&(i, j)| j as i64 - i as i64).collect();
    let mut out = diagram_to_dot(&q.diagram, name, Some(&key));
    for (x, &(i, j)) in q.tops.iter().enumerate() {
        out = out.replacen(
            &format!("  n{x} [label=\"{x}\""),
            &format!("  n{x} [label=\"{i},{j}\""),
            1,
        );
    }
    out
}

/// The grid with edges collapsed by `kappa` drawn dashed and grey.
pub fn grid_to_dot(kappa: &GridCongruence, name: &str) -> String {
    let grid: Grid = kappa.grid();
    let mut out = format!("digraph {name} {{\n{HEADER}");
    let n = grid.n();
    for h in 0..=2 * n {
        let names: Vec<String> = grid
            .points()
            .filter(|&(i, j)| i + j == h)
            .map(|(i, j)| format!("g{i}_{j}"))
            .collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", names.join("; "));
    }
    for (i, j) in grid.points() {
        let _ = writeln!(out, "  g{i}_{j} [label=\"{i},{j}\"];");
    }
    for e in grid.edges() {
        let ((a, b), (c, d)) = (e.lower, e.upper);
        let style = if kappa.collapses(e) {
            ", style=dashed, color=grey"
        } else {
            ""
        };
        let _ = writeln!(out, "  g{a}_{b} -> g{c}_{d} [arrowhead=none{style}];");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{beta_from_perm, phi0_quotient};
    use crate::lattice::samples::chain;
    use crate::perm::Permutation;

    #[test]
    fn chain_is_linear() {
        let text = lattice_to_dot(&chain(2), "c");
        assert!(text.starts_with("digraph c {"));
        assert!(text.contains("n0 -> n1") && text.contains("n1 -> n2"));
        assert_eq!(text.matches("->").count(), 2);
    }

    #[test]
    fn styled_output() {
        let p = Permutation::new(vec![2, 1]).unwrap();
        let q = phi0_quotient(&p);
        let text = quotient_to_dot(&q, "q");
        assert_eq!(text.matches("color=blue").count(), 2);
        assert_eq!(text.matches("color=red").count(), 2);
        assert_eq!(text.matches("doublecircle").count(), 2);
        assert!(text.contains("label=\"2,2\""));

        let beta = beta_from_perm(Grid::new(2), &p).unwrap();
        let text = grid_to_dot(&beta, "g");
        let collapsed = Grid::new(2)
            .edges()
            .into_iter()
            .filter(|&e| beta.collapses(e))
            .count();
        assert_eq!(text.matches("dashed").count(), collapsed);
        assert_eq!(text.matches("->").count(), 12);
    }
}
