//! Reading the permutation of a bordered slim semimodular diagram.
//!
//! Three independent extractors are provided: trajectories through covering
//! squares, meet-irreducibles below the left chain, and source cells of the
//! map `(i, j) ↦ c_i ∨ d_j`. On valid input they agree.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::grid::phi0;
use crate::lattice::{
    find_isomorphism, BorderedDiagram, FiniteLattice, LatticeError, DEFAULT_ISO_CAP,
};
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("lattice is not slim and semimodular")]
    NotSlimSemimodular,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("elements above c_{} but not above c_{i} do not form a chain", i - 1)]
    NotAChain { i: usize },
    #[error("largest element {u} above c_{} but not above c_{i} is not meet-irreducible", i - 1)]
    UniquenessViolated { i: usize, u: usize },
    #[error("row {i} has no source cell")]
    SourceCellMissing { i: usize },
    #[error("row {i} has source cells in columns {columns:?}")]
    SourceCellDuplicated { i: usize, columns: Vec<usize> },
    #[error("prime interval {0:?} lies in more than two covering squares")]
    TrajectoryBranches((usize, usize)),
    #[error("trajectory of left edge {i} meets right edges {right:?}")]
    TrajectoryAmbiguous { i: usize, right: Vec<usize> },
    #[error(
        "extractors disagree: trajectories {pi1}, meet-irreducibles {pi2}, source cells {pi3}"
    )]
    ExtractorDisagreement {
        pi1: Permutation,
        pi2: Permutation,
        pi3: Permutation,
    },
    #[error("extracted values are not a permutation: {0}")]
    Perm(#[from] PermError),
}

/// How much cross-checking [`extract_with`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtractMode {
    /// Meet-irreducibles only.
    Fast,
    /// All three extractors, compared.
    #[default]
    Verify,
}

/// Slim, semimodular, and the chains look like a diagram boundary.
pub fn check_preconditions(d: &BorderedDiagram) -> Result<(), ExtractError> {
    let l = d.lattice();
    if !l.is_slim() || !l.is_semimodular() {
        return Err(ExtractError::NotSlimSemimodular);
    }
    d.check_boundary()?;
    Ok(())
}

/// Prime intervals connected through opposite sides of covering squares,
/// ordered from the left boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub edges: Vec<(usize, usize)>,
}

struct SquareGraph {
    index: HashMap<(usize, usize), usize>,
    edges: Vec<(usize, usize)>,
    opposite: Vec<Vec<usize>>,
}

impl SquareGraph {
    fn new(l: &FiniteLattice) -> Result<Self, ExtractError> {
        let edges = l.cover_pairs();
        let index: HashMap<_, _> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let mut opposite = vec![Vec::new(); edges.len()];
        for [w, a, b, t] in l.covering_squares() {
            for (e, f) in [((w, a), (b, t)), ((w, b), (a, t))] {
                let (e, f) = (index[&e], index[&f]);
                opposite[e].push(f);
                opposite[f].push(e);
            }
        }
        if let Some(k) = opposite.iter().position(|o| o.len() > 2) {
            return Err(ExtractError::TrajectoryBranches(edges[k]));
        }
        Ok(Self {
            index,
            edges,
            opposite,
        })
    }

    fn component(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.edges.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(e) = queue.pop_front() {
            out.push(e);
            for &f in &self.opposite[e] {
                if !seen[f] {
                    seen[f] = true;
                    queue.push_back(f);
                }
            }
        }
        out
    }

    /// Walks from `start` while the path continues; `start` must be an end.
    fn walk(&self, start: usize) -> Vec<usize> {
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = self.opposite[cur].iter().find(|&&f| f != prev) {
            if path.contains(&next) {
                break;
            }
            path.push(next);
            prev = cur;
            cur = next;
        }
        path
    }
}

/// The trajectory starting at each left boundary edge `[c_{i−1}, c_i]`,
/// indexed by `i − 1`.
pub fn trajectories(d: &BorderedDiagram) -> Result<Vec<Trajectory>, ExtractError> {
    check_preconditions(d)?;
    let graph = SquareGraph::new(d.lattice())?;
    (1..=d.length())
        .map(|i| {
            let start = graph.index[&(d.c(i - 1), d.c(i))];
            let path = graph.walk(start);
            if path.len() != graph.component(start).len() {
                return Err(ExtractError::TrajectoryAmbiguous { i, right: vec![] });
            }
            Ok(Trajectory {
                edges: path.into_iter().map(|k| graph.edges[k]).collect(),
            })
        })
        .collect()
}

/// `π₁(i)` is the index of the unique right boundary edge in the trajectory
/// component of the `i`-th left boundary edge.
pub fn pi1_trajectories(d: &BorderedDiagram) -> Result<Permutation, ExtractError> {
    check_preconditions(d)?;
    let graph = SquareGraph::new(d.lattice())?;
    let n = d.length();
    let right_index: HashMap<usize, usize> = (1..=n)
        .map(|j| (graph.index[&(d.d(j - 1), d.d(j))], j))
        .collect();
    let mut images = Vec::with_capacity(n);
    for i in 1..=n {
        let start = graph.index[&(d.c(i - 1), d.c(i))];
        let right: Vec<usize> = graph
            .component(start)
            .into_iter()
            .filter_map(|e| right_index.get(&e).copied())
            .collect();
        match right[..] {
            [j] => images.push(j),
            _ => return Err(ExtractError::TrajectoryAmbiguous { i, right }),
        }
    }
    Ok(Permutation::new(images)?)
}

/// Largest element of `↑lower \ ↑upper`, which must be a chain and must be
/// meet-irreducible. `i` is only used for error reporting.
fn largest_outside(
    l: &FiniteLattice,
    lower: usize,
    upper: usize,
    i: usize,
) -> Result<usize, ExtractError> {
    let block: Vec<usize> = (0..l.size())
        .filter(|&x| l.leq(lower, x) && !l.leq(upper, x))
        .collect();
    if block
        .iter()
        .any(|&x| block.iter().any(|&y| !l.comparable(x, y)))
    {
        return Err(ExtractError::NotAChain { i });
    }
    let u = *block
        .iter()
        .max_by_key(|&&x| l.height(x))
        .expect("lower itself lies in the block");
    if l.upper_covers(u).len() != 1 {
        return Err(ExtractError::UniquenessViolated { i, u });
    }
    Ok(u)
}

/// `π₂(i) = min { j : d_j ≰ u_i }` where `u_i` is the largest element above
/// `c_{i−1}` but not above `c_i`.
pub fn pi2_meet_irreducibles(d: &BorderedDiagram) -> Result<Permutation, ExtractError> {
    check_preconditions(d)?;
    pi2_unchecked(d)
}

fn pi2_unchecked(d: &BorderedDiagram) -> Result<Permutation, ExtractError> {
    let l = d.lattice();
    let n = d.length();
    let images = (1..=n)
        .map(|i| {
            let u = largest_outside(l, d.c(i - 1), d.c(i), i)?;
            Ok((1..=n)
                .find(|&j| !l.leq(d.d(j), u))
                .expect("d_n = 1 is above u"))
        })
        .collect::<Result<Vec<_>, ExtractError>>()?;
    Ok(Permutation::new(images)?)
}

/// The same construction with the chains' roles exchanged; equals the
/// inverse of [`pi2_meet_irreducibles`].
pub fn pi2_right_to_left(d: &BorderedDiagram) -> Result<Permutation, ExtractError> {
    check_preconditions(d)?;
    pi2_unchecked(&d.swapped())
}

/// `π₃(i)` is the unique column `j` of a source cell of `(i, j) ↦ c_i ∨ d_j`
/// in row `i`.
pub fn pi3_source_cells(d: &BorderedDiagram) -> Result<Permutation, ExtractError> {
    check_preconditions(d)?;
    let l = d.lattice();
    let n = d.length();
    let eta = |i: usize, j: usize| l.join(d.c(i), d.d(j));
    let mut images = Vec::with_capacity(n);
    for i in 1..=n {
        let columns: Vec<usize> = (1..=n)
            .filter(|&j| {
                let t = eta(i, j);
                eta(i - 1, j) == t && eta(i, j - 1) == t && eta(i - 1, j - 1) != t
            })
            .collect();
        match columns[..] {
            [] => return Err(ExtractError::SourceCellMissing { i }),
            [j] => images.push(j),
            _ => return Err(ExtractError::SourceCellDuplicated { i, columns }),
        }
    }
    Ok(Permutation::new(images)?)
}

/// The permutation of `d`, cross-checked by all three extractors.
pub fn extract_permutation(d: &BorderedDiagram) -> Result<Permutation, ExtractError> {
    extract_with(d, ExtractMode::Verify)
}

pub fn extract_with(d: &BorderedDiagram, mode: ExtractMode) -> Result<Permutation, ExtractError> {
    check_preconditions(d)?;
    let pi2 = pi2_unchecked(d)?;
    if mode == ExtractMode::Fast {
        return Ok(pi2);
    }
    let pi1 = pi1_trajectories(d)?;
    let pi3 = pi3_source_cells(d)?;
    if pi1 != pi2 || pi2 != pi3 {
        return Err(ExtractError::ExtractorDisagreement { pi1, pi2, pi3 });
    }
    Ok(pi2)
}

/// Whether an automorphism of the common lattice carries `a`'s chains onto
/// `b`'s chains, side by side.
pub fn boundary_similar(a: &BorderedDiagram, b: &BorderedDiagram) -> Result<bool, ExtractError> {
    if a.length() != b.length() {
        return Ok(false);
    }
    let pins: Vec<(usize, usize)> = a
        .left_chain()
        .iter()
        .zip(b.left_chain())
        .chain(a.right_chain().iter().zip(b.right_chain()))
        .map(|(&x, &y)| (x, y))
        .collect();
    Ok(find_isomorphism(a.lattice(), b.lattice(), &pins, DEFAULT_ISO_CAP)?.is_some())
}

/// Searches pairs of maximal chains, height by height, for one that bounds a
/// genuine diagram. Join-irreducibles of each height must sit on a chain and
/// the chains must coincide exactly at the heights of narrows.
fn find_boundary_pair(l: &FiniteLattice) -> Result<BorderedDiagram, ExtractError> {
    let n = l.length();
    let mut narrow_at = vec![None; n + 1];
    for x in l.narrows() {
        narrow_at[l.height(x)] = Some(x);
    }
    let mut ji_at = vec![Vec::new(); n + 1];
    for x in l.join_irreducibles() {
        ji_at[l.height(x)].push(x);
    }
    let mut left = vec![l.bottom()];
    let mut right = vec![l.bottom()];
    let mut found = None;
    search_pairs(l, &narrow_at, &ji_at, &mut left, &mut right, &mut found)?;
    found.ok_or(ExtractError::NotSlimSemimodular)
}

fn search_pairs(
    l: &FiniteLattice,
    narrow_at: &[Option<usize>],
    ji_at: &[Vec<usize>],
    left: &mut Vec<usize>,
    right: &mut Vec<usize>,
    found: &mut Option<BorderedDiagram>,
) -> Result<(), ExtractError> {
    let h = left.len();
    if h == narrow_at.len() {
        let d = BorderedDiagram::new(l.clone(), left.clone(), right.clone())?;
        if is_genuine(&d)? {
            *found = Some(d);
        }
        return Ok(());
    }
    let (a, b) = (left[h - 1], right[h - 1]);
    for &x in l.upper_covers(a) {
        for &y in l.upper_covers(b) {
            if (x == y) != narrow_at[h].is_some() {
                continue;
            }
            if ji_at[h].iter().any(|&j| j != x && j != y) {
                continue;
            }
            left.push(x);
            right.push(y);
            search_pairs(l, narrow_at, ji_at, left, right, found)?;
            left.pop();
            right.pop();
            if found.is_some() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// A candidate is a diagram iff it is boundary-similar to the canonical
/// diagram of the permutation it yields.
fn is_genuine(d: &BorderedDiagram) -> Result<bool, ExtractError> {
    let Ok(pi) = extract_permutation(d) else {
        return Ok(false);
    };
    boundary_similar(d, &phi0(&pi))
}

/// All diagrams of `l` up to boundary similarity.
///
/// One diagram is found by search; the rest come from reflecting any subset
/// of the indecomposable intervals between consecutive narrows. Reflections
/// that give boundary-similar results are merged.
pub fn diagrams_of(l: &FiniteLattice) -> Result<Vec<BorderedDiagram>, ExtractError> {
    if !l.is_slim() || !l.is_semimodular() {
        return Err(ExtractError::NotSlimSemimodular);
    }
    let base = find_boundary_pair(l)?;
    let heights: Vec<usize> = l.narrows().iter().map(|&x| l.height(x)).collect();
    // single-edge intervals reflect to themselves
    let components: Vec<(usize, usize)> = heights
        .windows(2)
        .map(|w| (w[0], w[1]))
        .filter(|(lo, hi)| hi - lo > 1)
        .collect();
    let mut out: Vec<BorderedDiagram> = Vec::new();
    for mask in 0u64..1 << components.len() {
        let mut left = base.left_chain().to_vec();
        let mut right = base.right_chain().to_vec();
        for (k, &(lo, hi)) in components.iter().enumerate() {
            if mask >> k & 1 == 1 {
                left[lo..=hi].swap_with_slice(&mut right[lo..=hi]);
            }
        }
        let d = BorderedDiagram::new(l.clone(), left, right)?;
        let mut duplicate = false;
        for e in &out {
            if boundary_similar(e, &d)? {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            out.push(d);
        }
    }
    Ok(out)
}

pub fn diagram_count(l: &FiniteLattice) -> Result<usize, ExtractError> {
    Ok(diagrams_of(l)?.len())
}
