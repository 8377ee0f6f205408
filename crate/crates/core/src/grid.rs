//! Join-congruences of the square grid `C × D` and the quotient construction
//! that turns a permutation into a bordered slim semimodular lattice.
//!
//! Grid points are pairs `(i, j)` with `0 ≤ i, j ≤ n`, standing for
//! `c_i ∨ d_j`. Join is the coordinatewise maximum.

use std::fmt::Write as _;

use thiserror::Error;

use crate::lattice::{BorderedDiagram, FiniteLattice, LatticeError};
use crate::perm::Permutation;

pub type GridPoint = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("cell ({i}, {j}) is outside 1..={n}")]
    CellOutOfRange { i: usize, j: usize, n: usize },
    #[error("point ({i}, {j}) is outside 0..={n}")]
    PointOutOfRange { i: usize, j: usize, n: usize },
    #[error("{0:?} -> {1:?} is not a prime interval of the grid")]
    NotAPrimeInterval(GridPoint, GridPoint),
    #[error("permutation of length {0} does not fit a grid of side {1}")]
    LengthMismatch(usize, usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("quotient is not a lattice: {0}")]
    Lattice(#[from] LatticeError),
}

/// The square grid of length `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points, `(n + 1)²`.
    pub fn len(&self) -> usize {
        (self.n + 1) * (self.n + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, (i, j): GridPoint) -> usize {
        i * (self.n + 1) + j
    }

    pub fn point(&self, index: usize) -> GridPoint {
        (index / (self.n + 1), index % (self.n + 1))
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> {
        let side = self.n + 1;
        (0..side).flat_map(move |i| (0..side).map(move |j| (i, j)))
    }

    pub fn join(a: GridPoint, b: GridPoint) -> GridPoint {
        (a.0.max(b.0), a.1.max(b.1))
    }

    pub fn meet(a: GridPoint, b: GridPoint) -> GridPoint {
        (a.0.min(b.0), a.1.min(b.1))
    }

    fn check_point(&self, (i, j): GridPoint) -> Result<(), GridError> {
        if i > self.n || j > self.n {
            return Err(GridError::PointOutOfRange { i, j, n: self.n });
        }
        Ok(())
    }

    /// All `2n(n + 1)` prime intervals.
    pub fn edges(&self) -> Vec<GridEdge> {
        let mut edges = Vec::new();
        for (i, j) in self.points() {
            if i > 0 {
                edges.push(GridEdge::c_step(i, j));
            }
            if j > 0 {
                edges.push(GridEdge::d_step(i, j));
            }
        }
        edges
    }

    /// All `n²` 4-cells.
    pub fn cells(&self) -> impl Iterator<Item = GridCell> {
        let n = self.n;
        (1..=n).flat_map(move |i| (1..=n).map(move |j| GridCell { i, j }))
    }

    /// The grid as a [`FiniteLattice`], elements numbered by [`Grid::index`].
    pub fn lattice(&self) -> FiniteLattice {
        let covers: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .map(|e| (self.index(e.lower), self.index(e.upper)))
            .collect();
        FiniteLattice::from_covers(self.len(), &covers).expect("grids are lattices")
    }
}

/// The 4-cell whose top is `c_i ∨ d_j`, `1 ≤ i, j ≤ n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridCell {
    pub i: usize,
    pub j: usize,
}

impl GridCell {
    pub fn new(n: usize, i: usize, j: usize) -> Result<Self, GridError> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(GridError::CellOutOfRange { i, j, n });
        }
        Ok(Self { i, j })
    }

    pub fn top(&self) -> GridPoint {
        (self.i, self.j)
    }

    pub fn bottom(&self) -> GridPoint {
        (self.i - 1, self.j - 1)
    }

    /// `c_{i−1} ∨ d_j`.
    pub fn left_coatom(&self) -> GridPoint {
        (self.i - 1, self.j)
    }

    /// `c_i ∨ d_{j−1}`.
    pub fn right_coatom(&self) -> GridPoint {
        (self.i, self.j - 1)
    }
}

/// A prime interval of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridEdge {
    pub lower: GridPoint,
    pub upper: GridPoint,
}

impl GridEdge {
    /// `[c_{i−1} ∨ d_j, c_i ∨ d_j]`.
    pub fn c_step(i: usize, j: usize) -> Self {
        Self {
            lower: (i - 1, j),
            upper: (i, j),
        }
    }

    /// `[c_i ∨ d_{j−1}, c_i ∨ d_j]`.
    pub fn d_step(i: usize, j: usize) -> Self {
        Self {
            lower: (i, j - 1),
            upper: (i, j),
        }
    }
}

/// An equivalence on the grid points, stored as a canonical block id per
/// point (ids numbered by first occurrence in row-major order).
///
/// Values built by the closure engine are join-congruences; [`from_labels`]
/// accepts arbitrary equivalences so that detectors can be tested on them.
///
/// [`from_labels`]: GridCongruence::from_labels
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridCongruence {
    grid: Grid,
    block: Vec<usize>,
}

impl GridCongruence {
    pub fn identity(n: usize) -> Self {
        let grid = Grid::new(n);
        Self {
            grid,
            block: (0..grid.len()).collect(),
        }
    }

    /// Any labelling of the points; equal labels mean the same block.
    pub fn from_labels(n: usize, labels: &[usize]) -> Self {
        let grid = Grid::new(n);
        assert_eq!(labels.len(), grid.len(), "one label per grid point");
        Self {
            grid,
            block: canonical_ids(labels),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn block_of(&self, p: GridPoint) -> usize {
        self.block[self.grid.index(p)]
    }

    pub fn same_block(&self, a: GridPoint, b: GridPoint) -> bool {
        self.block_of(a) == self.block_of(b)
    }

    pub fn block_count(&self) -> usize {
        self.block.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<GridPoint>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (idx, &b) in self.block.iter().enumerate() {
            blocks[b].push(self.grid.point(idx));
        }
        blocks
    }

    pub fn collapses(&self, edge: GridEdge) -> bool {
        self.same_block(edge.lower, edge.upper)
    }

    /// `x ≡ y` implies `x ∨ z ≡ y ∨ z` for all `z`.
    pub fn is_join_congruence(&self) -> bool {
        let points: Vec<GridPoint> = self.grid.points().collect();
        for &x in &points {
            for &y in &points {
                if x < y && self.same_block(x, y) {
                    for &z in &points {
                        if !self.same_block(Grid::join(x, z), Grid::join(y, z)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Blocks of a join-congruence are convex and closed under join.
    pub fn blocks_are_convex_and_join_closed(&self) -> bool {
        self.blocks().iter().all(|members| {
            let top = members.iter().copied().reduce(Grid::join).unwrap();
            let join_closed = self.block_of(top) == self.block_of(members[0]);
            let convex = members.iter().all(|&a| {
                self.grid.points().all(|p| {
                    let between = a.0 <= p.0 && a.1 <= p.1 && p.0 <= top.0 && p.1 <= top.1;
                    !between || self.same_block(p, a)
                })
            });
            join_closed && convex
        })
    }

    /// Greatest element of each block, indexed by block id.
    pub fn block_tops(&self) -> Vec<GridPoint> {
        self.blocks()
            .iter()
            .map(|m| m.iter().copied().reduce(Grid::join).unwrap())
            .collect()
    }

    /// Join in the lattice of join-congruences.
    pub fn join(&self, other: &Self) -> Result<Self, GridError> {
        if self.n() != other.n() {
            return Err(GridError::LengthMismatch(other.n(), self.n()));
        }
        let mut pairs = self.generating_pairs();
        pairs.extend(other.generating_pairs());
        congruence_closure(self.n(), &pairs)
    }

    /// Pairs `(x, first member of x's block)`; they generate the partition.
    fn generating_pairs(&self) -> Vec<(GridPoint, GridPoint)> {
        let mut first = vec![None; self.block_count()];
        let mut pairs = Vec::new();
        for (idx, &b) in self.block.iter().enumerate() {
            let p = self.grid.point(idx);
            match first[b] {
                None => first[b] = Some(p),
                Some(f) => pairs.push((p, f)),
            }
        }
        pairs
    }

    /// Block-id matrix, row `i` holding the ids of `c_i ∨ d_0 .. c_i ∨ d_n`.
    pub fn to_matrix(&self) -> Vec<Vec<usize>> {
        let side = self.n() + 1;
        self.block.chunks(side).map(<[usize]>::to_vec).collect()
    }
}

fn canonical_ids(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

/// Smallest join-congruence of the grid containing `pairs`.
///
/// Every union that actually merges two classes is queued; processing a
/// queued pair `(x, y)` merges `x ∨ z` with `y ∨ z` for every point `z`.
/// Pairs that were already equivalent need no processing, since their
/// translates follow from the merges that made them equivalent.
pub fn congruence_closure(
    n: usize,
    pairs: &[(GridPoint, GridPoint)],
) -> Result<GridCongruence, GridError> {
    let grid = Grid::new(n);
    let mut uf = UnionFind::new(grid.len());
    let mut queue = Vec::new();
    for &(a, b) in pairs {
        grid.check_point(a)?;
        grid.check_point(b)?;
        if uf.union(grid.index(a), grid.index(b)) {
            queue.push((a, b));
        }
    }
    let points: Vec<GridPoint> = grid.points().collect();
    while let Some((x, y)) = queue.pop() {
        for &z in &points {
            let (xz, yz) = (Grid::join(x, z), Grid::join(y, z));
            if uf.union(grid.index(xz), grid.index(yz)) {
                queue.push((xz, yz));
            }
        }
    }
    Ok(GridCongruence::from_labels(n, &uf.labels()))
}

/// Smallest join-congruence collapsing the two coatoms of `cell` with its top.
pub fn jcong_cell(n: usize, cell: GridCell) -> Result<GridCongruence, GridError> {
    let cell = GridCell::new(n, cell.i, cell.j)?;
    congruence_closure(
        n,
        &[
            (cell.left_coatom(), cell.top()),
            (cell.right_coatom(), cell.top()),
        ],
    )
}

fn check_perm(n: usize, perm: &Permutation) -> Result<(), GridError> {
    if perm.len() != n {
        return Err(GridError::LengthMismatch(perm.len(), n));
    }
    Ok(())
}

/// `β_π`: the join of the cell congruences at `(i, π(i))`.
pub fn beta_from_perm(grid: Grid, perm: &Permutation) -> Result<GridCongruence, GridError> {
    check_perm(grid.n, perm)?;
    let mut pairs = Vec::with_capacity(2 * grid.n);
    for i in 1..=grid.n {
        let cell = GridCell {
            i,
            j: perm.apply(i),
        };
        pairs.push((cell.left_coatom(), cell.top()));
        pairs.push((cell.right_coatom(), cell.top()));
    }
    let beta = congruence_closure(grid.n, &pairs)?;
    debug_assert_eq!(
        beta,
        beta_by_formula(grid, perm)?,
        "closure and closed form disagree for {perm}"
    );
    Ok(beta)
}

/// Closed-form membership of a prime interval in `β_π`: a `c`-step
/// `[c_{i−1} ∨ d_j, c_i ∨ d_j]` is collapsed iff `π(i) ≤ j`, a `d`-step
/// `[c_i ∨ d_{j−1}, c_i ∨ d_j]` iff `π⁻¹(j) ≤ i`.
pub fn beta_formula(n: usize, perm: &Permutation, edge: GridEdge) -> Result<bool, GridError> {
    check_perm(n, perm)?;
    let ((a, b), (i, j)) = (edge.lower, edge.upper);
    if i > n || j > n {
        return Err(GridError::NotAPrimeInterval(edge.lower, edge.upper));
    }
    if a + 1 == i && b == j {
        Ok(perm.apply(i) <= j)
    } else if a == i && b + 1 == j {
        Ok(perm.inverse().apply(j) <= i)
    } else {
        Err(GridError::NotAPrimeInterval(edge.lower, edge.upper))
    }
}

/// `β_π` assembled from [`beta_formula`] alone: the equivalence generated by
/// the collapsed prime intervals, with no join-closure step.
pub fn beta_by_formula(grid: Grid, perm: &Permutation) -> Result<GridCongruence, GridError> {
    check_perm(grid.n, perm)?;
    let mut uf = UnionFind::new(grid.len());
    for edge in grid.edges() {
        if beta_formula(grid.n, perm, edge)? {
            uf.union(grid.index(edge.lower), grid.index(edge.upper));
        }
    }
    Ok(GridCongruence::from_labels(grid.n, &uf.labels()))
}

/// Cells whose block pattern witnesses a failure of cover preservation: the
/// blocks of both coatoms and the bottom are distinct while the top shares a
/// block with one coatom.
pub fn forbidden_cells(kappa: &GridCongruence) -> Vec<GridCell> {
    kappa
        .grid
        .cells()
        .filter(|cell| {
            let (a, b) = (
                kappa.block_of(cell.left_coatom()),
                kappa.block_of(cell.right_coatom()),
            );
            let (w, t) = (kappa.block_of(cell.bottom()), kappa.block_of(cell.top()));
            a != b && a != w && b != w && (t == a || t == b)
        })
        .collect()
}

pub fn is_cover_preserving(kappa: &GridCongruence) -> bool {
    forbidden_cells(kappa).is_empty()
}

/// Cells whose coatoms are congruent to the top but whose bottom is not.
pub fn source_cells(kappa: &GridCongruence) -> Vec<GridCell> {
    kappa
        .grid
        .cells()
        .filter(|cell| {
            let t = kappa.block_of(cell.top());
            kappa.block_of(cell.left_coatom()) == t
                && kappa.block_of(cell.right_coatom()) == t
                && kappa.block_of(cell.bottom()) != t
        })
        .collect()
}

/// Rebuilds a cover-preserving join-congruence from its source cells.
///
/// Requires a join-congruence with no forbidden cell that collapses no prime
/// interval of the two lower boundary chains.
pub fn regenerate(kappa: &GridCongruence) -> Result<GridCongruence, GridError> {
    let n = kappa.n();
    if !kappa.is_join_congruence() {
        return Err(GridError::HypothesisViolated(
            "not a join-congruence".into(),
        ));
    }
    for k in 1..=n {
        if kappa.same_block((k - 1, 0), (k, 0)) {
            return Err(GridError::HypothesisViolated(format!(
                "boundary edge (c_{}, c_{k}) is collapsed",
                k - 1
            )));
        }
        if kappa.same_block((0, k - 1), (0, k)) {
            return Err(GridError::HypothesisViolated(format!(
                "boundary edge (d_{}, d_{k}) is collapsed",
                k - 1
            )));
        }
    }
    if let Some(cell) = forbidden_cells(kappa).first() {
        return Err(GridError::HypothesisViolated(format!(
            "cell ({}, {}) is forbidden",
            cell.i, cell.j
        )));
    }
    source_cells(kappa)
        .into_iter()
        .try_fold(GridCongruence::identity(n), |acc, cell| {
            acc.join(&jcong_cell(n, cell)?)
        })
}

/// The quotient `G/κ` with its two boundary chains, plus the grid point that
/// represents each quotient element (the top of its block).
#[derive(Debug, Clone)]
pub struct GridQuotient {
    pub diagram: BorderedDiagram,
    pub congruence: GridCongruence,
    /// `tops[x]` is the greatest grid point of the block of element `x`.
    pub tops: Vec<GridPoint>,
}

impl GridQuotient {
    /// Element of the quotient containing grid point `p`.
    pub fn element_of(&self, p: GridPoint) -> usize {
        let top = self.congruence.block_tops()[self.congruence.block_of(p)];
        self.tops
            .binary_search_by_key(&self.congruence.grid.index(top), |&t| {
                self.congruence.grid.index(t)
            })
            .expect("every block has a top")
    }
}

/// Builds `G/κ` for a join-congruence `κ`. Elements are numbered by the
/// row-major position of their block tops, which is a linear extension of
/// the quotient order.
pub fn quotient(kappa: &GridCongruence) -> Result<GridQuotient, GridError> {
    if !kappa.is_join_congruence() {
        return Err(GridError::HypothesisViolated(
            "not a join-congruence".into(),
        ));
    }
    let grid = kappa.grid;
    let block_tops = kappa.block_tops();
    let mut by_top: Vec<usize> = (0..block_tops.len()).collect();
    by_top.sort_by_key(|&b| grid.index(block_tops[b]));
    let mut element_of_block = vec![0; block_tops.len()];
    for (x, &b) in by_top.iter().enumerate() {
        element_of_block[b] = x;
    }
    let tops: Vec<GridPoint> = by_top.iter().map(|&b| block_tops[b]).collect();
    let size = tops.len();

    // X ≤ Y iff top(X) ∨ top(Y) lies in Y
    let leq =
        |x: usize, y: usize| element_of_block[kappa.block_of(Grid::join(tops[x], tops[y]))] == y;
    let mut covers = Vec::new();
    for x in 0..size {
        for y in 0..size {
            if x != y && leq(x, y) && !(0..size).any(|z| z != x && z != y && leq(x, z) && leq(z, y))
            {
                covers.push((x, y));
            }
        }
    }
    let lattice = FiniteLattice::from_covers(size, &covers)?;
    let n = grid.n;
    let left: Vec<usize> = (0..=n)
        .map(|i| element_of_block[kappa.block_of((i, 0))])
        .collect();
    let right: Vec<usize> = (0..=n)
        .map(|j| element_of_block[kappa.block_of((0, j))])
        .collect();
    let diagram = BorderedDiagram::new(lattice, left, right)?;
    Ok(GridQuotient {
        diagram,
        congruence: kappa.clone(),
        tops,
    })
}

/// `G/β_π` with all intermediate data.
pub fn phi0_quotient(perm: &Permutation) -> GridQuotient {
    let beta = beta_from_perm(Grid::new(perm.len()), perm).expect("lengths agree");
    quotient(&beta).expect("β_π is a cover-preserving join-congruence")
}

/// The canonical bordered diagram of `G/β_π`.
pub fn phi0(perm: &Permutation) -> BorderedDiagram {
    phi0_quotient(perm).diagram
}

/// ASCII grid matrix: row `i`, column `j`, `#` marks a marked cell.
pub fn render_cells(n: usize, marked: &[GridCell]) -> String {
    let width = n.to_string().len();
    let mut out = String::new();
    let _ = write!(out, "{:>width$} ", "");
    for j in 1..=n {
        let _ = write!(out, " {j:>width$}");
    }
    out.push('\n');
    for i in 1..=n {
        let _ = write!(out, "{i:>width$} ");
        for j in 1..=n {
            let mark = if marked.contains(&GridCell { i, j }) {
                "#"
            } else {
                "."
            };
            let _ = write!(out, " {mark:>width$}");
        }
        out.push('\n');
    }
    out
}

/// The grid matrix of `π`: cells `(i, π(i))` marked.
pub fn render_grid_matrix(perm: &Permutation) -> String {
    let cells: Vec<GridCell> = (1..=perm.len())
        .map(|i| GridCell {
            i,
            j: perm.apply(i),
        })
        .collect();
    render_cells(perm.len(), &cells)
}
