//! Finite lattices given by their cover relation.
//!
//! Validation computes the full order together with join and meet tables, so
//! every later query is a table lookup. Sizes are desk-scale (a few hundred
//! elements at most).

mod diagram;
mod iso;

pub use diagram::BorderedDiagram;
pub use iso::{find_isomorphism, is_isomorphic, DEFAULT_ISO_CAP};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("element index {index} is out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("cover relation contains a cycle")]
    Cyclic,
    #[error("({lower}, {upper}) is implied by transitivity and is not a cover")]
    NotReduced { lower: usize, upper: usize },
    #[error("elements {0} and {1} have no {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("lattice has {size} elements, above the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("chains do not form a boundary: {0}")]
    BoundaryViolation(String),
}

/// A validated finite lattice on elements `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    height: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds and validates a lattice from `(lower, upper)` cover pairs.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        let mut upper = vec![Vec::new(); size];
        let mut lower = vec![Vec::new(); size];
        for &(a, b) in covers {
            for index in [a, b] {
                if index >= size {
                    return Err(LatticeError::IndexOutOfRange { index, size });
                }
            }
            if a == b {
                return Err(LatticeError::Cyclic);
            }
            upper[a].push(b);
            lower[b].push(a);
        }
        for list in upper.iter_mut().chain(lower.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }

        // Kahn's algorithm
        let mut indegree: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut order: Vec<usize> = (0..size).filter(|&x| indegree[x] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in &upper[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    order.push(y);
                }
            }
        }
        if order.len() != size {
            return Err(LatticeError::Cyclic);
        }

        let mut leq = vec![false; size * size];
        let mut height = vec![0; size];
        for &x in &order {
            leq[x * size + x] = true;
            for &l in &lower[x] {
                height[x] = height[x].max(height[l] + 1);
                for z in 0..size {
                    if leq[z * size + l] {
                        leq[z * size + x] = true;
                    }
                }
            }
        }
        for (b, below) in lower.iter().enumerate() {
            for &a in below {
                if below.iter().any(|&c| c != a && leq[a * size + c]) {
                    return Err(LatticeError::NotReduced { lower: a, upper: b });
                }
            }
        }

        let bottom = (0..size)
            .find(|&x| (0..size).all(|y| leq[x * size + y]))
            .ok_or(LatticeError::NotALattice(
                order[0],
                order[0],
                "least element",
            ))?;
        let top = (0..size)
            .find(|&x| (0..size).all(|y| leq[y * size + x]))
            .ok_or(LatticeError::NotALattice(
                order[size - 1],
                order[size - 1],
                "greatest element",
            ))?;

        let mut join = vec![0; size * size];
        let mut meet = vec![0; size * size];
        for a in 0..size {
            for b in a..size {
                let j = least_bound(
                    &order,
                    |x| leq[a * size + x] && leq[b * size + x],
                    |x, y| leq[x * size + y],
                )
                .ok_or(LatticeError::NotALattice(a, b, "join"))?;
                let m = least_bound(
                    order.iter().rev().copied().collect::<Vec<_>>().as_slice(),
                    |x| leq[x * size + a] && leq[x * size + b],
                    |x, y| leq[y * size + x],
                )
                .ok_or(LatticeError::NotALattice(a, b, "meet"))?;
                join[a * size + b] = j;
                join[b * size + a] = j;
                meet[a * size + b] = m;
                meet[b * size + a] = m;
            }
        }

        Ok(Self {
            size,
            upper,
            lower,
            leq,
            join,
            meet,
            height,
            bottom,
            top,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn covers(&self, lower: usize, upper: usize) -> bool {
        self.upper[lower].binary_search(&upper).is_ok()
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn height(&self, x: usize) -> usize {
        self.height[x]
    }

    /// Length of the lattice (height of the top).
    pub fn length(&self) -> usize {
        self.height[self.top]
    }

    /// All `(lower, upper)` cover pairs, sorted.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|a| self.upper[a].iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Whether all maximal chains of every `[0, x]` have equal length.
    pub fn is_graded(&self) -> bool {
        (0..self.size).all(|x| {
            self.lower[x]
                .iter()
                .all(|&l| self.height[l] + 1 == self.height[x])
        })
    }

    /// Upper semimodularity: `a ≺ b` implies `a ∨ c = b ∨ c` or `a ∨ c ≺ b ∨ c`.
    pub fn is_semimodular(&self) -> bool {
        self.cover_pairs().into_iter().all(|(a, b)| {
            (0..self.size).all(|c| {
                let ac = self.join(a, c);
                let bc = self.join(b, c);
                ac == bc || self.covers(ac, bc)
            })
        })
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| self.lower[x].len() == 1)
            .collect()
    }

    /// Elements with exactly one upper cover.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| self.upper[x].len() == 1)
            .collect()
    }

    /// No three pairwise incomparable join-irreducible elements.
    pub fn is_slim(&self) -> bool {
        !has_three_antichain(self, &self.join_irreducibles())
    }

    /// No three pairwise incomparable meet-irreducible elements.
    pub fn is_dually_slim(&self) -> bool {
        self.dual().is_slim()
    }

    /// Elements comparable with every element, sorted by height.
    pub fn narrows(&self) -> Vec<usize> {
        let mut nar: Vec<usize> = (0..self.size)
            .filter(|&x| (0..self.size).all(|y| self.comparable(x, y)))
            .collect();
        nar.sort_by_key(|&x| self.height[x]);
        nar
    }

    /// Glued-sum indecomposable: a single element, or exactly two narrows and
    /// more than two elements.
    pub fn is_indecomposable(&self) -> bool {
        self.size == 1 || (self.narrows().len() == 2 && self.size > 2)
    }

    /// The order dual, on the same element indices.
    pub fn dual(&self) -> Self {
        let covers: Vec<(usize, usize)> = self
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| (b, a))
            .collect();
        Self::from_covers(self.size, &covers).expect("dual of a lattice is a lattice")
    }

    /// Four-element cover-preserving sublattices `[w, a, b, t]` with `a < b`
    /// (as indices), `w ≺ a, b ≺ t`.
    pub fn covering_squares(&self) -> Vec<[usize; 4]> {
        let mut squares = Vec::new();
        for w in 0..self.size {
            let ups = &self.upper[w];
            for (k, &a) in ups.iter().enumerate() {
                for &b in &ups[k + 1..] {
                    let t = self.join(a, b);
                    if self.covers(a, t) && self.covers(b, t) {
                        squares.push([w, a, b, t]);
                    }
                }
            }
        }
        squares
    }

    /// Whether `chain` is a maximal chain listed bottom-up.
    pub fn is_maximal_chain(&self, chain: &[usize]) -> bool {
        chain.first() == Some(&self.bottom)
            && chain.last() == Some(&self.top)
            && chain.iter().all(|&x| x < self.size)
            && chain.windows(2).all(|w| self.covers(w[0], w[1]))
    }

    /// The interval `[lo, hi]` as a lattice of its own, together with the map
    /// from new indices to old ones (increasing).
    pub fn interval(&self, lo: usize, hi: usize) -> Option<(FiniteLattice, Vec<usize>)> {
        if !self.leq(lo, hi) {
            return None;
        }
        let members: Vec<usize> = (0..self.size)
            .filter(|&x| self.leq(lo, x) && self.leq(x, hi))
            .collect();
        let mut index = vec![usize::MAX; self.size];
        for (k, &x) in members.iter().enumerate() {
            index[x] = k;
        }
        let covers: Vec<(usize, usize)> = self
            .cover_pairs()
            .into_iter()
            .filter(|&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|(a, b)| (index[a], index[b]))
            .collect();
        let sub = Self::from_covers(members.len(), &covers).expect("intervals are lattices");
        Some((sub, members))
    }

    /// Invariant used to prune isomorphism search: (height, #lower, #upper).
    pub(crate) fn signature(&self, x: usize) -> (usize, usize, usize) {
        (self.height[x], self.lower[x].len(), self.upper[x].len())
    }
}

/// First element in `order` satisfying `is_bound` that lies below every other
/// bound; `None` when the minimal bounds are not unique.
fn least_bound(
    order: &[usize],
    is_bound: impl Fn(usize) -> bool,
    below: impl Fn(usize, usize) -> bool,
) -> Option<usize> {
    let bounds: Vec<usize> = order.iter().copied().filter(|&x| is_bound(x)).collect();
    let candidate = *bounds.first()?;
    bounds
        .iter()
        .all(|&y| below(candidate, y))
        .then_some(candidate)
}

fn has_three_antichain(lattice: &FiniteLattice, elems: &[usize]) -> bool {
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate().skip(i + 1) {
            if lattice.comparable(a, b) {
                continue;
            }
            for &c in &elems[j + 1..] {
                if !lattice.comparable(a, c) && !lattice.comparable(b, c) {
                    return true;
                }
            }
        }
    }
    false
}

/// Small named lattices used across tests and examples.
pub mod samples {
    use super::FiniteLattice;

    /// The chain `0 ≺ 1 ≺ ... ≺ len`.
    pub fn chain(len: usize) -> FiniteLattice {
        let covers: Vec<(usize, usize)> = (0..len).map(|k| (k, k + 1)).collect();
        FiniteLattice::from_covers(len + 1, &covers).unwrap()
    }

    /// `0 < a=1, b=2 < 1=3`.
    pub fn boolean_square() -> FiniteLattice {
        FiniteLattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// `0 < 1, 2, 3 < 4`.
    pub fn diamond_m3() -> FiniteLattice {
        FiniteLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    /// `0 < a=1 < b=2 < 1=4`, `0 < c=3 < 4`.
    pub fn pentagon_n5() -> FiniteLattice {
        FiniteLattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
    }
}
