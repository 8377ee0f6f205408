use super::{FiniteLattice, LatticeError};

/// A lattice together with a left and a right maximal chain, standing in for
/// a planar diagram up to boundary similarity.
///
/// Chains are listed bottom-up: `left_chain[i] = c_i`, `right_chain[j] = d_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderedDiagram {
    lattice: FiniteLattice,
    left_chain: Vec<usize>,
    right_chain: Vec<usize>,
}

impl BorderedDiagram {
    /// Checks that both chains are maximal chains of `lattice`.
    pub fn new(
        lattice: FiniteLattice,
        left_chain: Vec<usize>,
        right_chain: Vec<usize>,
    ) -> Result<Self, LatticeError> {
        for (name, chain) in [("left", &left_chain), ("right", &right_chain)] {
            if !lattice.is_maximal_chain(chain) {
                return Err(LatticeError::InvalidChain(format!(
                    "{name} chain {chain:?} is not a maximal chain"
                )));
            }
        }
        if left_chain.len() != right_chain.len() {
            return Err(LatticeError::InvalidChain(format!(
                "chains have lengths {} and {}",
                left_chain.len() - 1,
                right_chain.len() - 1
            )));
        }
        Ok(Self {
            lattice,
            left_chain,
            right_chain,
        })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn left_chain(&self) -> &[usize] {
        &self.left_chain
    }

    pub fn right_chain(&self) -> &[usize] {
        &self.right_chain
    }

    /// Common length `n` of the two chains.
    pub fn length(&self) -> usize {
        self.left_chain.len() - 1
    }

    /// `c_i`.
    pub fn c(&self, i: usize) -> usize {
        self.left_chain[i]
    }

    /// `d_j`.
    pub fn d(&self, j: usize) -> usize {
        self.right_chain[j]
    }

    /// The same lattice with left and right exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            lattice: self.lattice.clone(),
            left_chain: self.right_chain.clone(),
            right_chain: self.left_chain.clone(),
        }
    }

    /// Union of the two chains, sorted.
    pub fn boundary(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self
            .left_chain
            .iter()
            .chain(&self.right_chain)
            .copied()
            .collect();
        b.sort_unstable();
        b.dedup();
        b
    }

    /// Necessary conditions for the chains to bound a planar diagram of a slim
    /// semimodular lattice: join-irreducibles lie on the boundary and the
    /// chains meet exactly in the narrows.
    pub fn check_boundary(&self) -> Result<(), LatticeError> {
        let boundary = self.boundary();
        if let Some(j) = self
            .lattice
            .join_irreducibles()
            .into_iter()
            .find(|j| boundary.binary_search(j).is_err())
        {
            return Err(LatticeError::BoundaryViolation(format!(
                "join-irreducible {j} is on neither chain"
            )));
        }
        let mut common: Vec<usize> = self
            .left_chain
            .iter()
            .copied()
            .filter(|x| self.right_chain.contains(x))
            .collect();
        common.sort_unstable();
        let mut narrows = self.lattice.narrows();
        narrows.sort_unstable();
        if common != narrows {
            return Err(LatticeError::BoundaryViolation(format!(
                "chains meet in {common:?} but the narrows are {narrows:?}"
            )));
        }
        Ok(())
    }

    /// The interval `[c_lo, c_hi]` with the two chains cut down to it. Both
    /// ends must be narrows (so they lie on both chains).
    pub fn restrict(&self, lo: usize, hi: usize) -> Option<Self> {
        if self.c(lo) != self.d(lo) || self.c(hi) != self.d(hi) {
            return None;
        }
        let (sub, members) = self.lattice.interval(self.c(lo), self.c(hi))?;
        let reindex = |x: usize| members.binary_search(&x).ok();
        let left = self.left_chain[lo..=hi]
            .iter()
            .map(|&x| reindex(x))
            .collect::<Option<Vec<_>>>()?;
        let right = self.right_chain[lo..=hi]
            .iter()
            .map(|&x| reindex(x))
            .collect::<Option<Vec<_>>>()?;
        Self::new(sub, left, right).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::*;

    #[test]
    fn construction_and_checks() {
        let b2 = BorderedDiagram::new(boolean_square(), vec![0, 1, 3], vec![0, 2, 3]).unwrap();
        assert_eq!(b2.length(), 2);
        assert_eq!(b2.boundary(), vec![0, 1, 2, 3]);
        assert!(b2.check_boundary().is_ok());
        assert_eq!(b2.swapped().left_chain(), &[0, 2, 3]);

        let same = BorderedDiagram::new(boolean_square(), vec![0, 1, 3], vec![0, 1, 3]).unwrap();
        assert!(matches!(
            same.check_boundary(),
            Err(LatticeError::BoundaryViolation(_))
        ));
        assert!(BorderedDiagram::new(boolean_square(), vec![0, 3], vec![0, 2, 3]).is_err());

        let c = chain(2);
        let d = BorderedDiagram::new(c, vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        assert!(d.check_boundary().is_ok());
        let piece = d.restrict(1, 2).unwrap();
        assert_eq!(piece.length(), 1);
        assert!(b2.restrict(1, 2).is_none());
    }
}
