//! JSON wire formats.
//!
//! A lattice or diagram is `{"size", "covers": [[lo, hi], ..], "left_chain",
//! "right_chain"}`; the chains are optional but come as a pair.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::GridCongruence;
use crate::lattice::{BorderedDiagram, FiniteLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("only one of left_chain and right_chain is given")]
    MissingChain,
    #[error("grid matrix is not {0}×{0}")]
    BadMatrix(usize),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_chain: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_chain: Option<Vec<usize>>,
}

impl DiagramJson {
    pub fn from_lattice(l: &FiniteLattice) -> Self {
        Self {
            size: l.size(),
            covers: l.cover_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
            left_chain: None,
            right_chain: None,
        }
    }

    pub fn from_diagram(d: &BorderedDiagram) -> Self {
        Self {
            left_chain: Some(d.left_chain().to_vec()),
            right_chain: Some(d.right_chain().to_vec()),
            ..Self::from_lattice(d.lattice())
        }
    }

    pub fn lattice(&self) -> Result<FiniteLattice, IoError> {
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        Ok(FiniteLattice::from_covers(self.size, &covers)?)
    }

    /// `None` when no chains are given.
    pub fn diagram(&self) -> Result<Option<BorderedDiagram>, IoError> {
        match (&self.left_chain, &self.right_chain) {
            (None, None) => Ok(None),
            (Some(l), Some(r)) => Ok(Some(BorderedDiagram::new(
                self.lattice()?,
                l.clone(),
                r.clone(),
            )?)),
            _ => Err(IoError::MissingChain),
        }
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// A grid congruence as its side length and block-id matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceJson {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl CongruenceJson {
    pub fn from_congruence(kappa: &GridCongruence) -> Self {
        Self {
            n: kappa.n(),
            blocks: kappa.to_matrix(),
        }
    }

    pub fn congruence(&self) -> Result<GridCongruence, IoError> {
        let side = self.n + 1;
        if self.blocks.len() != side || self.blocks.iter().any(|row| row.len() != side) {
            return Err(IoError::BadMatrix(side));
        }
        let labels: Vec<usize> = self.blocks.concat();
        Ok(GridCongruence::from_labels(self.n, &labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{beta_from_perm, phi0, Grid};
    use crate::perm::Permutation;

    #[test]
    fn diagram_round_trip() {
        let d = phi0(&Permutation::new(vec![2, 3, 1]).unwrap());
        let text = DiagramJson::from_diagram(&d).to_json();
        let back = DiagramJson::parse(&text)
            .unwrap()
            .diagram()
            .unwrap()
            .unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn chains_are_optional_but_paired() {
        let text = r#"{"size": 2, "covers": [[0, 1]]}"#;
        let j = DiagramJson::parse(text).unwrap();
        assert_eq!(j.diagram().unwrap(), None);
        assert_eq!(j.lattice().unwrap().size(), 2);
        assert!(!j.to_json().contains("left_chain"));
        let text = r#"{"size": 2, "covers": [[0, 1]], "left_chain": [0, 1]}"#;
        assert_eq!(
            DiagramJson::parse(text).unwrap().diagram(),
            Err(IoError::MissingChain)
        );
        assert!(matches!(DiagramJson::parse("{"), Err(IoError::Json(_))));
        let cyclic = r#"{"size": 2, "covers": [[0, 1], [1, 0]]}"#;
        assert!(matches!(
            DiagramJson::parse(cyclic).unwrap().lattice(),
            Err(IoError::Lattice(_))
        ));
    }

    #[test]
    fn congruence_round_trip() {
        let beta = beta_from_perm(Grid::new(3), &Permutation::new(vec![3, 1, 2]).unwrap()).unwrap();
        let j = CongruenceJson::from_congruence(&beta);
        let text = serde_json::to_string(&j).unwrap();
        let back: CongruenceJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.congruence().unwrap(), beta);
        let bad = CongruenceJson {
            n: 1,
            blocks: vec![vec![0, 1]],
        };
        assert_eq!(bad.congruence(), Err(IoError::BadMatrix(2)));
    }
}
