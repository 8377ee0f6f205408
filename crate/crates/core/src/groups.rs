//! Two composition series of a cyclic group of squarefree order, the lattice
//! of their intersections, and the permutation matching their factors.
//!
//! Subgroups of a cyclic group correspond to divisors of its order, so
//! intersection is `gcd` and product is `lcm`.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{BorderedDiagram, FiniteLattice};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("prime {0} appears twice")]
    DuplicatePrime(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("product of the primes overflows 64 bits")]
    Overflow,
    #[error("{primes} primes given for a permutation of length {n}")]
    LengthMismatch { primes: usize, n: usize },
    #[error("index ({i}, {j}) is outside 1..={n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("factor {p} of H_{i} differs from factor {q} of K_{j}")]
    FactorMismatch { i: usize, j: usize, p: u64, q: u64 },
}

/// `CSL(H, K)` for `G = Z_{p_1⋯p_n}`, with `H_i` of order `p_1⋯p_i` and
/// `K_j` of order `∏_{s ≤ j} p_{π⁻¹(s)}`. Subgroups are stored as orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicCslInstance {
    pub primes: Vec<u64>,
    pub pi: Permutation,
    pub h_orders: Vec<u64>,
    pub k_orders: Vec<u64>,
    /// `{gcd(H_i, K_j)}`, sorted ascending (a linear extension of divisibility).
    pub elements: Vec<u64>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn first_primes(n: usize) -> Vec<u64> {
    (2..).filter(|&p| is_prime(p)).take(n).collect()
}

fn running_products(factors: impl Iterator<Item = u64>) -> Result<Vec<u64>, GroupError> {
    let mut out = vec![1u64];
    for p in factors {
        let last = *out.last().unwrap();
        out.push(last.checked_mul(p).ok_or(GroupError::Overflow)?);
    }
    Ok(out)
}

pub fn csl_build(primes: &[u64], pi: &Permutation) -> Result<CyclicCslInstance, GroupError> {
    let n = pi.len();
    if primes.len() != n {
        return Err(GroupError::LengthMismatch {
            primes: primes.len(),
            n,
        });
    }
    for (k, &p) in primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        if primes[..k].contains(&p) {
            return Err(GroupError::DuplicatePrime(p));
        }
    }
    let inv = pi.inverse();
    let h_orders = running_products(primes.iter().copied())?;
    let k_orders = running_products((1..=n).map(|s| primes[inv.apply(s) - 1]))?;
    let mut elements: Vec<u64> = h_orders
        .iter()
        .flat_map(|&h| k_orders.iter().map(move |&k| h.gcd(&k)))
        .collect();
    elements.sort_unstable();
    elements.dedup();
    Ok(CyclicCslInstance {
        primes: primes.to_vec(),
        pi: pi.clone(),
        h_orders,
        k_orders,
        elements,
    })
}

impl CyclicCslInstance {
    pub fn n(&self) -> usize {
        self.pi.len()
    }

    /// Position of a subgroup order in [`elements`](Self::elements).
    pub fn index_of(&self, order: u64) -> Option<usize> {
        self.elements.binary_search(&order).ok()
    }

    /// `|H_i / H_{i−1}|`.
    pub fn h_factor(&self, i: usize) -> u64 {
        self.h_orders[i] / self.h_orders[i - 1]
    }

    /// `|K_j / K_{j−1}|`.
    pub fn k_factor(&self, j: usize) -> u64 {
        self.k_orders[j] / self.k_orders[j - 1]
    }

    /// The elements ordered by divisibility.
    pub fn lattice(&self) -> FiniteLattice {
        let e = &self.elements;
        let mut covers = Vec::new();
        for (a, &x) in e.iter().enumerate() {
            for (b, &y) in e.iter().enumerate().skip(a + 1) {
                if y % x == 0
                    && !e
                        .iter()
                        .any(|&z| z != x && z != y && z % x == 0 && y % z == 0)
                {
                    covers.push((a, b));
                }
            }
        }
        FiniteLattice::from_covers(e.len(), &covers).expect("gcd-closed divisor sets are lattices")
    }

    fn chain_indices(&self, orders: &[u64]) -> Vec<usize> {
        orders
            .iter()
            .rev()
            .map(|&o| self.index_of(o).expect("chains lie in the element set"))
            .collect()
    }
}

/// The dual of `CSL(H, K)` with the two series as its chains, read from the
/// top of the group downwards: `c_k = H_{n−k}`, `d_k = K_{n−k}`.
pub fn csl_dual_diagram(inst: &CyclicCslInstance) -> BorderedDiagram {
    let dual = inst.lattice().dual();
    BorderedDiagram::new(
        dual,
        inst.chain_indices(&inst.h_orders),
        inst.chain_indices(&inst.k_orders),
    )
    .expect("reversed composition series are maximal chains of the dual")
}

/// `σ(i)` is the `j` whose factor `K_j / K_{j−1}` has the order of `H_i / H_{i−1}`.
pub fn jordan_holder_permutation(inst: &CyclicCslInstance) -> Permutation {
    let n = inst.n();
    let images = (1..=n)
        .map(|i| {
            (1..=n)
                .find(|&j| inst.k_factor(j) == inst.h_factor(i))
                .expect("both series use every prime once")
        })
        .collect();
    Permutation::new(images).expect("distinct primes give a bijection")
}

/// Orders `(x, y)` of subgroups `X ≤ Y` with `H_{i−1}Y = H_i`,
/// `H_{i−1} ∩ Y = X`, `K_{j−1}Y = K_j` and `K_{j−1} ∩ Y = X`.
pub fn projectivity_witness(
    inst: &CyclicCslInstance,
    i: usize,
    j: usize,
) -> Result<(u64, u64), GroupError> {
    let n = inst.n();
    if i == 0 || j == 0 || i > n || j > n {
        return Err(GroupError::IndexOutOfRange { i, j, n });
    }
    let (p, q) = (inst.h_factor(i), inst.k_factor(j));
    if p != q {
        return Err(GroupError::FactorMismatch { i, j, p, q });
    }
    let (a, b) = (inst.h_orders[i - 1], inst.h_orders[i]);
    let (c, d) = (inst.k_orders[j - 1], inst.k_orders[j]);
    let x = a.gcd(&c);
    let y = p * x;
    debug_assert!(
        a.lcm(&y) == b && a.gcd(&y) == x && c.lcm(&y) == d && c.gcd(&y) == x,
        "witness equations fail at ({i}, {j})"
    );
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    /// All divisors `d` of `G` that equal `gcd(H_i, K_j)` for some pair,
    /// found by scanning every divisor of the group order.
    fn divisor_scan(inst: &CyclicCslInstance) -> Vec<u64> {
        let g = *inst.h_orders.last().unwrap();
        (1..=g)
            .filter(|d| g % d == 0)
            .filter(|&d| {
                inst.h_orders.iter().any(|&h| {
                    inst.k_orders.iter().any(|&k| {
                        let common = (1..=h.min(k)).filter(|t| h % t == 0 && k % t == 0).max();
                        common == Some(d)
                    })
                })
            })
            .collect()
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
        assert!(!is_prime(1) && !is_prime(9) && is_prime(47));
        let product = first_primes(15)
            .iter()
            .try_fold(1u64, |a, &b| a.checked_mul(b));
        assert!(product.is_some());
    }

    #[test]
    fn build_examples() {
        let i = csl_build(&[2], &p(&[1])).unwrap();
        assert_eq!(i.elements, vec![1, 2]);
        let i = csl_build(&[2, 3], &p(&[2, 1])).unwrap();
        assert_eq!(i.elements, vec![1, 2, 3, 6]);
        assert_eq!(i.elements, divisor_scan(&i));
        let i = csl_build(&[2, 3, 5], &p(&[2, 3, 1])).unwrap();
        assert_eq!(i.k_orders, vec![1, 5, 10, 30]);
        assert_eq!(i.elements, vec![1, 2, 5, 6, 10, 30]);
        assert_eq!(i.elements, divisor_scan(&i));
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            csl_build(&[2, 2], &p(&[1, 2])),
            Err(GroupError::DuplicatePrime(2))
        );
        assert_eq!(
            csl_build(&[2, 4], &p(&[1, 2])),
            Err(GroupError::NotPrime(4))
        );
        assert_eq!(
            csl_build(&[2], &p(&[1, 2])),
            Err(GroupError::LengthMismatch { primes: 1, n: 2 })
        );
        let big = first_primes(16);
        assert_eq!(
            csl_build(&big, &Permutation::identity(16)),
            Err(GroupError::Overflow)
        );
    }

    #[test]
    fn elements_match_scan() {
        for n in 1..=4 {
            let primes = first_primes(n);
            for perm in all_permutations(n) {
                let inst = csl_build(&primes, &perm).unwrap();
                assert_eq!(inst.elements, divisor_scan(&inst));
            }
        }
    }

    #[test]
    fn dual_diagram_examples() {
        let i = csl_build(&[2, 3], &p(&[2, 1])).unwrap();
        let d = csl_dual_diagram(&i);
        assert_eq!(d.lattice().size(), 4);
        assert_eq!(d.lattice().covering_squares().len(), 1);
        assert!(d.check_boundary().is_ok());

        let i = csl_build(&[5, 2, 3], &Permutation::identity(3)).unwrap();
        let d = csl_dual_diagram(&i);
        assert_eq!(d.lattice().size(), 4);
        assert_eq!(d.left_chain(), d.right_chain());

        let i = csl_build(&[2, 3, 5], &p(&[2, 3, 1])).unwrap();
        let d = csl_dual_diagram(&i);
        assert_eq!((d.length(), d.lattice().size()), (3, 6));
    }

    #[test]
    fn jordan_holder_examples() {
        let i = csl_build(&[2, 3, 5], &Permutation::identity(3)).unwrap();
        assert_eq!(jordan_holder_permutation(&i), Permutation::identity(3));
        let i = csl_build(&[2, 3], &p(&[2, 1])).unwrap();
        assert_eq!(jordan_holder_permutation(&i), p(&[2, 1]));
        let primes = first_primes(4);
        for perm in all_permutations(4) {
            let inst = csl_build(&primes, &perm).unwrap();
            assert_eq!(jordan_holder_permutation(&inst), perm);
        }
    }

    #[test]
    fn witness_examples() {
        let i = csl_build(&[2, 3], &p(&[2, 1])).unwrap();
        assert_eq!(projectivity_witness(&i, 1, 2), Ok((1, 2)));
        assert!(matches!(
            projectivity_witness(&i, 1, 1),
            Err(GroupError::FactorMismatch { p: 2, q: 3, .. })
        ));
        let id = csl_build(&[2, 3, 5], &Permutation::identity(3)).unwrap();
        for k in 1..=3 {
            assert_eq!(
                projectivity_witness(&id, k, k),
                Ok((id.h_orders[k - 1], id.h_orders[k]))
            );
        }
        assert!(projectivity_witness(&id, 0, 1).is_err());
    }

    #[test]
    fn witness_equations_hold_everywhere() {
        let primes = first_primes(4);
        for perm in all_permutations(4) {
            let inst = csl_build(&primes, &perm).unwrap();
            for i in 1..=4 {
                let j = perm.apply(i);
                let (x, y) = projectivity_witness(&inst, i, j).unwrap();
                let (a, b) = (inst.h_orders[i - 1], inst.h_orders[i]);
                let (c, d) = (inst.k_orders[j - 1], inst.k_orders[j]);
                assert_eq!((a.lcm(&y), a.gcd(&y)), (b, x));
                assert_eq!((c.lcm(&y), c.gcd(&y)), (d, x));
            }
        }
    }
}
