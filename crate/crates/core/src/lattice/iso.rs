//! Brute-force lattice isomorphism.
//!
//! Elements of the source are visited by height; a non-bottom element can
//! only go to an upper cover of the image of one of its lower covers, and
//! must agree on (height, #lower covers, #upper covers). A map that sends
//! lower-cover sets onto lower-cover sets is an order isomorphism.

use super::{FiniteLattice, LatticeError};

pub const DEFAULT_ISO_CAP: usize = 200;

/// An isomorphism `from → to` as a vector of images, if one exists.
pub fn is_isomorphic(
    from: &FiniteLattice,
    to: &FiniteLattice,
    cap: usize,
) -> Result<Option<Vec<usize>>, LatticeError> {
    find_isomorphism(from, to, &[], cap)
}

/// Like [`is_isomorphic`], but every `(x, y)` in `pins` must satisfy `f(x) = y`.
pub fn find_isomorphism(
    from: &FiniteLattice,
    to: &FiniteLattice,
    pins: &[(usize, usize)],
    cap: usize,
) -> Result<Option<Vec<usize>>, LatticeError> {
    for l in [from, to] {
        if l.size() > cap {
            return Err(LatticeError::TooLarge {
                size: l.size(),
                cap,
            });
        }
    }
    if from.size() != to.size() || from.length() != to.length() {
        return Ok(None);
    }
    let mut sig_a: Vec<_> = (0..from.size()).map(|x| from.signature(x)).collect();
    let mut sig_b: Vec<_> = (0..to.size()).map(|x| to.signature(x)).collect();
    sig_a.sort_unstable();
    sig_b.sort_unstable();
    if sig_a != sig_b {
        return Ok(None);
    }

    let n = from.size();
    let mut pinned = vec![None; n];
    let mut used = vec![false; n];
    for &(x, y) in pins {
        if x >= n || y >= n {
            return Ok(None);
        }
        match pinned[x] {
            Some(prev) if prev != y => return Ok(None),
            Some(_) => continue,
            None => {}
        }
        if used[y] || from.signature(x) != to.signature(y) {
            return Ok(None);
        }
        pinned[x] = Some(y);
        used[y] = true;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (from.height(x), x));

    let mut search = Search {
        from,
        to,
        order: &order,
        pinned: &pinned,
        image: vec![usize::MAX; n],
        used,
    };
    Ok(search.extend(0).then_some(search.image))
}

struct Search<'a> {
    from: &'a FiniteLattice,
    to: &'a FiniteLattice,
    order: &'a [usize],
    pinned: &'a [Option<usize>],
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, x: usize, y: usize) -> bool {
        self.from.signature(x) == self.to.signature(y)
            && self
                .from
                .lower_covers(x)
                .iter()
                .all(|&l| self.to.covers(self.image[l], y))
    }

    fn extend(&mut self, depth: usize) -> bool {
        let Some(&x) = self.order.get(depth) else {
            return true;
        };
        if let Some(y) = self.pinned[x] {
            if !self.consistent(x, y) {
                return false;
            }
            self.image[x] = y;
            if self.extend(depth + 1) {
                return true;
            }
            self.image[x] = usize::MAX;
            return false;
        }
        let candidates: Vec<usize> = match self.from.lower_covers(x).first() {
            Some(&l) => self.to.upper_covers(self.image[l]).to_vec(),
            None => vec![self.to.bottom()],
        };
        for y in candidates {
            if self.used[y] || !self.consistent(x, y) {
                continue;
            }
            self.image[x] = y;
            self.used[y] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[y] = false;
            self.image[x] = usize::MAX;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::*;

    /// Verifies that `f` is a bijection preserving the order both ways.
    fn is_order_isomorphism(a: &FiniteLattice, b: &FiniteLattice, f: &[usize]) -> bool {
        let mut seen = vec![false; b.size()];
        for &y in f {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        (0..a.size()).all(|x| (0..a.size()).all(|y| a.leq(x, y) == b.leq(f[x], f[y])))
    }

    #[test]
    fn examples() {
        let b2 = boolean_square();
        let f = is_isomorphic(&b2, &b2, DEFAULT_ISO_CAP).unwrap().unwrap();
        assert!(is_order_isomorphism(&b2, &b2, &f));
        assert!(is_isomorphic(&chain(2), &b2, DEFAULT_ISO_CAP)
            .unwrap()
            .is_none());
        assert!(
            is_isomorphic(&pentagon_n5(), &diamond_m3(), DEFAULT_ISO_CAP)
                .unwrap()
                .is_none()
        );
        assert_eq!(
            is_isomorphic(&chain(300), &chain(300), DEFAULT_ISO_CAP),
            Err(LatticeError::TooLarge {
                size: 301,
                cap: 200
            })
        );
    }

    #[test]
    fn relabelled_copies_are_found() {
        // N5 with shuffled labels
        let n5 = pentagon_n5();
        let relabel = [3, 0, 4, 1, 2];
        let covers: Vec<_> = n5
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| (relabel[a], relabel[b]))
            .collect();
        let copy = FiniteLattice::from_covers(5, &covers).unwrap();
        let f = is_isomorphic(&n5, &copy, DEFAULT_ISO_CAP).unwrap().unwrap();
        assert!(is_order_isomorphism(&n5, &copy, &f));
        assert_eq!(f, relabel.to_vec());
    }

    #[test]
    fn pins_restrict_automorphisms() {
        let b2 = boolean_square();
        let swap = find_isomorphism(&b2, &b2, &[(1, 2)], DEFAULT_ISO_CAP).unwrap();
        assert_eq!(swap, Some(vec![0, 2, 1, 3]));
        assert!(find_isomorphism(&b2, &b2, &[(1, 3)], DEFAULT_ISO_CAP)
            .unwrap()
            .is_none());
        assert!(
            find_isomorphism(&b2, &b2, &[(1, 2), (2, 2)], DEFAULT_ISO_CAP)
                .unwrap()
                .is_none()
        );
    }
}
