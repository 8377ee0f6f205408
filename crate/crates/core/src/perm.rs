//! Permutations of `{1, ..., n}` in one-line notation, their sections and
//! segments, and the "sectionally inverted or equal" equivalence.
//!
//! Indices are 1-based throughout: `images[i - 1]` is the image of `i`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap for exhaustive enumeration of `S_n`.
pub const DEFAULT_ENUMERATION_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("value {0} appears more than once")]
    DuplicateValue(usize),
    #[error("value {value} is outside 1..={n}")]
    OutOfRange { value: usize, n: usize },
    #[error("interval {{{first}..{last}}} is not contained in 1..={n}")]
    IntervalOutOfRange { first: usize, last: usize, n: usize },
    #[error("permutations have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// A permutation of `{1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    /// Validates a one-line image sequence.
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n {
                return Err(PermError::OutOfRange { value: v, n });
            }
            if seen[v] {
                return Err(PermError::DuplicateValue(v));
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (1..=n).collect(),
        }
    }

    /// Parses `"2,3,1"` (one-line) or `"(1 2 3)(4 5)"` (cycles).
    ///
    /// Cycle notation needs the degree: it is the largest value mentioned
    /// unless `degree` is given.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let text = text.trim();
        if text.starts_with('(') {
            return Self::parse_cycles(text, degree);
        }
        if text.is_empty() {
            return Self::new(Vec::new());
        }
        let images = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| PermError::Parse(format!("not an integer: {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let perm = Self::new(images)?;
        if let Some(d) = degree {
            if d != perm.len() {
                return Err(PermError::LengthMismatch(perm.len(), d));
            }
        }
        Ok(perm)
    }

    fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Parse(format!("expected '(' at {rest:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| PermError::Parse("unbalanced parenthesis".into()))?;
            let cycle = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("not an integer: {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        let largest = cycles.iter().flatten().copied().max().unwrap_or(0);
        let n = degree.unwrap_or(largest);
        let mut images: Vec<usize> = (1..=n).collect();
        let mut moved = vec![false; n + 1];
        for cycle in &cycles {
            for (k, &v) in cycle.iter().enumerate() {
                if v == 0 || v > n {
                    return Err(PermError::OutOfRange { value: v, n });
                }
                if moved[v] {
                    return Err(PermError::DuplicateValue(v));
                }
                moved[v] = true;
                images[v - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of `i` (1-based).
    ///
    /// Panics if `i` is not in `1..=n`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { images: inv }
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Self) -> Result<Self, PermError> {
        if self.len() != other.len() {
            return Err(PermError::LengthMismatch(self.len(), other.len()));
        }
        Ok(Self {
            images: other.images.iter().map(|&v| self.apply(v)).collect(),
        })
    }

    pub fn is_involution(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| self.apply(v) == i + 1)
    }

    /// Conjugation by the order-reversing map `i ↦ n + 1 − i`.
    pub fn reversed_conjugate(&self) -> Self {
        let n = self.len();
        let mut images = vec![0; n];
        for i in 1..=n {
            images[n - i] = n + 1 - self.apply(i);
        }
        Self { images }
    }

    fn check_interval(&self, interval: Interval) -> Result<(), PermError> {
        if interval.hi > self.len() || interval.lo > interval.hi {
            return Err(PermError::IntervalOutOfRange {
                first: interval.lo + 1,
                last: interval.hi,
                n: self.len(),
            });
        }
        Ok(())
    }

    /// Whether `σ(i) ∈ I` for every `i ∈ I`. The empty interval is closed.
    pub fn is_closed(&self, interval: Interval) -> Result<bool, PermError> {
        self.check_interval(interval)?;
        Ok(interval.iter().all(|i| interval.contains(self.apply(i))))
    }

    /// A nonempty interval whose left part, itself and right part are all closed.
    pub fn is_section(&self, interval: Interval) -> Result<bool, PermError> {
        self.check_interval(interval)?;
        if interval.is_empty() {
            return Ok(false);
        }
        Ok(self.is_closed(Interval::prefix(interval.lo))?
            && self.is_closed(interval)?
            && self.is_closed(Interval::new(interval.hi, self.len()))?)
    }

    /// Restriction to a closed interval, reindexed to `{1, ..., |I|}`.
    pub fn restrict(&self, interval: Interval) -> Result<Self, PermError> {
        if !self.is_closed(interval)? {
            return Err(PermError::Parse(format!(
                "interval {interval} is not closed under the permutation"
            )));
        }
        Ok(Self {
            images: interval
                .iter()
                .map(|i| self.apply(i) - interval.lo)
                .collect(),
        })
    }

    /// The partition of `{1, ..., n}` into minimal sections.
    ///
    /// A cut after `k` is possible exactly when `σ` maps `{1..k}` onto itself,
    /// i.e. when the running maximum of the images equals `k`.
    pub fn segments(&self) -> SegmentPartition {
        let mut cuts = vec![0];
        let mut running_max = 0;
        for (k, &v) in self.images.iter().enumerate() {
            running_max = running_max.max(v);
            if running_max == k + 1 {
                cuts.push(k + 1);
            }
        }
        SegmentPartition { cuts }
    }

    /// One-line notation, `"2,3,1"`.
    pub fn one_line(&self) -> String {
        self.images
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Cycle notation without fixed points; the identity prints as `"()"`.
    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.len() + 1];
        let mut out = String::new();
        for start in 1..=self.len() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x.to_string());
                x = self.apply(x);
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.one_line())
    }
}

/// The interval `{lo + 1, ..., hi}` of `{1, ..., n}`; empty when `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }

    /// `{first, ..., last}` with `1 ≤ first ≤ last`.
    pub fn closed(first: usize, last: usize) -> Self {
        assert!(first >= 1 && first <= last + 1, "bad interval bounds");
        Self {
            lo: first - 1,
            hi: last,
        }
    }

    pub fn empty() -> Self {
        Self { lo: 0, hi: 0 }
    }

    /// `{1, ..., k}`.
    pub fn prefix(k: usize) -> Self {
        Self { lo: 0, hi: k }
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn len(&self) -> usize {
        self.hi.saturating_sub(self.lo)
    }

    pub fn contains(&self, i: usize) -> bool {
        i > self.lo && i <= self.hi
    }

    pub fn first(&self) -> usize {
        self.lo + 1
    }

    pub fn last(&self) -> usize {
        self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.lo + 1..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{{{}..{}}}", self.first(), self.last())
        }
    }
}

/// Consecutive intervals partitioning `{1, ..., n}`, given by their cut points
/// `0 = u_0 < u_1 < ... < u_t = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SegmentPartition {
    cuts: Vec<usize>,
}

impl SegmentPartition {
    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn n(&self) -> usize {
        *self.cuts.last().unwrap_or(&0)
    }

    pub fn len(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Interval> + '_ {
        self.cuts.windows(2).map(|w| Interval::new(w[0], w[1]))
    }

    /// The segment containing `i`, written `[i]_σ`.
    pub fn segment_of(&self, i: usize) -> Option<Interval> {
        self.iter().find(|s| s.contains(i))
    }

    /// Segments as explicit member lists.
    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.iter().map(|s| s.iter().collect()).collect()
    }
}

/// Whether `σ` and `μ` are sectionally inverted or equal.
pub fn rho_equivalent(sigma: &Permutation, mu: &Permutation) -> Result<bool, PermError> {
    if sigma.len() != mu.len() {
        return Err(PermError::LengthMismatch(sigma.len(), mu.len()));
    }
    let segs = sigma.segments();
    if segs != mu.segments() {
        return Ok(false);
    }
    for seg in segs.iter() {
        let s = sigma.restrict(seg)?;
        let m = mu.restrict(seg)?;
        if m != s && m != s.inverse() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every member of the ρ-class of `σ`, sorted lexicographically.
pub fn rho_class(sigma: &Permutation) -> Vec<Permutation> {
    let mut class = BTreeSet::new();
    class.insert(sigma.clone());
    for seg in sigma.segments().iter() {
        let inverted: Vec<Permutation> = class.iter().map(|p| invert_on(p, seg)).collect();
        class.extend(inverted);
    }
    class.into_iter().collect()
}

/// `∏ (1 if σ|_I is an involution else 2)` over the segments.
pub fn rho_class_size(sigma: &Permutation) -> usize {
    sigma
        .segments()
        .iter()
        .map(|seg| {
            if invert_on(sigma, seg) == *sigma {
                1
            } else {
                2
            }
        })
        .product()
}

/// The lexicographically least member of the ρ-class.
///
/// Segments occupy consecutive positions, so the minimum is taken segment by
/// segment.
pub fn canonical_rep(sigma: &Permutation) -> Permutation {
    let mut images = sigma.images.clone();
    for seg in sigma.segments().iter() {
        let range = seg.lo..seg.hi;
        let inverted = invert_on(sigma, seg);
        if inverted.images[range.clone()] < images[range.clone()] {
            images[range.clone()].copy_from_slice(&inverted.images[range]);
        }
    }
    Permutation { images }
}

/// Replaces `σ|_I` by its inverse; `I` must be closed.
fn invert_on(sigma: &Permutation, interval: Interval) -> Permutation {
    let mut images = sigma.images.clone();
    for i in interval.iter() {
        images[sigma.apply(i) - 1] = i;
    }
    Permutation { images }
}

/// All permutations of `{1, ..., n}` in lexicographic order.
pub fn all_permutations(n: usize) -> AllPermutations {
    AllPermutations {
        next: Some((1..=n).collect()),
    }
}

pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let Some(i) = (0..a.len() - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

fn check_cap(n: usize, cap: usize) -> Result<(), PermError> {
    if n > cap {
        Err(PermError::TooLarge { n, cap })
    } else {
        Ok(())
    }
}

/// Canonical representatives of `S_n / ρ`, in lexicographic order.
pub fn enumerate_reps(n: usize, cap: usize) -> Result<Vec<Permutation>, PermError> {
    check_cap(n, cap)?;
    Ok(all_permutations(n)
        .filter(|p| canonical_rep(p) == *p)
        .collect())
}

/// `|S_n / ρ|`.
pub fn count_classes(n: usize, cap: usize) -> Result<usize, PermError> {
    check_cap(n, cap)?;
    Ok(all_permutations(n)
        .filter(|p| canonical_rep(p) == *p)
        .count())
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn nine_sigma() -> Permutation {
        p(&[1, 7, 4, 5, 3, 6, 2, 9, 8])
    }

    /// Brute force: every interval, tested for the three closure conditions.
    fn segments_by_enumeration(sigma: &Permutation) -> Vec<Vec<usize>> {
        let n = sigma.len();
        let mut sections = Vec::new();
        for lo in 0..n {
            for hi in lo + 1..=n {
                let iv = Interval::new(lo, hi);
                let closed = |iv: Interval| iv.iter().all(|i| iv.contains(sigma.apply(i)));
                if closed(Interval::new(0, lo)) && closed(iv) && closed(Interval::new(hi, n)) {
                    sections.push(iv);
                }
            }
        }
        let minimal: Vec<Interval> = sections
            .iter()
            .copied()
            .filter(|s| {
                !sections
                    .iter()
                    .any(|t| t != s && t.lo >= s.lo && t.hi <= s.hi)
            })
            .collect();
        let mut out: Vec<Vec<usize>> = minimal.iter().map(|s| s.iter().collect()).collect();
        out.sort();
        out
    }

    /// Definition-level ρ check: try every decomposition of `{1..n}` into
    /// consecutive sections and every choice of inversion per part.
    fn rho_by_decompositions(sigma: &Permutation, mu: &Permutation) -> bool {
        let n = sigma.len();
        fn go(sigma: &Permutation, mu: &Permutation, start: usize, n: usize) -> bool {
            if start == n {
                return true;
            }
            for end in start + 1..=n {
                let iv = Interval::new(start, end);
                if !sigma.is_section(iv).unwrap() {
                    continue;
                }
                let s = sigma.restrict(iv).unwrap();
                let m = match mu.restrict(iv) {
                    Ok(m) => m,
                    Err(_) => continue,
                };
                if (m == s || m == s.inverse()) && go(sigma, mu, end, n) {
                    return true;
                }
            }
            false
        }
        go(sigma, mu, 0, n)
    }

    #[test]
    fn validate_examples() {
        let t = p(&[2, 1]);
        assert_eq!(t.inverse(), t);
        assert!(Permutation::new(vec![1, 7, 4, 5, 3, 6, 2, 9, 8]).is_ok());
        assert_eq!(
            Permutation::new(vec![1, 1, 3]),
            Err(PermError::DuplicateValue(1))
        );
        assert_eq!(
            Permutation::new(vec![1, 4]),
            Err(PermError::OutOfRange { value: 4, n: 2 })
        );
        assert_eq!(Permutation::new(vec![]).unwrap().len(), 0);
    }

    #[test]
    fn parse_one_line_and_cycles() {
        assert_eq!(Permutation::parse("2,3,1", None).unwrap(), p(&[2, 3, 1]));
        assert_eq!(Permutation::parse("(1 2 3)", None).unwrap(), p(&[2, 3, 1]));
        assert_eq!(
            Permutation::parse("(27)(345)(89)", Some(9)).unwrap_err(),
            PermError::OutOfRange { value: 27, n: 9 }
        );
        assert_eq!(
            Permutation::parse("(2 7)(3 4 5)(8 9)", None).unwrap(),
            nine_sigma()
        );
        assert_eq!(
            Permutation::parse("(1 2 3)(5 6 7)", Some(7)).unwrap(),
            p(&[2, 3, 1, 4, 6, 7, 5])
        );
        assert!(Permutation::parse("2,x", None).is_err());
        assert_eq!(nine_sigma().cycle_string(), "(2 7)(3 4 5)(8 9)");
        assert_eq!(Permutation::identity(3).cycle_string(), "()");
    }

    #[test]
    fn closedness() {
        let s = nine_sigma();
        assert!(s.is_closed(Interval::closed(2, 7)).unwrap());
        assert!(!p(&[2, 3, 1]).is_closed(Interval::closed(1, 1)).unwrap());
        assert!(p(&[2, 3, 1]).is_closed(Interval::empty()).unwrap());
        assert!(s.is_closed(Interval::new(4, 4)).unwrap());
        assert!(matches!(
            p(&[1, 2]).is_closed(Interval::closed(1, 3)),
            Err(PermError::IntervalOutOfRange { .. })
        ));
    }

    #[test]
    fn segment_examples() {
        assert_eq!(
            nine_sigma().segments().to_vecs(),
            vec![vec![1], vec![2, 3, 4, 5, 6, 7], vec![8, 9]]
        );
        assert_eq!(
            Permutation::identity(3).segments().to_vecs(),
            vec![vec![1], vec![2], vec![3]]
        );
        assert_eq!(p(&[2, 3, 1]).segments().to_vecs(), vec![vec![1, 2, 3]]);
        assert_eq!(segments_by_enumeration(&p(&[2, 3, 1])), vec![vec![1, 2, 3]]);
        assert_eq!(
            nine_sigma().segments().segment_of(8),
            Some(Interval::closed(8, 9))
        );
        assert!(Permutation::identity(0).segments().is_empty());
    }

    #[test]
    fn linear_scan_matches_interval_enumeration() {
        for n in 0..=7 {
            for s in all_permutations(n) {
                let mut fast = s.segments().to_vecs();
                fast.sort();
                assert_eq!(fast, segments_by_enumeration(&s), "{s}");
            }
        }
    }

    #[test]
    fn section_intersections_and_unions() {
        for n in 1..=7 {
            for s in all_permutations(n) {
                let sections: Vec<Interval> = (0..n)
                    .flat_map(|lo| (lo + 1..=n).map(move |hi| Interval::new(lo, hi)))
                    .filter(|iv| s.is_section(*iv).unwrap())
                    .collect();
                for a in &sections {
                    for b in &sections {
                        let lo = a.lo.max(b.lo);
                        let hi = a.hi.min(b.hi);
                        if lo < hi {
                            assert!(s.is_section(Interval::new(lo, hi)).unwrap());
                        }
                    }
                }
                // a nonempty interval is a section iff it is a union of segments
                let cuts = s.segments().cuts().to_vec();
                for lo in 0..n {
                    for hi in lo + 1..=n {
                        let union = cuts.contains(&lo) && cuts.contains(&hi);
                        assert_eq!(s.is_section(Interval::new(lo, hi)).unwrap(), union);
                    }
                }
            }
        }
    }

    #[test]
    fn rho_examples() {
        let s = nine_sigma();
        assert!(rho_equivalent(&s, &s.inverse()).unwrap());
        assert_eq!(rho_class(&s), {
            let mut v = vec![s.clone(), s.inverse()];
            v.sort();
            v
        });
        let c = Permutation::parse("(1 2 3)(5 6 7)", Some(7)).unwrap();
        let expected: BTreeSet<Permutation> = [
            "(1 2 3)(5 6 7)",
            "(1 3 2)(5 6 7)",
            "(1 2 3)(5 7 6)",
            "(1 3 2)(5 7 6)",
        ]
        .iter()
        .map(|t| Permutation::parse(t, Some(7)).unwrap())
        .collect();
        assert_eq!(rho_class(&c).into_iter().collect::<BTreeSet<_>>(), expected);
        assert!(!rho_equivalent(&Permutation::identity(2), &p(&[2, 1])).unwrap());
        assert_eq!(
            rho_equivalent(&p(&[1]), &p(&[1, 2])),
            Err(PermError::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn class_examples() {
        assert_eq!(rho_class(&p(&[2, 1])), vec![p(&[2, 1])]);
        assert_eq!(
            rho_class(&p(&[2, 3, 1])),
            vec![p(&[2, 3, 1]), p(&[3, 1, 2])]
        );
        assert_eq!(rho_class_size(&nine_sigma()), 2);
        assert_eq!(canonical_rep(&p(&[3, 1, 2])), p(&[2, 3, 1]));
    }

    #[test]
    fn rho_matches_decomposition_oracle() {
        for n in 0..=5 {
            let perms: Vec<_> = all_permutations(n).collect();
            for a in &perms {
                for b in &perms {
                    assert_eq!(
                        rho_equivalent(a, b).unwrap(),
                        rho_by_decompositions(a, b),
                        "{a} {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn rho_is_an_equivalence() {
        for n in 0..=5 {
            let perms: Vec<_> = all_permutations(n).collect();
            let rel = |a: &Permutation, b: &Permutation| rho_equivalent(a, b).unwrap();
            for a in &perms {
                assert!(rel(a, a));
                for b in &perms {
                    assert_eq!(rel(a, b), rel(b, a));
                }
            }
            // transitivity via class members all being equivalent to each other
            for a in &perms {
                let class = rho_class(a);
                for b in &class {
                    for c in &class {
                        assert!(rel(b, c));
                    }
                }
                let members: Vec<_> = perms.iter().filter(|b| rel(a, b)).cloned().collect();
                assert_eq!(members, class);
            }
        }
    }

    #[test]
    fn class_counts() {
        // brute-force oracle: group S_n by rho_by_decompositions
        let brute = |n: usize| {
            let mut reps: Vec<Permutation> = Vec::new();
            for q in all_permutations(n) {
                if !reps.iter().any(|r| rho_by_decompositions(r, &q)) {
                    reps.push(q);
                }
            }
            reps.len()
        };
        assert_eq!((brute(1), brute(2), brute(3)), (1, 2, 5));
        assert_eq!(count_classes(0, 9).unwrap(), 1);
        assert_eq!(count_classes(1, 9).unwrap(), 1);
        assert_eq!(count_classes(2, 9).unwrap(), 2);
        assert_eq!(count_classes(3, 9).unwrap(), 5);
        for n in 4..=6 {
            assert_eq!(count_classes(n, 9).unwrap(), brute(n));
        }
        assert_eq!(
            count_classes(10, 9),
            Err(PermError::TooLarge { n: 10, cap: 9 })
        );
        assert_eq!(enumerate_reps(2, 9).unwrap(), vec![p(&[1, 2]), p(&[2, 1])]);
    }

    #[test]
    fn all_permutations_counts() {
        for n in 0..=6 {
            assert_eq!(all_permutations(n).count() as u128, factorial(n));
        }
    }

    #[test]
    fn serde_roundtrip_validates() {
        let s: Permutation = serde_json::from_str("[2,3,1]").unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,3,1]");
        assert!(serde_json::from_str::<Permutation>("[2,2]").is_err());
    }

    #[test]
    fn reversed_conjugate() {
        assert_eq!(p(&[2, 1, 3]).reversed_conjugate(), p(&[1, 3, 2]));
        assert_eq!(p(&[2, 3, 1]).reversed_conjugate(), p(&[3, 1, 2]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(max_n: usize) -> impl Strategy<Value = Permutation> {
            (0..=max_n)
                .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
                .prop_map(|v| Permutation::new(v).unwrap())
        }

        proptest! {
            #[test]
            fn segments_partition(s in perm_strategy(12)) {
                let segs = s.segments();
                let flat: Vec<usize> = segs.to_vecs().concat();
                prop_assert_eq!(flat, (1..=s.len()).collect::<Vec<_>>());
                for seg in segs.iter() {
                    prop_assert!(s.is_section(seg).unwrap());
                    prop_assert!(s.inverse().is_closed(seg).unwrap());
                }
            }

            #[test]
            fn class_size_divides_power_of_two(s in perm_strategy(10)) {
                let size = rho_class(&s).len();
                prop_assert_eq!(size, rho_class_size(&s));
                prop_assert_eq!((1usize << s.segments().len()) % size, 0);
                prop_assert!(rho_class(&s).contains(&canonical_rep(&s)));
                prop_assert_eq!(rho_class(&s)[0].clone(), canonical_rep(&s));
            }

            #[test]
            fn inverse_is_involutive(s in perm_strategy(12)) {
                prop_assert_eq!(s.inverse().inverse(), s.clone());
                prop_assert_eq!(s.compose(&s.inverse()).unwrap(), Permutation::identity(s.len()));
                prop_assert_eq!(Permutation::parse(&s.cycle_string(), Some(s.len())).unwrap(), s);
            }
        }
    }
}
