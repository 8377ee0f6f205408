//! The invariant suite behind `slimlat verify`.
//!
//! Lengths up to [`EXHAUSTIVE_LIMIT`] are checked on every permutation; longer
//! ones on seeded random samples. Per-permutation results are computed in
//! parallel and folded in input order, so the report is deterministic.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use slimlat::extract::{
    boundary_similar, diagrams_of, extract_permutation, pi1_trajectories, pi2_meet_irreducibles,
    pi3_source_cells,
};
use slimlat::grid::{
    beta_formula, beta_from_perm, forbidden_cells, phi0, regenerate, source_cells, Grid, GridCell,
};
use slimlat::groups::{csl_build, csl_dual_diagram, first_primes, jordan_holder_permutation};
use slimlat::lattice::{is_isomorphic, DEFAULT_ISO_CAP};
use slimlat::perm::{all_permutations, canonical_rep, rho_class_size, Permutation};

use crate::{to_json, CmdResult, Outcome, EXIT_OK, EXIT_VERIFICATION};

pub const EXHAUSTIVE_LIMIT: usize = 6;
pub const MAX_N: usize = 9;
/// Diagram enumeration is only run up to this length.
pub const DIAGRAM_LIMIT: usize = 5;
/// Products of the first 15 primes fit in 64 bits.
pub const GROUP_LIMIT: usize = 15;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    /// Replaces the extractor by one returning the inverse, to exercise the
    /// failure path.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub runs: usize,
    pub passed: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub inputs: serde_json::Value,
    pub outputs: serde_json::Value,
    pub checks: Vec<CheckSummary>,
    pub checks_run: usize,
    pub checks_passed: usize,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks_run == self.checks_passed
    }
}

pub const CHECK_NAMES: [&str; 11] = [
    "round_trip",
    "extractors_agree",
    "reflection_inverts",
    "formula_oracle",
    "source_cells",
    "regenerate",
    "structure",
    "narrows_at_segment_ends",
    "isomorphic_to_representative",
    "diagram_count",
    "group_realization",
];

/// `None` means the check does not apply; `Some(false)` is a failure.
fn run_checks(perm: &Permutation, inject_fault: bool) -> Vec<Option<bool>> {
    let n = perm.len();
    let d = phi0(perm);
    let l = d.lattice();
    let extracted = extract_permutation(&d).map(|p| if inject_fault { p.inverse() } else { p });
    let beta = beta_from_perm(Grid::new(n), perm).expect("lengths agree");
    let graph: Vec<GridCell> = (1..=n)
        .map(|i| GridCell {
            i,
            j: perm.apply(i),
        })
        .collect();

    let round_trip = extracted.as_ref().is_ok_and(|p| p == perm);
    let agree = match (
        pi1_trajectories(&d),
        pi2_meet_irreducibles(&d),
        pi3_source_cells(&d),
    ) {
        (Ok(a), Ok(b), Ok(c)) => a == b && b == c,
        _ => false,
    };
    let reflection = extract_permutation(&d.swapped()).is_ok_and(|p| p == perm.inverse());
    let formula = Grid::new(n)
        .edges()
        .into_iter()
        .all(|e| beta_formula(n, perm, e) == Ok(beta.collapses(e)));
    let sources = source_cells(&beta) == graph;
    let regenerated =
        regenerate(&beta).is_ok_and(|k| k == beta) && forbidden_cells(&beta).is_empty();
    let structure = l.is_slim()
        && l.is_semimodular()
        && l.length() == n
        && l.meet_irreducibles().len() == n
        && (0..l.size()).all(|x| l.upper_covers(x).len() <= 2)
        && d.check_boundary().is_ok();
    let mut expected: Vec<usize> = vec![0];
    expected.extend(perm.segments().iter().map(|s| s.last()));
    let heights: Vec<usize> = l.narrows().iter().map(|&x| l.height(x)).collect();
    let narrows = heights == expected;
    let rep = phi0(&canonical_rep(perm));
    let iso = is_isomorphic(l, rep.lattice(), DEFAULT_ISO_CAP).is_ok_and(|f| f.is_some());
    let count = (n <= DIAGRAM_LIMIT)
        .then(|| diagrams_of(l).is_ok_and(|ds| ds.len() == rho_class_size(perm)));
    let group = (n <= GROUP_LIMIT).then(|| {
        let inst = csl_build(&first_primes(n), perm).expect("first primes are distinct");
        let dual = csl_dual_diagram(&inst);
        let flipped = perm.reversed_conjugate();
        dual.lattice().is_slim()
            && dual.lattice().is_semimodular()
            && jordan_holder_permutation(&inst) == *perm
            && extract_permutation(&dual).is_ok_and(|p| p == flipped)
            && boundary_similar(&dual, &phi0(&flipped)).unwrap_or(false)
    });
    vec![
        Some(round_trip),
        Some(agree),
        Some(reflection),
        Some(formula),
        Some(sources),
        Some(regenerated),
        Some(structure),
        Some(narrows),
        Some(iso),
        count,
        group,
    ]
}

/// The permutations checked at length `n`.
pub fn permutations_for(n: usize, seed: u64, samples: usize) -> Vec<Permutation> {
    if n <= EXHAUSTIVE_LIMIT {
        return all_permutations(n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
    (0..samples)
        .map(|_| {
            let mut v: Vec<usize> = (1..=n).collect();
            v.shuffle(&mut rng);
            Permutation::new(v).expect("a shuffle is a permutation")
        })
        .collect()
}

pub fn verify_report(opts: &VerifyOptions) -> Result<RunReport, String> {
    if opts.n > MAX_N {
        return Err(format!("verify supports n ≤ {MAX_N}, got {}", opts.n));
    }
    let perms: Vec<Permutation> = (0..=opts.n)
        .flat_map(|n| permutations_for(n, opts.seed, opts.samples))
        .collect();
    let results: Vec<Vec<Option<bool>>> = perms
        .par_iter()
        .map(|p| run_checks(p, opts.inject_fault))
        .collect();
    let mut checks: Vec<CheckSummary> = CHECK_NAMES
        .iter()
        .map(|&name| CheckSummary {
            name,
            runs: 0,
            passed: 0,
            first_failure: None,
        })
        .collect();
    for (perm, row) in perms.iter().zip(&results) {
        for (check, outcome) in checks.iter_mut().zip(row) {
            let Some(ok) = *outcome else { continue };
            check.runs += 1;
            if ok {
                check.passed += 1;
            } else if check.first_failure.is_none() {
                check.first_failure = Some(perm.to_string());
            }
        }
    }
    let checks_run = checks.iter().map(|c| c.runs).sum();
    let checks_passed = checks.iter().map(|c| c.passed).sum();
    Ok(RunReport {
        command: "verify",
        inputs: serde_json::json!({
            "n": opts.n,
            "seed": opts.seed,
            "samples": opts.samples,
            "exhaustive_up_to": EXHAUSTIVE_LIMIT.min(opts.n),
        }),
        outputs: serde_json::json!({ "permutations_checked": perms.len() }),
        checks,
        checks_run,
        checks_passed,
    })
}

pub fn cmd_verify(opts: &VerifyOptions) -> CmdResult {
    let start = Instant::now();
    let report = verify_report(opts)?;
    let mut stderr = String::new();
    for c in &report.checks {
        let status = if c.runs == c.passed { "ok" } else { "FAIL" };
        stderr.push_str(&format!(
            "{status:>4}  {:<30} {}/{}",
            c.name, c.passed, c.runs
        ));
        if let Some(p) = &c.first_failure {
            stderr.push_str(&format!("  first failure {p}"));
        }
        stderr.push('\n');
    }
    // wall time stays off stdout so reports are byte-identical across runs
    stderr.push_str(&format!(
        "{}/{} checks passed in {:.2} s\n",
        report.checks_passed,
        report.checks_run,
        start.elapsed().as_secs_f64()
    ));
    Ok(Outcome {
        stdout: to_json(&report),
        stderr,
        code: if report.passed() {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuous_and_small_runs() {
        let opts = |n, inject_fault| VerifyOptions {
            n,
            seed: 0,
            samples: 3,
            inject_fault,
        };
        let empty = verify_report(&opts(0, false)).unwrap();
        assert!(empty.passed());
        let small = verify_report(&opts(3, false)).unwrap();
        assert!(small.passed());
        assert_eq!(small.outputs["permutations_checked"], 1 + 1 + 2 + 6);
        let faulty = verify_report(&opts(3, true)).unwrap();
        assert!(!faulty.passed());
        assert_eq!(faulty.checks[0].first_failure.as_deref(), Some("[2,3,1]"));
        assert!(verify_report(&opts(10, false)).is_err());
    }

    #[test]
    fn samples_are_seeded() {
        assert_eq!(permutations_for(8, 7, 5), permutations_for(8, 7, 5));
        assert_ne!(permutations_for(8, 7, 5), permutations_for(8, 8, 5));
        assert_eq!(permutations_for(4, 7, 5).len(), 24);
    }
}
