//! Exact computation of van der Waerden numbers.
//!
//! `W(r, k)` is the least `N` such that every `r`-coloring of `[1, N]`
//! contains a monochromatic `k`-term arithmetic progression. It is located
//! by ascending `N` until the search refutes every coloring; the witness for
//! `W - 1` falls out of the last successful step.

mod bitset;
mod coloring;
pub(crate) mod engine;
mod parallel;
mod witness;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use bitset::{has_mono_ap_bitset, ColorSets};
pub use coloring::{has_mono_ap, has_mono_ap_ending_at, Coloring};
pub use witness::WitnessFile;

use coloring::canonical_labels;
use engine::{Order, Step};

/// Node limit used when none is given.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Largest number of colorings [`verify_unavoidable_exhaustive`] will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 24;

/// Colors are `u8` and one value is reserved internally.
pub const MAX_SEARCH_COLORS: usize = 254;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} colorings exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}")]
    Intractable(String),
}

/// Result of [`find_witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessResult {
    Found(Coloring),
    /// Every coloring contains a monochromatic progression.
    Refuted,
    /// The node budget ran out first.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSearch {
    pub result: WitnessResult,
    pub nodes_explored: u64,
}

/// Result of [`compute_w`].
///
/// `w_value` is present exactly when the budget sufficed, and then `witness`
/// colors `[1, w_value - 1]` without a monochromatic `k`-AP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub r: u64,
    pub k: u64,
    pub w_value: Option<u64>,
    pub witness: Option<Coloring>,
    pub nodes_explored: u64,
    pub budget_exhausted: bool,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Node limit shared by every interval length tried.
    pub budget: u64,
    /// Worker threads; 1 searches sequentially. Results do not depend on it.
    pub workers: usize,
    /// Give up (as if the budget ran out) once `N` would exceed this.
    pub max_n: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            workers: 1,
            max_n: None,
        }
    }
}

fn check_search_domain(r: usize, k: usize, budget: u64) -> Result<(), SearchError> {
    if !(2..=MAX_SEARCH_COLORS).contains(&r) {
        return Err(SearchError::Domain(format!(
            "number of colors must lie in [2, {MAX_SEARCH_COLORS}], got {r}"
        )));
    }
    if k < 1 {
        return Err(SearchError::Domain("progression length must be at least 1".into()));
    }
    if budget == 0 {
        return Err(SearchError::Domain("node budget must be positive".into()));
    }
    Ok(())
}

/// Searches for a coloring of `[1, n]` with `r` colors and no monochromatic
/// `k`-AP. A found coloring is the lexicographically least one, so position
/// 1 always has color 0.
pub fn find_witness(n: usize, r: usize, k: usize, budget: u64) -> Result<WitnessSearch, SearchError> {
    find_witness_with(n, r, k, budget, 1)
}

/// [`find_witness`] on `workers` threads; the result is identical.
pub fn find_witness_with(
    n: usize,
    r: usize,
    k: usize,
    budget: u64,
    workers: usize,
) -> Result<WitnessSearch, SearchError> {
    check_search_domain(r, k, budget)?;
    if k < 2 {
        return Err(SearchError::Domain("progression length must be at least 2".into()));
    }
    let run = parallel::search(n, r, k, budget, Order::Lexicographic { floor: &[] }, workers);
    Ok(WitnessSearch {
        result: into_result(run.step, run.colors, r),
        nodes_explored: run.nodes,
    })
}

fn into_result(step: Step, colors: Option<Vec<u8>>, r: usize) -> WitnessResult {
    match step {
        Step::Found => WitnessResult::Found(Coloring::from_raw(r, colors.expect("found run has colors"))),
        Step::Refuted => WitnessResult::Refuted,
        Step::Exhausted | Step::Aborted => WitnessResult::Exhausted,
    }
}

/// Computes `W(r, k)` by ascending `N` from `k`.
///
/// Each length is searched most-constrained-position first, guided by the
/// witness for the previous length; satisfiable lengths then take only a
/// handful of nodes. The reported witness is relabeled so colors appear in
/// order of first use.
pub fn compute_w(r: usize, k: usize, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    check_search_domain(r, k, config.budget)?;
    let start = Instant::now();
    let outcome = |w_value: Option<u64>, witness: Option<Vec<u8>>, nodes: u64| SearchOutcome {
        r: r as u64,
        k: k as u64,
        w_value,
        witness: witness.map(|a| Coloring::from_raw(r, a)),
        nodes_explored: nodes,
        budget_exhausted: w_value.is_none(),
        elapsed: start.elapsed(),
    };

    // Pigeonhole closed forms.
    if k == 1 {
        return Ok(outcome(Some(1), Some(Vec::new()), 0));
    }
    if k == 2 {
        return Ok(outcome(Some(r as u64 + 1), Some((0..r as u8).collect()), 0));
    }

    // Any coloring of fewer than k points is a witness.
    let mut witness = vec![0u8; k - 1];
    let mut nodes = 0u64;
    let mut n = k;
    loop {
        if config.max_n.is_some_and(|m| n as u64 > m) {
            return Ok(outcome(None, None, nodes));
        }
        let run = parallel::search(
            n,
            r,
            k,
            config.budget - nodes,
            Order::Constrained { hint: &witness },
            config.workers,
        );
        nodes += run.nodes;
        match run.step {
            Step::Found => witness = canonical_labels(&run.colors.expect("found run has colors")),
            Step::Refuted => return Ok(outcome(Some(n as u64), Some(witness), nodes)),
            Step::Exhausted | Step::Aborted => return Ok(outcome(None, None, config.budget)),
        }
        n += 1;
    }
}

/// Enumerates all `r^n` colorings of `[1, n]` without pruning and reports
/// whether every one contains a monochromatic `k`-AP.
pub fn verify_unavoidable_exhaustive(n: usize, r: usize, k: usize) -> Result<bool, SearchError> {
    if !(2..=256).contains(&r) {
        return Err(SearchError::Domain(format!("number of colors must lie in [2, 256], got {r}")));
    }
    if k < 1 {
        return Err(SearchError::Domain("progression length must be at least 1".into()));
    }
    let total = u32::try_from(n)
        .ok()
        .and_then(|e| (r as u64).checked_pow(e))
        .filter(|&t| t <= EXHAUSTIVE_LIMIT)
        .ok_or_else(|| SearchError::Intractable(format!("{r}^{n}")))?;
    let mut digits = vec![0u8; n];
    for _ in 0..total {
        if !has_mono_ap(&Coloring::from_raw(r, digits.clone()), k) {
            return Ok(false);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if (*d as usize) < r {
                break;
            }
            *d = 0;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(r: usize, k: usize) -> SearchOutcome {
        compute_w(r, k, &SearchConfig::default()).unwrap()
    }

    #[test]
    fn small_numbers() {
        assert_eq!(w(2, 3).w_value, Some(9));
        assert_eq!(w(3, 3).w_value, Some(27));
        assert_eq!(w(2, 4).w_value, Some(35));
    }

    #[test]
    fn closed_forms() {
        let one = w(3, 1);
        assert_eq!(one.w_value, Some(1));
        assert_eq!(one.witness.unwrap().n_points(), 0);
        let two = w(2, 2);
        assert_eq!(two.w_value, Some(3));
        assert_eq!(two.witness.unwrap().assignment(), &[0, 1]);
    }

    #[test]
    fn witnesses_pass_the_full_scan() {
        for (r, k) in [(2, 2), (2, 3), (3, 3), (2, 4), (5, 2)] {
            let out = w(r, k);
            let c = out.witness.unwrap();
            assert_eq!(c.n_points() as u64, out.w_value.unwrap() - 1);
            assert!(!has_mono_ap(&c, k), "r={r} k={k}");
        }
    }

    #[test]
    fn lexicographically_least_witness() {
        let found = find_witness(8, 2, 3, 1000).unwrap();
        let WitnessResult::Found(c) = found.result else {
            panic!("expected a witness");
        };
        assert_eq!(c.digits(), "00110011");
        assert_eq!(find_witness(9, 2, 3, 1000).unwrap().result, WitnessResult::Refuted);
        assert_eq!(
            find_witness(0, 3, 3, 1).unwrap().result,
            WitnessResult::Found(Coloring::empty(3).unwrap())
        );
    }

    #[test]
    fn budget_exhaustion_is_an_outcome() {
        let out = compute_w(2, 6, &SearchConfig { budget: 1000, ..SearchConfig::default() }).unwrap();
        assert!(out.budget_exhausted);
        assert_eq!(out.w_value, None);
        assert_eq!(out.witness, None);
        assert_eq!(out.nodes_explored, 1000);
        assert_eq!(find_witness(34, 2, 4, 3).unwrap().result, WitnessResult::Exhausted);
    }

    #[test]
    fn max_n_stops_the_ascent() {
        let out = compute_w(2, 4, &SearchConfig { max_n: Some(20), ..SearchConfig::default() }).unwrap();
        assert!(out.budget_exhausted);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(compute_w(1, 3, &SearchConfig::default()).is_err());
        assert!(compute_w(2, 0, &SearchConfig::default()).is_err());
        assert!(compute_w(2, 3, &SearchConfig { budget: 0, ..SearchConfig::default() }).is_err());
        assert!(find_witness(5, 2, 1, 10).is_err());
    }

    #[test]
    fn exhaustive_examples() {
        assert!(verify_unavoidable_exhaustive(9, 2, 3).unwrap());
        assert!(!verify_unavoidable_exhaustive(8, 2, 3).unwrap());
        assert!(verify_unavoidable_exhaustive(3, 2, 2).unwrap());
        assert!(!verify_unavoidable_exhaustive(0, 2, 1).unwrap());
        assert!(matches!(
            verify_unavoidable_exhaustive(25, 2, 3),
            Err(SearchError::Intractable(_))
        ));
    }

    #[test]
    fn workers_do_not_change_the_outcome() {
        let seq = w(2, 4);
        let par = compute_w(2, 4, &SearchConfig { workers: 8, ..SearchConfig::default() }).unwrap();
        assert_eq!((seq.w_value, &seq.witness, seq.nodes_explored), (par.w_value, &par.witness, par.nodes_explored));
    }
}
