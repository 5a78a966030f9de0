//! The two actions of the virtual braid group on tuples of carrier elements,
//! the conjugating automorphism `theta`, and exhaustive fixed-point counts.
//!
//! The `phi` action sends `sigma_i` to `(x_i, x_{i+1}) -> (R1, R2)` and
//! `rho_i` to `(x_i, x_{i+1}) -> (f^{-1}(x_{i+1}), f(x_i))`. The `psi` action
//! absorbs `f` into the classical crossings, `(x_i, x_{i+1}) ->
//! (R1(x_i, f(x_{i+1})), R2(f^{-1}(x_i), x_{i+1}))`, and sends `rho_i` to the
//! plain swap. `psi` is implemented from these formulas directly, not as
//! `theta . phi . theta^{-1}`, so the conjugation identity stays a real
//! cross-check.

use crate::algebra::VirtualBiquandle;
use crate::braid::{BraidWord, Generator};
use thiserror::Error;

/// Which representation of the virtual braid group acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    Phi,
    Psi,
}

/// A point of `X^n`: one carrier element per strand.
pub type StrandTuple = Vec<usize>;

/// Applies one generator in place. Only positions `i, i+1` change.
pub fn apply_generator(vbq: &VirtualBiquandle, g: Generator, rep: RepKind, t: &mut [usize]) {
    let i = g.index() - 1;
    assert!(i + 1 < t.len(), "generator index exceeds tuple length");
    let (x, y) = (t[i], t[i + 1]);
    match (rep, g) {
        (RepKind::Phi, Generator::Sigma(_)) => {
            t[i] = vbq.r1(x, y);
            t[i + 1] = vbq.r2(x, y);
        }
        (RepKind::Phi, Generator::SigmaInv(_)) => {
            t[i] = vbq.r1bar(x, y);
            t[i + 1] = vbq.r2bar(x, y);
        }
        (RepKind::Phi, Generator::Rho(_)) => {
            t[i] = vbq.f_inv(y);
            t[i + 1] = vbq.f(x);
        }
        (RepKind::Psi, Generator::Sigma(_)) => {
            t[i] = vbq.r1(x, vbq.f(y));
            t[i + 1] = vbq.r2(vbq.f_inv(x), y);
        }
        (RepKind::Psi, Generator::SigmaInv(_)) => {
            t[i] = vbq.r1bar(x, vbq.f(y));
            t[i + 1] = vbq.r2bar(vbq.f_inv(x), y);
        }
        (RepKind::Psi, Generator::Rho(_)) => {
            t.swap(i, i + 1);
        }
    }
}

/// Functional form of [`apply_generator`].
pub fn act_generator(
    vbq: &VirtualBiquandle,
    g: Generator,
    rep: RepKind,
    t: &[usize],
) -> StrandTuple {
    let mut out = t.to_vec();
    apply_generator(vbq, g, rep, &mut out);
    out
}

/// Applies a whole word in place, letters left to right.
pub fn apply_braid(vbq: &VirtualBiquandle, b: &BraidWord, rep: RepKind, t: &mut [usize]) {
    for &g in b.letters() {
        apply_generator(vbq, g, rep, t);
    }
}

/// Functional form of [`apply_braid`].
pub fn act_braid(vbq: &VirtualBiquandle, b: &BraidWord, rep: RepKind, t: &[usize]) -> StrandTuple {
    let mut out = t.to_vec();
    apply_braid(vbq, b, rep, &mut out);
    out
}

/// The automorphism `theta = f^{n-1} x f^{n-2} x ... x f x id` of `X^n`:
/// coordinate `i` (1-based) maps under `f^{n-i}`.
pub fn theta(vbq: &VirtualBiquandle, t: &[usize]) -> StrandTuple {
    let n = t.len();
    t.iter()
        .enumerate()
        .map(|(idx, &x)| vbq.f_pow((n - 1 - idx) as i64, x))
        .collect()
}

/// Inverse of [`theta`].
pub fn theta_inv(vbq: &VirtualBiquandle, t: &[usize]) -> StrandTuple {
    let n = t.len();
    t.iter()
        .enumerate()
        .map(|(idx, &x)| vbq.f_pow(-((n - 1 - idx) as i64), x))
        .collect()
}

/// Fixed-point (coloring) count, with the fixed tuples themselves when
/// materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringResult {
    pub count: u64,
    pub witnesses: Option<Vec<StrandTuple>>,
}

/// Options for the exhaustive scans. `budget` bounds the number of tuple
/// evaluations; `workers` partitions the first coordinate.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub budget: u64,
    pub workers: usize,
    pub materialize: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 100_000_000,
            workers: 1,
            materialize: false,
        }
    }
}

impl SearchOptions {
    pub fn materialized() -> Self {
        SearchOptions {
            materialize: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("search space of {required} tuple evaluations exceeds the budget of {budget}")]
pub struct BudgetError {
    pub required: u128,
    pub budget: u64,
}

fn check_budget(m: usize, n: usize, budget: u64) -> Result<(), BudgetError> {
    let required = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(BudgetError { required, budget });
    }
    Ok(())
}

/// Advances `t` to the next tuple in lexicographic order over `0..m` per
/// coordinate, most significant first. Returns false after the last tuple.
pub(crate) fn next_tuple(t: &mut [usize], m: usize) -> bool {
    for slot in t.iter_mut().rev() {
        *slot += 1;
        if *slot < m {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Counts the tuples of `X^n` fixed by the action of `b`. The scan is
/// exhaustive in lexicographic order; with several workers the first
/// coordinate is partitioned into contiguous blocks and the per-block
/// results are merged in block order, so counts and witness order do not
/// depend on the worker count.
pub fn count_colorings(
    vbq: &VirtualBiquandle,
    b: &BraidWord,
    rep: RepKind,
    opts: &SearchOptions,
) -> Result<ColoringResult, BudgetError> {
    let m = vbq.n();
    let n = b.strands();
    check_budget(m, n, opts.budget)?;

    let scan_block = |first_range: std::ops::Range<usize>| -> (u64, Vec<StrandTuple>) {
        let mut count = 0u64;
        let mut witnesses = Vec::new();
        let mut tuple = vec![0usize; n];
        let mut scratch = vec![0usize; n];
        for first in first_range {
            tuple[0] = first;
            tuple[1..].fill(0);
            loop {
                scratch.copy_from_slice(&tuple);
                apply_braid(vbq, b, rep, &mut scratch);
                if scratch == tuple {
                    count += 1;
                    if opts.materialize {
                        witnesses.push(tuple.clone());
                    }
                }
                if n == 1 || !next_tuple(&mut tuple[1..], m) {
                    break;
                }
            }
        }
        (count, witnesses)
    };

    let workers = opts.workers.max(1).min(m);
    let (count, witnesses) = if workers <= 1 {
        scan_block(0..m)
    } else {
        // split 0..m into contiguous blocks of near-equal size
        let bounds: Vec<usize> = (0..=workers).map(|k| k * m / workers).collect();
        let blocks: Vec<(u64, Vec<StrandTuple>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|k| {
                    let range = bounds[k]..bounds[k + 1];
                    let scan = &scan_block;
                    scope.spawn(move || scan(range))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut count = 0;
        let mut witnesses = Vec::new();
        for (c, w) in blocks {
            count += c;
            witnesses.extend(w);
        }
        (count, witnesses)
    };

    Ok(ColoringResult {
        count,
        witnesses: opts.materialize.then_some(witnesses),
    })
}

/// Outcome of the bridge verification: both counts plus, for every
/// `phi`-fixed tuple `t`, the explicit check that `theta(t)` is `psi`-fixed.
#[derive(Debug, Clone)]
pub struct BridgeReport {
    pub phi_count: u64,
    pub psi_count: u64,
    /// `phi`-fixed tuples whose image under `theta` is not `psi`-fixed.
    /// Nonempty would mean the implementation is broken, not the
    /// mathematics.
    pub mechanism_failures: Vec<StrandTuple>,
}

impl BridgeReport {
    pub fn passed(&self) -> bool {
        self.phi_count == self.psi_count && self.mechanism_failures.is_empty()
    }
}

/// Computes `|Fix phi(b)|` and `|Fix psi(b)|` and reports both counts
/// together with the pointwise bijection check on every `phi`-fixed tuple.
pub fn verify_bridge(
    vbq: &VirtualBiquandle,
    b: &BraidWord,
    opts: &SearchOptions,
) -> Result<BridgeReport, BudgetError> {
    let phi = count_colorings(
        vbq,
        b,
        RepKind::Phi,
        &SearchOptions {
            materialize: true,
            ..opts.clone()
        },
    )?;
    let psi = count_colorings(vbq, b, RepKind::Psi, opts)?;
    let mut mechanism_failures = Vec::new();
    for t in phi.witnesses.as_deref().unwrap_or(&[]) {
        let image = theta(vbq, t);
        if act_braid(vbq, b, RepKind::Psi, &image) != image {
            mechanism_failures.push(t.clone());
        }
    }
    Ok(BridgeReport {
        phi_count: phi.count,
        psi_count: psi.count,
        mechanism_failures,
    })
}

/// A defining relation of the virtual braid group that failed to act
/// identically, with the first tuple separating the two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationViolation {
    pub relation: String,
    pub tuple: StrandTuple,
    pub lhs_image: StrandTuple,
    pub rhs_image: StrandTuple,
}

/// Result of checking every defining relation at a given strand count.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub relations_checked: usize,
    pub violation: Option<RelationViolation>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// All defining relations of the virtual braid group on `n` strands, as
/// pairs of words: the two braid relations, distant commutation for each
/// generator pairing, the involution `rho_i^2 = 1`, and the mixed braid
/// relation `rho_i rho_{i+1} sigma_i = sigma_{i+1} rho_i rho_{i+1}`.
pub fn vbn_relations(n: usize) -> Vec<(String, BraidWord, BraidWord)> {
    use Generator::{Rho, Sigma};
    let word = |letters: Vec<Generator>| BraidWord::new(n, letters).unwrap();
    let mut rels = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let j = i + 1;
        rels.push((
            format!("s{i} s{j} s{i} = s{j} s{i} s{j}"),
            word(vec![Sigma(i), Sigma(j), Sigma(i)]),
            word(vec![Sigma(j), Sigma(i), Sigma(j)]),
        ));
        rels.push((
            format!("v{i} v{j} v{i} = v{j} v{i} v{j}"),
            word(vec![Rho(i), Rho(j), Rho(i)]),
            word(vec![Rho(j), Rho(i), Rho(j)]),
        ));
        rels.push((
            format!("v{i} v{j} s{i} = s{j} v{i} v{j}"),
            word(vec![Rho(i), Rho(j), Sigma(i)]),
            word(vec![Sigma(j), Rho(i), Rho(j)]),
        ));
    }
    for i in 1..n {
        rels.push((
            format!("v{i} v{i} = 1"),
            word(vec![Rho(i), Rho(i)]),
            word(vec![]),
        ));
        for j in i + 2..n {
            rels.push((
                format!("s{i} s{j} = s{j} s{i}"),
                word(vec![Sigma(i), Sigma(j)]),
                word(vec![Sigma(j), Sigma(i)]),
            ));
            rels.push((
                format!("v{i} v{j} = v{j} v{i}"),
                word(vec![Rho(i), Rho(j)]),
                word(vec![Rho(j), Rho(i)]),
            ));
            rels.push((
                format!("s{i} v{j} = v{j} s{i}"),
                word(vec![Sigma(i), Rho(j)]),
                word(vec![Rho(j), Sigma(i)]),
            ));
            rels.push((
                format!("s{j} v{i} = v{i} s{j}"),
                word(vec![Sigma(j), Rho(i)]),
                word(vec![Rho(i), Sigma(j)]),
            ));
        }
    }
    rels
}

/// Verifies that the chosen representation respects every defining relation
/// of the virtual braid group on `n` strands, by exhaustive evaluation on
/// `X^n`. Cost is `O(|X|^n)` per relation; callers pick `n` accordingly.
pub fn check_representation(vbq: &VirtualBiquandle, n: usize, rep: RepKind) -> RelationReport {
    let m = vbq.n();
    let rels = vbn_relations(n);
    let relations_checked = rels.len();
    for (name, lhs, rhs) in rels {
        let mut tuple = vec![0usize; n];
        loop {
            let a = act_braid(vbq, &lhs, rep, &tuple);
            let b = act_braid(vbq, &rhs, rep, &tuple);
            if a != b {
                return RelationReport {
                    relations_checked,
                    violation: Some(RelationViolation {
                        relation: name,
                        tuple,
                        lhs_image: a,
                        rhs_image: b,
                    }),
                };
            }
            if !next_tuple(&mut tuple, m) {
                break;
            }
        }
    }
    RelationReport {
        relations_checked,
        violation: None,
    }
}
