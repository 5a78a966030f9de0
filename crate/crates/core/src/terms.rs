//! The free virtual biquandle on `x_1, .., x_n` as a term algebra, the
//! symbolic actions of braid words on it, presentations cut out by a braid,
//! and homomorphism counting into finite structures.
//!
//! Terms are immutable `Rc` trees; the symbolic action reuses subterms, so
//! memory stays linear in the number of distinct subterms even though the
//! unfolded tree grows exponentially with word length. Evaluation and
//! substitution memoize on node identity for the same reason.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::algebra::VirtualBiquandle;
use crate::braid::{BraidWord, Generator};
use crate::coloring::{next_tuple, BudgetError, ColoringResult, RepKind, SearchOptions};

/// The formal binary operators of the free virtual biquandle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    R1,
    R2,
    R1Bar,
    R2Bar,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::R1 => "R1",
            BinOp::R2 => "R2",
            BinOp::R1Bar => "R1b",
            BinOp::R2Bar => "R2b",
        }
    }
}

/// An element of the free virtual biquandle. `FPow(k, t)` is `f^k(t)` with
/// `k != 0`; nested powers are collapsed by the [`fpow`] constructor, so a
/// normalized term never contains `FPow` directly above `FPow`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// Generator `x_i`, 1-based.
    Gen(usize),
    App(BinOp, Rc<Term>, Rc<Term>),
    FPow(i64, Rc<Term>),
}

/// Generator constructor.
pub fn gen(i: usize) -> Rc<Term> {
    assert!(i >= 1, "generators are 1-based");
    Rc::new(Term::Gen(i))
}

/// Binary application constructor.
pub fn app(op: BinOp, left: Rc<Term>, right: Rc<Term>) -> Rc<Term> {
    Rc::new(Term::App(op, left, right))
}

/// Normalizing `f`-power constructor: drops zero exponents and collapses
/// nested powers.
pub fn fpow(k: i64, t: Rc<Term>) -> Rc<Term> {
    if k == 0 {
        return t;
    }
    match &*t {
        Term::FPow(m, inner) => {
            let total = k + m;
            if total == 0 {
                inner.clone()
            } else {
                Rc::new(Term::FPow(total, inner.clone()))
            }
        }
        _ => Rc::new(Term::FPow(k, t)),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Gen(i) => write!(f, "x{i}"),
            Term::App(op, l, r) => write!(f, "{}({l},{r})", op.symbol()),
            Term::FPow(k, t) => write!(f, "f^{k}({t})"),
        }
    }
}

/// The images `rep(b)(x_1), .., rep(b)(x_n)` of the generators under the
/// symbolic action of the word: `phi(sigma_i)` sends `x_i, x_{i+1}` to
/// `R1(x_i, x_{i+1}), R2(x_i, x_{i+1})` and `phi(rho_i)` to
/// `f^{-1}(x_{i+1}), f(x_i)`; `psi` decorates the classical images with `f`
/// and swaps on `rho_i`. Inverse letters use the bar operators.
pub fn symbolic_action(b: &BraidWord, rep: RepKind) -> Vec<Rc<Term>> {
    let n = b.strands();
    let mut terms: Vec<Rc<Term>> = (1..=n).map(gen).collect();
    for &g in b.letters() {
        let i = g.index() - 1;
        let x = terms[i].clone();
        let y = terms[i + 1].clone();
        match (rep, g) {
            (RepKind::Phi, Generator::Sigma(_)) => {
                terms[i] = app(BinOp::R1, x.clone(), y.clone());
                terms[i + 1] = app(BinOp::R2, x, y);
            }
            (RepKind::Phi, Generator::SigmaInv(_)) => {
                terms[i] = app(BinOp::R1Bar, x.clone(), y.clone());
                terms[i + 1] = app(BinOp::R2Bar, x, y);
            }
            (RepKind::Phi, Generator::Rho(_)) => {
                terms[i] = fpow(-1, y);
                terms[i + 1] = fpow(1, x);
            }
            (RepKind::Psi, Generator::Sigma(_)) => {
                terms[i] = app(BinOp::R1, x.clone(), fpow(1, y.clone()));
                terms[i + 1] = app(BinOp::R2, fpow(-1, x), y);
            }
            (RepKind::Psi, Generator::SigmaInv(_)) => {
                terms[i] = app(BinOp::R1Bar, x.clone(), fpow(1, y.clone()));
                terms[i + 1] = app(BinOp::R2Bar, fpow(-1, x), y);
            }
            (RepKind::Psi, Generator::Rho(_)) => {
                terms.swap(i, i + 1);
            }
        }
    }
    terms
}

/// A presented virtual biquandle: `generator_count` generators and a list of
/// `lhs = rhs` relations.
#[derive(Debug, Clone)]
pub struct Presentation {
    generator_count: usize,
    relations: Vec<(Rc<Term>, Rc<Term>)>,
}

impl Presentation {
    pub fn new(generator_count: usize, relations: Vec<(Rc<Term>, Rc<Term>)>) -> Self {
        Presentation {
            generator_count,
            relations,
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relations(&self) -> &[(Rc<Term>, Rc<Term>)] {
        &self.relations
    }

    /// Applies a generator substitution `x_i -> map[i-1]` to both sides of
    /// every relation, renormalizing `f`-powers along the way.
    pub fn substitute(&self, map: &[Rc<Term>]) -> Presentation {
        assert_eq!(map.len(), self.generator_count);
        let mut memo = HashMap::new();
        let relations = self
            .relations
            .iter()
            .map(|(l, r)| {
                (
                    substitute_memo(l, map, &mut memo),
                    substitute_memo(r, map, &mut memo),
                )
            })
            .collect();
        Presentation {
            generator_count: self.generator_count,
            relations,
        }
    }
}

impl fmt::Display for Presentation {
    /// One relation per line, `lhs = rhs`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, r) in &self.relations {
            writeln!(f, "{l} = {r}")?;
        }
        Ok(())
    }
}

/// The presentation of the virtual biquandle attached to the closure of `b`:
/// generators `x_1, .., x_n` and relations `rep(b)(x_i) = x_i`.
pub fn make_presentation(b: &BraidWord, rep: RepKind) -> Presentation {
    let action = symbolic_action(b, rep);
    let relations = action
        .into_iter()
        .enumerate()
        .map(|(idx, t)| (t, gen(idx + 1)))
        .collect();
    Presentation {
        generator_count: b.strands(),
        relations,
    }
}

/// The substitution `x_i -> f^{n-i}(x_i)` realizing the conjugating
/// automorphism of the free virtual biquandle on `n` generators.
pub fn theta_generator_map(n: usize) -> Vec<Rc<Term>> {
    (1..=n).map(|i| fpow((n - i) as i64, gen(i))).collect()
}

fn substitute_memo(
    t: &Rc<Term>,
    map: &[Rc<Term>],
    memo: &mut HashMap<*const Term, Rc<Term>>,
) -> Rc<Term> {
    let key = Rc::as_ptr(t);
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let out = match &**t {
        Term::Gen(i) => map[i - 1].clone(),
        Term::App(op, l, r) => app(
            *op,
            substitute_memo(l, map, memo),
            substitute_memo(r, map, memo),
        ),
        Term::FPow(k, inner) => fpow(*k, substitute_memo(inner, map, memo)),
    };
    memo.insert(key, out.clone());
    out
}

/// Evaluates a term under a total assignment of the generators
/// (`assignment[i-1]` is the value of `x_i`); the structural recursion
/// memoizes on shared subterms.
pub fn eval_term(t: &Rc<Term>, assignment: &[usize], vbq: &VirtualBiquandle) -> usize {
    let mut memo = HashMap::new();
    eval_memo(t, assignment, vbq, &mut memo)
}

fn eval_memo(
    t: &Rc<Term>,
    assignment: &[usize],
    vbq: &VirtualBiquandle,
    memo: &mut HashMap<*const Term, usize>,
) -> usize {
    let key = Rc::as_ptr(t);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let v = match &**t {
        Term::Gen(i) => assignment[i - 1],
        Term::App(op, l, r) => {
            let a = eval_memo(l, assignment, vbq, memo);
            let b = eval_memo(r, assignment, vbq, memo);
            match op {
                BinOp::R1 => vbq.r1(a, b),
                BinOp::R2 => vbq.r2(a, b),
                BinOp::R1Bar => vbq.r1bar(a, b),
                BinOp::R2Bar => vbq.r2bar(a, b),
            }
        }
        Term::FPow(k, inner) => vbq.f_pow(*k, eval_memo(inner, assignment, vbq, memo)),
    };
    memo.insert(key, v);
    v
}

/// Counts the assignments of the generators under which every relation
/// evaluates to equal elements; these are exactly the homomorphisms of the
/// presented structure into `vbq`. Single-threaded; only the budget and
/// materialize options apply.
pub fn count_homs(
    p: &Presentation,
    vbq: &VirtualBiquandle,
    opts: &SearchOptions,
) -> Result<ColoringResult, BudgetError> {
    let m = vbq.n();
    let n = p.generator_count();
    let required = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > opts.budget as u128 {
        return Err(BudgetError {
            required,
            budget: opts.budget,
        });
    }
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    let mut assignment = vec![0usize; n];
    loop {
        let mut memo = HashMap::new();
        let ok = p.relations.iter().all(|(l, r)| {
            eval_memo(l, &assignment, vbq, &mut memo) == eval_memo(r, &assignment, vbq, &mut memo)
        });
        if ok {
            count += 1;
            if opts.materialize {
                witnesses.push(assignment.clone());
            }
        }
        if n == 0 || !next_tuple(&mut assignment, m) {
            break;
        }
    }
    Ok(ColoringResult {
        count,
        witnesses: opts.materialize.then_some(witnesses),
    })
}

/// Canonical form with `f`-powers pushed down to the generators, using the
/// automorphism law `f(R*(s,t)) = R*(f(s), f(t))` for all four operators.
/// Evaluation is preserved for every assignment on every valid structure.
/// Memoized per (node, accumulated shift) so shared subterms stay shared.
pub fn push_f_inward(t: &Rc<Term>) -> Rc<Term> {
    fn go(t: &Rc<Term>, shift: i64, memo: &mut HashMap<(*const Term, i64), Rc<Term>>) -> Rc<Term> {
        let key = (Rc::as_ptr(t), shift);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let out = match &**t {
            Term::Gen(_) => fpow(shift, t.clone()),
            Term::App(op, l, r) => app(*op, go(l, shift, memo), go(r, shift, memo)),
            Term::FPow(k, inner) => go(inner, shift + k, memo),
        };
        memo.insert(key, out.clone());
        out
    }
    go(t, 0, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{linear_biquandle, VirtualBiquandle};
    use crate::braid::parse_braid;
    use crate::coloring::{count_colorings, SearchOptions};

    fn linear_shift() -> VirtualBiquandle {
        VirtualBiquandle::new(linear_biquandle(3, 1, 2).unwrap(), vec![1, 2, 0]).unwrap()
    }

    #[test]
    fn symbolic_action_examples() {
        let empty = parse_braid("", Some(2)).unwrap();
        let terms = symbolic_action(&empty, RepKind::Phi);
        assert_eq!(terms[0].to_string(), "x1");
        assert_eq!(terms[1].to_string(), "x2");

        let s1 = parse_braid("s1", Some(2)).unwrap();
        let phi = symbolic_action(&s1, RepKind::Phi);
        assert_eq!(phi[0].to_string(), "R1(x1,x2)");
        assert_eq!(phi[1].to_string(), "R2(x1,x2)");

        let psi = symbolic_action(&s1, RepKind::Psi);
        assert_eq!(psi[0].to_string(), "R1(x1,f^1(x2))");
        assert_eq!(psi[1].to_string(), "R2(f^-1(x1),x2)");
    }

    #[test]
    fn presentation_examples() {
        let v1 = parse_braid("v1", Some(2)).unwrap();
        let p = make_presentation(&v1, RepKind::Phi);
        assert_eq!(p.to_string(), "f^-1(x2) = x1\nf^1(x1) = x2\n");

        let p = make_presentation(&v1, RepKind::Psi);
        assert_eq!(p.to_string(), "x2 = x1\nx1 = x2\n");

        let s1s1 = parse_braid("s1 s1", Some(2)).unwrap();
        let p = make_presentation(&s1s1, RepKind::Phi);
        assert_eq!(
            p.to_string(),
            "R1(R1(x1,x2),R2(x1,x2)) = x1\nR2(R1(x1,x2),R2(x1,x2)) = x2\n"
        );
    }

    #[test]
    fn fpow_normalization() {
        let t = fpow(2, fpow(-2, gen(1)));
        assert_eq!(t.to_string(), "x1");
        let t = fpow(1, fpow(2, gen(1)));
        assert_eq!(t.to_string(), "f^3(x1)");
        assert_eq!(fpow(0, gen(2)).to_string(), "x2");
    }

    #[test]
    fn eval_term_examples() {
        let vbq = linear_shift();
        assert_eq!(eval_term(&gen(1), &[2], &vbq), 2);
        assert_eq!(eval_term(&fpow(2, gen(1)), &[0], &vbq), 2);
        let t = app(BinOp::R1, gen(1), fpow(1, gen(2)));
        assert_eq!(eval_term(&t, &[0, 1], &vbq), 2);
    }

    #[test]
    fn push_f_inward_examples() {
        let t = fpow(1, app(BinOp::R1, gen(1), gen(2)));
        assert_eq!(push_f_inward(&t).to_string(), "R1(f^1(x1),f^1(x2))");

        let t = fpow(1, fpow(-1, gen(1)));
        assert_eq!(push_f_inward(&t).to_string(), "x1");

        let t = fpow(-1, app(BinOp::R2, fpow(1, gen(1)), gen(2)));
        assert_eq!(push_f_inward(&t).to_string(), "R2(x1,f^-1(x2))");
    }

    #[test]
    fn push_f_inward_preserves_evaluation() {
        // carriers of size 3 and 4
        let structures = [
            linear_shift(),
            VirtualBiquandle::new(linear_biquandle(4, 1, 3).unwrap(), vec![1, 2, 3, 0]).unwrap(),
        ];
        let b = parse_braid("v1 s1 v2 S1 v1", Some(3)).unwrap();
        for vbq in &structures {
            for rep in [RepKind::Phi, RepKind::Psi] {
                for t in symbolic_action(&b, rep) {
                    let pushed = push_f_inward(&t);
                    let mut assignment = vec![0usize; 3];
                    loop {
                        assert_eq!(
                            eval_term(&t, &assignment, vbq),
                            eval_term(&pushed, &assignment, vbq)
                        );
                        if !crate::coloring::next_tuple(&mut assignment, vbq.n()) {
                            break;
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hom_count_examples() {
        let vbq = linear_shift();
        let opts = SearchOptions::default();
        let s1 = parse_braid("s1", Some(2)).unwrap();
        let p = make_presentation(&s1, RepKind::Phi);
        assert_eq!(count_homs(&p, &vbq, &opts).unwrap().count, 3);

        let empty = parse_braid("", Some(2)).unwrap();
        let p = make_presentation(&empty, RepKind::Phi);
        assert_eq!(count_homs(&p, &vbq, &opts).unwrap().count, 9);
    }

    #[test]
    fn hom_counts_match_fixed_point_counts() {
        let vbq = linear_shift();
        let opts = SearchOptions::default();
        for seed in 0..10 {
            let b = crate::braid::random_braid(3, 6, seed);
            for rep in [RepKind::Phi, RepKind::Psi] {
                let p = make_presentation(&b, rep);
                assert_eq!(
                    count_homs(&p, &vbq, &opts).unwrap().count,
                    count_colorings(&vbq, &b, rep, &opts).unwrap().count,
                    "word {b} rep {rep:?}"
                );
            }
        }
    }

    #[test]
    fn theta_substitution_matches_psi_hom_count() {
        let vbq = linear_shift();
        let opts = SearchOptions::default();
        for seed in 20..30 {
            let b = crate::braid::random_braid(3, 6, seed);
            let phi_pres = make_presentation(&b, RepKind::Phi);
            let substituted = phi_pres.substitute(&theta_generator_map(3));
            let psi_pres = make_presentation(&b, RepKind::Psi);
            assert_eq!(
                count_homs(&substituted, &vbq, &opts).unwrap().count,
                count_homs(&psi_pres, &vbq, &opts).unwrap().count,
                "word {b}"
            );
        }
    }

    #[test]
    fn symbolic_concrete_coherence() {
        let vbq = linear_shift();
        for seed in 40..50 {
            let b = crate::braid::random_braid(3, 7, seed);
            for rep in [RepKind::Phi, RepKind::Psi] {
                let terms = symbolic_action(&b, rep);
                let mut t = vec![0usize; 3];
                loop {
                    let concrete = crate::coloring::act_braid(&vbq, &b, rep, &t);
                    for (i, term) in terms.iter().enumerate() {
                        assert_eq!(eval_term(term, &t, &vbq), concrete[i]);
                    }
                    if !crate::coloring::next_tuple(&mut t, 3) {
                        break;
                    }
                }
            }
        }
    }
}
