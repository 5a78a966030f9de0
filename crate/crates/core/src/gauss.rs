//! Coloring of virtual links given as Gauss codes, using only the classical
//! crossings.
//!
//! Every crossing imposes the pair of equations from the relabeling rules
//! that absorb the automorphism into the operator: at a positive crossing
//! with under-in `x` and over-in `y`, the over-out is `R1(x, f(y))` and the
//! under-out is `R2(f^{-1}(x), y)`; a negative crossing uses the inverse
//! operator in the same positions with the over/under roles exchanged. Both
//! signs are therefore instances of the single bijection
//! `VR(x, y) = (R1(x, f(y)), R2(f^{-1}(x), y))` on the incident semiarcs,
//! which is what the propagation solver works with.

use crate::algebra::{derive_vr, Biquandle, VirtualBiquandle};
use crate::braid::{GaussCode, GaussCodeError, GaussToken, Passage, Sign};
use crate::coloring::{BudgetError, ColoringResult, SearchOptions};
use crate::terms::{app, fpow, gen, BinOp, Presentation, Term};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GaussParseError {
    #[error("empty input")]
    Empty,
    #[error("component {component}: cannot read a token at {rest:?}")]
    BadToken { component: usize, rest: String },
    #[error(transparent)]
    Code(#[from] GaussCodeError),
}

/// Parses the Gauss code grammar: components separated by `|`, tokens
/// concatenated, each token `O<id><sign>` or `U<id><sign>`, e.g.
/// `U1+O2+|O1+U2+`. An empty component is a crossing-free circle; the empty
/// string is rejected as ambiguous.
pub fn parse_gauss(text: &str) -> Result<GaussCode, GaussParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(GaussParseError::Empty);
    }
    let mut components = Vec::new();
    for (ci, chunk) in text.split('|').enumerate() {
        let mut tokens = Vec::new();
        let mut rest = chunk;
        while !rest.is_empty() {
            let bad = || GaussParseError::BadToken {
                component: ci,
                rest: rest.to_string(),
            };
            let passage = match rest.as_bytes()[0] {
                b'O' => Passage::Over,
                b'U' => Passage::Under,
                _ => return Err(bad()),
            };
            let digits = rest[1..].bytes().take_while(|b| b.is_ascii_digit()).count();
            if digits == 0 {
                return Err(bad());
            }
            let id: usize = rest[1..1 + digits].parse().map_err(|_| bad())?;
            let sign = match rest.as_bytes().get(1 + digits) {
                Some(b'+') => Sign::Pos,
                Some(b'-') => Sign::Neg,
                _ => return Err(bad()),
            };
            tokens.push(GaussToken { passage, id, sign });
            rest = &rest[2 + digits..];
        }
        components.push(tokens);
    }
    Ok(GaussCode::new(components)?)
}

/// A classical crossing with the indices of its four incident semiarcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingRecord {
    pub id: usize,
    pub sign: Sign,
    pub over_in: usize,
    pub over_out: usize,
    pub under_in: usize,
    pub under_out: usize,
}

/// Semiarc decomposition of a Gauss code: one semiarc per arc between
/// consecutive passages of a component, plus one circular semiarc per
/// token-free component.
#[derive(Debug, Clone)]
pub struct SemiarcGraph {
    semiarc_count: usize,
    crossings: Vec<CrossingRecord>,
    /// Semiarc index ranges per component, in component order.
    component_ranges: Vec<std::ops::Range<usize>>,
    free_circles: usize,
}

impl SemiarcGraph {
    pub fn semiarc_count(&self) -> usize {
        self.semiarc_count
    }

    /// Crossings in order of first appearance in the code.
    pub fn crossings(&self) -> &[CrossingRecord] {
        &self.crossings
    }

    pub fn component_ranges(&self) -> &[std::ops::Range<usize>] {
        &self.component_ranges
    }

    /// Token-free components, each contributing an unconstrained circle.
    pub fn free_circles(&self) -> usize {
        self.free_circles
    }
}

/// Builds the semiarc graph. A component with `k >= 1` tokens contributes
/// exactly `k` semiarcs, where semiarc `base + j` runs from token `j` to
/// token `j+1` (cyclically); a token-free component contributes one.
pub fn build_semiarc_graph(code: &GaussCode) -> SemiarcGraph {
    use std::collections::HashMap;
    let mut component_ranges = Vec::new();
    let mut free_circles = 0;
    let mut base = 0;
    // (over_in, over_out) and (under_in, under_out) per crossing id
    let mut halves: HashMap<usize, CrossingRecord> = HashMap::new();
    let mut order = Vec::new();
    for comp in code.components() {
        let k = comp.len();
        component_ranges.push(base..base + k.max(1));
        if k == 0 {
            free_circles += 1;
        }
        for (j, token) in comp.iter().enumerate() {
            let arc_in = base + (j + k - 1) % k;
            let arc_out = base + j;
            let rec = halves.entry(token.id).or_insert_with(|| {
                order.push(token.id);
                CrossingRecord {
                    id: token.id,
                    sign: token.sign,
                    over_in: usize::MAX,
                    over_out: usize::MAX,
                    under_in: usize::MAX,
                    under_out: usize::MAX,
                }
            });
            match token.passage {
                Passage::Over => {
                    rec.over_in = arc_in;
                    rec.over_out = arc_out;
                }
                Passage::Under => {
                    rec.under_in = arc_in;
                    rec.under_out = arc_out;
                }
            }
        }
        base += k.max(1);
    }
    let crossings = order.into_iter().map(|id| halves[&id]).collect();
    SemiarcGraph {
        semiarc_count: base,
        crossings,
        component_ranges,
        free_circles,
    }
}

/// The two symbolic equations a crossing imposes on its incident semiarc
/// labels, as `(expression, out-label)` pairs over generators `x_{s+1}` for
/// semiarc `s`. Positive: `R1(x, f(y)) = z` and `R2(f^{-1}(x), y) = w` with
/// `x` the under-in, `y` the over-in, `z` the over-out, `w` the under-out.
/// Negative: the bar operators with the over/under roles exchanged.
pub fn crossing_constraints(rec: &CrossingRecord) -> [(Rc<Term>, Rc<Term>); 2] {
    let g = |s: usize| gen(s + 1);
    match rec.sign {
        Sign::Pos => [
            (
                app(BinOp::R1, g(rec.under_in), fpow(1, g(rec.over_in))),
                g(rec.over_out),
            ),
            (
                app(BinOp::R2, fpow(-1, g(rec.under_in)), g(rec.over_in)),
                g(rec.under_out),
            ),
        ],
        Sign::Neg => [
            (
                app(BinOp::R1Bar, g(rec.over_in), fpow(1, g(rec.under_in))),
                g(rec.under_out),
            ),
            (
                app(BinOp::R2Bar, fpow(-1, g(rec.over_in)), g(rec.under_in)),
                g(rec.over_out),
            ),
        ],
    }
}

/// The presentation read off a Gauss code: one generator per semiarc, the
/// two equations of [`crossing_constraints`] per crossing. A token-free
/// component contributes its generator and no relation.
pub fn gauss_presentation(code: &GaussCode) -> Presentation {
    let graph = build_semiarc_graph(code);
    let relations = graph
        .crossings()
        .iter()
        .flat_map(crossing_constraints)
        .collect();
    Presentation::new(graph.semiarc_count(), relations)
}

/// True iff `assignment` satisfies both equations at every crossing,
/// evaluated directly from the original operator and automorphism (not
/// through the derived `VR` tables the solver uses).
pub fn check_assignment(
    vbq: &VirtualBiquandle,
    graph: &SemiarcGraph,
    assignment: &[usize],
) -> bool {
    graph.crossings().iter().all(|c| {
        let (oi, oo) = (assignment[c.over_in], assignment[c.over_out]);
        let (ui, uo) = (assignment[c.under_in], assignment[c.under_out]);
        match c.sign {
            Sign::Pos => oo == vbq.r1(ui, vbq.f(oi)) && uo == vbq.r2(vbq.f_inv(ui), oi),
            Sign::Neg => uo == vbq.r1bar(oi, vbq.f(ui)) && oo == vbq.r2bar(vbq.f_inv(oi), ui),
        }
    })
}

/// Constraint `VR(vars[0], vars[1]) = (vars[2], vars[3])` on semiarc ids.
/// Positive crossings bind `(under_in, over_in) -> (over_out, under_out)`;
/// negative ones are the same relation read upside-down,
/// `(under_out, over_out) -> (over_in, under_in)`.
fn vr_constraints(graph: &SemiarcGraph) -> Vec<[usize; 4]> {
    graph
        .crossings()
        .iter()
        .map(|c| match c.sign {
            Sign::Pos => [c.under_in, c.over_in, c.over_out, c.under_out],
            Sign::Neg => [c.under_out, c.over_out, c.over_in, c.under_in],
        })
        .collect()
}

const UNSET: usize = usize::MAX;

struct Solver<'a> {
    vr: &'a Biquandle,
    m: usize,
    constraints: Vec<[usize; 4]>,
    touching: Vec<Vec<usize>>,
    assignment: Vec<usize>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    budget: u64,
    steps: u64,
    materialize: bool,
    count: u64,
    witnesses: Vec<Vec<usize>>,
}

enum Outcome {
    Ok,
    Conflict,
}

impl<'a> Solver<'a> {
    /// Assigns or checks one semiarc; enqueues its constraints on a fresh
    /// assignment.
    fn set(&mut self, var: usize, value: usize) -> Result<Outcome, BudgetError> {
        if self.assignment[var] != UNSET {
            return Ok(if self.assignment[var] == value {
                Outcome::Ok
            } else {
                Outcome::Conflict
            });
        }
        self.steps += 1;
        if self.steps > self.budget {
            return Err(BudgetError {
                required: self.steps as u128,
                budget: self.budget,
            });
        }
        self.assignment[var] = value;
        self.trail.push(var);
        self.queue.extend_from_slice(&self.touching[var]);
        Ok(Outcome::Ok)
    }

    /// Unit propagation to a fixed point: when both inputs of a constraint
    /// are known the outputs are forced; when both outputs are known the
    /// inputs are recovered through the inverse; an output plus the matching
    /// input recovers the missing input through the division tables.
    fn propagate(&mut self) -> Result<Outcome, BudgetError> {
        while let Some(ci) = self.queue.pop() {
            let [a, b, c, d] = self.constraints[ci];
            let (va, vb, vc, vd) = (
                self.assignment[a],
                self.assignment[b],
                self.assignment[c],
                self.assignment[d],
            );
            let mut forced: [(usize, usize); 2] = [(UNSET, UNSET); 2];
            let mut k = 0;
            if va != UNSET && vb != UNSET {
                forced[0] = (c, self.vr.r1(va, vb));
                forced[1] = (d, self.vr.r2(va, vb));
                k = 2;
            } else if vc != UNSET && vd != UNSET {
                forced[0] = (a, self.vr.r1bar(vc, vd));
                forced[1] = (b, self.vr.r2bar(vc, vd));
                k = 2;
            } else if va != UNSET && vc != UNSET {
                forced[0] = (b, self.vr.left_div(va, vc));
                k = 1;
            } else if vb != UNSET && vd != UNSET {
                forced[0] = (a, self.vr.right_div(vb, vd));
                k = 1;
            }
            for &(var, value) in &forced[..k] {
                if let Outcome::Conflict = self.set(var, value)? {
                    return Ok(Outcome::Conflict);
                }
            }
        }
        Ok(Outcome::Ok)
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            self.assignment[var] = UNSET;
        }
        self.queue.clear();
    }

    fn search(&mut self) -> Result<(), BudgetError> {
        let var = match self.assignment.iter().position(|&v| v == UNSET) {
            Some(var) => var,
            None => {
                debug_assert!(self.constraints.iter().all(|&[a, b, c, d]| self
                    .vr
                    .r1(self.assignment[a], self.assignment[b])
                    == self.assignment[c]
                    && self.vr.r2(self.assignment[a], self.assignment[b]) == self.assignment[d]));
                self.count += 1;
                if self.materialize {
                    self.witnesses.push(self.assignment.clone());
                }
                return Ok(());
            }
        };
        for value in 0..self.m {
            let mark = self.trail.len();
            let ok = match self.set(var, value)? {
                Outcome::Conflict => false,
                Outcome::Ok => matches!(self.propagate()?, Outcome::Ok),
            };
            if ok {
                self.search()?;
            }
            self.rollback(mark);
        }
        Ok(())
    }
}

/// Counts the semiarc labelings satisfying every crossing equation, by unit
/// propagation interleaved with backtracking over the lowest-index
/// unassigned semiarc. Token-free circles are unconstrained and contribute a
/// factor `|X|` each. The budget bounds the number of assignment steps.
pub fn color_gauss(
    vbq: &VirtualBiquandle,
    code: &GaussCode,
    opts: &SearchOptions,
) -> Result<ColoringResult, BudgetError> {
    let graph = build_semiarc_graph(code);
    let vr = Biquandle::new(derive_vr(vbq)).expect("derived VR table must validate");
    let constraints = vr_constraints(&graph);
    let mut touching = vec![Vec::new(); graph.semiarc_count()];
    for (ci, vars) in constraints.iter().enumerate() {
        for &v in vars {
            if !touching[v].contains(&ci) {
                touching[v].push(ci);
            }
        }
    }
    let mut solver = Solver {
        vr: &vr,
        m: vbq.n(),
        constraints,
        touching,
        assignment: vec![UNSET; graph.semiarc_count()],
        trail: Vec::new(),
        queue: Vec::new(),
        budget: opts.budget,
        steps: 0,
        materialize: opts.materialize,
        count: 0,
        witnesses: Vec::new(),
    };
    solver.search()?;
    debug_assert!(solver
        .witnesses
        .iter()
        .all(|w| check_assignment(vbq, &graph, w)));
    Ok(ColoringResult {
        count: solver.count,
        witnesses: opts.materialize.then_some(solver.witnesses),
    })
}
