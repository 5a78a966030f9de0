//! Finite carriers, Yang-Baxter operator tables, axiom checking, and the
//! derived `VR` operator.
//!
//! Elements of a carrier of size `n` are the integers `0..n`; every operator
//! is a pair of row-major `n x n` tables so all lookups are constant time.
//! Axiom checks are exhaustive: the Yang-Baxter relation costs `O(n^3)`, the
//! remaining axioms `O(n^2)`.

use std::fmt;
use thiserror::Error;

/// A finite map `R: X x X -> X x X` over `X = {0, .., n-1}`, stored as the
/// two component tables `R1` and `R2` with `R(x,y) = (R1(x,y), R2(x,y))`.
///
/// Construction only enforces shape and entry range; run
/// [`validate_biquandle`] or build a [`Biquandle`] to check the axioms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorTable {
    n: usize,
    r1: Vec<usize>,
    r2: Vec<usize>,
}

/// Malformed input data: wrong shape, out-of-range entry, or a bad
/// permutation. Distinct from an axiom failure, which is a semantic verdict
/// about well-formed data.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("{table} has {rows} rows, expected {n}")]
    BadRowCount {
        table: &'static str,
        rows: usize,
        n: usize,
    },
    #[error("{table} row {row} has {len} entries, expected {n}")]
    BadRowLength {
        table: &'static str,
        row: usize,
        len: usize,
        n: usize,
    },
    #[error("{table}[{row}][{col}] = {value}, out of range for carrier size {n}")]
    EntryOutOfRange {
        table: &'static str,
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("permutation has {len} entries, expected {n}")]
    BadPermutationLength { len: usize, n: usize },
    #[error("not a permutation: value {value} is repeated or out of range")]
    NotAPermutation { value: usize },
}

impl OperatorTable {
    /// Builds a table from explicit rows, checking shape and entry range.
    pub fn from_rows(r1: &[Vec<usize>], r2: &[Vec<usize>]) -> Result<Self, StructureError> {
        let n = r1.len();
        if n == 0 {
            return Err(StructureError::EmptyCarrier);
        }
        if r2.len() != n {
            return Err(StructureError::BadRowCount {
                table: "R2",
                rows: r2.len(),
                n,
            });
        }
        let mut flat1 = Vec::with_capacity(n * n);
        let mut flat2 = Vec::with_capacity(n * n);
        for (table, rows, flat) in [("R1", r1, &mut flat1), ("R2", r2, &mut flat2)] {
            for (row, entries) in rows.iter().enumerate() {
                if entries.len() != n {
                    return Err(StructureError::BadRowLength {
                        table,
                        row,
                        len: entries.len(),
                        n,
                    });
                }
                for (col, &value) in entries.iter().enumerate() {
                    if value >= n {
                        return Err(StructureError::EntryOutOfRange {
                            table,
                            row,
                            col,
                            value,
                            n,
                        });
                    }
                    flat.push(value);
                }
            }
        }
        Ok(OperatorTable {
            n,
            r1: flat1,
            r2: flat2,
        })
    }

    /// Tabulates `R(x,y) = (r1(x,y), r2(x,y))` from closures. The closures
    /// must return values below `n`.
    pub fn from_fn(
        n: usize,
        r1: impl Fn(usize, usize) -> usize,
        r2: impl Fn(usize, usize) -> usize,
    ) -> Self {
        assert!(n > 0, "carrier must have at least one element");
        let mut flat1 = Vec::with_capacity(n * n);
        let mut flat2 = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (u, v) = (r1(x, y), r2(x, y));
                assert!(u < n && v < n, "operator value out of range");
                flat1.push(u);
                flat2.push(v);
            }
        }
        OperatorTable {
            n,
            r1: flat1,
            r2: flat2,
        }
    }

    /// Carrier size.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r1(&self, x: usize, y: usize) -> usize {
        self.r1[x * self.n + y]
    }

    #[inline]
    pub fn r2(&self, x: usize, y: usize) -> usize {
        self.r2[x * self.n + y]
    }

    /// Both components at once.
    #[inline]
    pub fn apply(&self, x: usize, y: usize) -> (usize, usize) {
        (self.r1(x, y), self.r2(x, y))
    }

    /// Flat serialization `r1 ++ r2`, used by canonical keys and catalog
    /// ordering.
    pub fn flat(&self) -> Vec<usize> {
        let mut out = self.r1.clone();
        out.extend_from_slice(&self.r2);
        out
    }
}

/// Checks that `f` is a permutation of `0..n` and returns its inverse.
pub fn permutation_inverse(f: &[usize], n: usize) -> Result<Vec<usize>, StructureError> {
    if f.len() != n {
        return Err(StructureError::BadPermutationLength { len: f.len(), n });
    }
    let mut inv = vec![usize::MAX; n];
    for (x, &y) in f.iter().enumerate() {
        if y >= n || inv[y] != usize::MAX {
            return Err(StructureError::NotAPermutation { value: y });
        }
        inv[y] = x;
    }
    Ok(inv)
}

/// The five biquandle axioms plus the automorphism condition checked for
/// virtual biquandles. The type I condition appears in the two stated forms;
/// they are claimed equivalent, and we verify both rather than assume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `(R x id)(id x R)(R x id) = (id x R)(R x id)(id x R)` on all triples.
    YangBaxter,
    /// `R` is a bijection on `X x X`.
    Invertible,
    /// Each row `R1(x, -)` is a permutation of `X`.
    LeftInvertible,
    /// Each column `R2(-, y)` is a permutation of `X`.
    RightInvertible,
    /// For each `a` there is exactly one `x` with `R(x,a) = (x,a)`.
    TypeILeft,
    /// For each `a` there is exactly one `y` with `R(a,y) = (a,y)`.
    TypeIRight,
    /// `f` commutes with both components of `R`.
    Automorphism,
}

impl Axiom {
    /// Stable lowercase name, used in reports.
    pub fn name(self) -> &'static str {
        match self {
            Axiom::YangBaxter => "yang-baxter",
            Axiom::Invertible => "invertible",
            Axiom::LeftInvertible => "left-invertible",
            Axiom::RightInvertible => "right-invertible",
            Axiom::TypeILeft => "type-i-left",
            Axiom::TypeIRight => "type-i-right",
            Axiom::Automorphism => "automorphism",
        }
    }
}

/// A concrete witness violating one axiom, checkable by direct table lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomFailure {
    YangBaxter {
        x: usize,
        y: usize,
        z: usize,
        lhs: [usize; 3],
        rhs: [usize; 3],
    },
    Collision {
        first: (usize, usize),
        second: (usize, usize),
        image: (usize, usize),
    },
    LeftDuplicate {
        x: usize,
        y1: usize,
        y2: usize,
        value: usize,
    },
    RightDuplicate {
        y: usize,
        x1: usize,
        x2: usize,
        value: usize,
    },
    /// `fixed` is the full set `{x : R(x,a) = (x,a)}`; a failure means its
    /// size differs from one.
    TypeILeft { a: usize, fixed: Vec<usize> },
    /// `fixed` is the full set `{y : R(a,y) = (a,y)}`.
    TypeIRight { a: usize, fixed: Vec<usize> },
    /// `f(table(x,y)) != table(f(x), f(y))`.
    Automorphism {
        x: usize,
        y: usize,
        table: &'static str,
    },
}

impl AxiomFailure {
    pub fn axiom(&self) -> Axiom {
        match self {
            AxiomFailure::YangBaxter { .. } => Axiom::YangBaxter,
            AxiomFailure::Collision { .. } => Axiom::Invertible,
            AxiomFailure::LeftDuplicate { .. } => Axiom::LeftInvertible,
            AxiomFailure::RightDuplicate { .. } => Axiom::RightInvertible,
            AxiomFailure::TypeILeft { .. } => Axiom::TypeILeft,
            AxiomFailure::TypeIRight { .. } => Axiom::TypeIRight,
            AxiomFailure::Automorphism { .. } => Axiom::Automorphism,
        }
    }
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::YangBaxter { x, y, z, lhs, rhs } => write!(
                f,
                "at (x,y,z)=({x},{y},{z}): lhs=({},{},{}) rhs=({},{},{})",
                lhs[0], lhs[1], lhs[2], rhs[0], rhs[1], rhs[2]
            ),
            AxiomFailure::Collision {
                first,
                second,
                image,
            } => write!(
                f,
                "R({},{}) = R({},{}) = ({},{})",
                first.0, first.1, second.0, second.1, image.0, image.1
            ),
            AxiomFailure::LeftDuplicate { x, y1, y2, value } => {
                write!(f, "R1({x},{y1}) = R1({x},{y2}) = {value}")
            }
            AxiomFailure::RightDuplicate { y, x1, x2, value } => {
                write!(f, "R2({x1},{y}) = R2({x2},{y}) = {value}")
            }
            AxiomFailure::TypeILeft { a, fixed } => {
                write!(f, "a={a} has fixed x set {fixed:?}, expected exactly one")
            }
            AxiomFailure::TypeIRight { a, fixed } => {
                write!(f, "a={a} has fixed y set {fixed:?}, expected exactly one")
            }
            AxiomFailure::Automorphism { x, y, table } => {
                write!(f, "f({table}({x},{y})) != {table}(f({x}),f({y}))")
            }
        }
    }
}

/// Outcome of an axiom check: one witness per failing axiom. A report from
/// [`validate_biquandle`] covers the six biquandle axioms; a report from
/// [`validate_virtual`] additionally covers the automorphism condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    n: usize,
    automorphism_checked: bool,
    failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Axioms covered by this report, in display order.
    pub fn axioms_checked(&self) -> Vec<Axiom> {
        let mut list = vec![
            Axiom::YangBaxter,
            Axiom::Invertible,
            Axiom::LeftInvertible,
            Axiom::RightInvertible,
            Axiom::TypeILeft,
            Axiom::TypeIRight,
        ];
        if self.automorphism_checked {
            list.push(Axiom::Automorphism);
        }
        list
    }

    pub fn holds(&self, axiom: Axiom) -> bool {
        self.failure_for(axiom).is_none()
    }

    pub fn failure_for(&self, axiom: Axiom) -> Option<&AxiomFailure> {
        self.failures.iter().find(|w| w.axiom() == axiom)
    }

    pub fn failures(&self) -> &[AxiomFailure] {
        &self.failures
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "all axioms hold");
        }
        let mut first = true;
        for w in &self.failures {
            if !first {
                write!(f, "; ")?;
            }
            write!(f, "{} fails: {}", w.axiom().name(), w)?;
            first = false;
        }
        Ok(())
    }
}

fn ybe_sides(op: &OperatorTable, x: usize, y: usize, z: usize) -> ([usize; 3], [usize; 3]) {
    // (R x id)(id x R)(R x id)
    let (a, b) = op.apply(x, y);
    let (c, d) = op.apply(b, z);
    let (e, g) = op.apply(a, c);
    let lhs = [e, g, d];
    // (id x R)(R x id)(id x R)
    let (p, q) = op.apply(y, z);
    let (s, t) = op.apply(x, p);
    let (u, v) = op.apply(t, q);
    let rhs = [s, u, v];
    (lhs, rhs)
}

/// Exhaustively checks the five biquandle axioms (with type I in both stated
/// forms) and reports one witness per failing axiom.
pub fn validate_biquandle(op: &OperatorTable) -> AxiomReport {
    let n = op.n();
    let mut failures = Vec::new();

    'ybe: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (lhs, rhs) = ybe_sides(op, x, y, z);
                if lhs != rhs {
                    failures.push(AxiomFailure::YangBaxter { x, y, z, lhs, rhs });
                    break 'ybe;
                }
            }
        }
    }

    let mut seen = vec![usize::MAX; n * n];
    'inv: for x in 0..n {
        for y in 0..n {
            let (u, v) = op.apply(x, y);
            let slot = u * n + v;
            if seen[slot] != usize::MAX {
                let prev = seen[slot];
                failures.push(AxiomFailure::Collision {
                    first: (prev / n, prev % n),
                    second: (x, y),
                    image: (u, v),
                });
                break 'inv;
            }
            seen[slot] = x * n + y;
        }
    }

    let mut hit = vec![usize::MAX; n];
    'left: for x in 0..n {
        hit.fill(usize::MAX);
        for y in 0..n {
            let value = op.r1(x, y);
            if hit[value] != usize::MAX {
                failures.push(AxiomFailure::LeftDuplicate {
                    x,
                    y1: hit[value],
                    y2: y,
                    value,
                });
                break 'left;
            }
            hit[value] = y;
        }
    }

    'right: for y in 0..n {
        hit.fill(usize::MAX);
        for x in 0..n {
            let value = op.r2(x, y);
            if hit[value] != usize::MAX {
                failures.push(AxiomFailure::RightDuplicate {
                    y,
                    x1: hit[value],
                    x2: x,
                    value,
                });
                break 'right;
            }
            hit[value] = x;
        }
    }

    for a in 0..n {
        let fixed: Vec<usize> = (0..n)
            .filter(|&x| op.r1(x, a) == x && op.r2(x, a) == a)
            .collect();
        if fixed.len() != 1 {
            failures.push(AxiomFailure::TypeILeft { a, fixed });
            break;
        }
    }

    for a in 0..n {
        let fixed: Vec<usize> = (0..n)
            .filter(|&y| op.r1(a, y) == a && op.r2(a, y) == y)
            .collect();
        if fixed.len() != 1 {
            failures.push(AxiomFailure::TypeIRight { a, fixed });
            break;
        }
    }

    AxiomReport {
        n,
        automorphism_checked: false,
        failures,
    }
}

/// Fast boolean path of [`validate_biquandle`]: same verdict, aborts on the
/// first violation, allocates nothing beyond two scratch tables.
pub fn is_biquandle(op: &OperatorTable) -> bool {
    let n = op.n();
    let mut seen = vec![false; n * n];
    for x in 0..n {
        for y in 0..n {
            let (u, v) = op.apply(x, y);
            let slot = u * n + v;
            if seen[slot] {
                return false;
            }
            seen[slot] = true;
        }
    }
    let mut hit = vec![false; n];
    for x in 0..n {
        hit.fill(false);
        for y in 0..n {
            let value = op.r1(x, y);
            if hit[value] {
                return false;
            }
            hit[value] = true;
        }
    }
    for y in 0..n {
        hit.fill(false);
        for x in 0..n {
            let value = op.r2(x, y);
            if hit[value] {
                return false;
            }
            hit[value] = true;
        }
    }
    for a in 0..n {
        let mut left = 0;
        let mut right = 0;
        for t in 0..n {
            if op.r1(t, a) == t && op.r2(t, a) == a {
                left += 1;
            }
            if op.r1(a, t) == a && op.r2(a, t) == t {
                right += 1;
            }
        }
        if left != 1 || right != 1 {
            return false;
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (lhs, rhs) = ybe_sides(op, x, y, z);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks the biquandle axioms together with the requirement that `f` be an
/// automorphism of the operator. `f` itself must be a permutation; that is a
/// structural error, not an axiom verdict.
pub fn validate_virtual(op: &OperatorTable, f: &[usize]) -> Result<AxiomReport, StructureError> {
    let n = op.n();
    permutation_inverse(f, n)?;
    let mut report = validate_biquandle(op);
    report.automorphism_checked = true;
    'auto: for x in 0..n {
        for y in 0..n {
            if op.r1(f[x], f[y]) != f[op.r1(x, y)] {
                report
                    .failures
                    .push(AxiomFailure::Automorphism { x, y, table: "R1" });
                break 'auto;
            }
            if op.r2(f[x], f[y]) != f[op.r2(x, y)] {
                report
                    .failures
                    .push(AxiomFailure::Automorphism { x, y, table: "R2" });
                break 'auto;
            }
        }
    }
    Ok(report)
}

/// Inverts `R` as a map on `X x X`, returning the table of `Rbar = R^{-1}`.
pub fn invert_operator(op: &OperatorTable) -> Result<OperatorTable, AxiomFailure> {
    let n = op.n();
    let mut r1bar = vec![usize::MAX; n * n];
    let mut r2bar = vec![usize::MAX; n * n];
    for x in 0..n {
        for y in 0..n {
            let (u, v) = op.apply(x, y);
            let slot = u * n + v;
            if r1bar[slot] != usize::MAX {
                return Err(AxiomFailure::Collision {
                    first: (r1bar[slot], r2bar[slot]),
                    second: (x, y),
                    image: (u, v),
                });
            }
            r1bar[slot] = x;
            r2bar[slot] = y;
        }
    }
    Ok(OperatorTable {
        n,
        r1: r1bar,
        r2: r2bar,
    })
}

/// A validated biquandle: the operator table plus every derived table the
/// coloring and solving code needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biquandle {
    op: OperatorTable,
    bar: OperatorTable,
    /// `left_div[x*n+z] = y` with `R1(x,y) = z`.
    left_div: Vec<usize>,
    /// `right_div[y*n+w] = x` with `R2(x,y) = w`.
    right_div: Vec<usize>,
    /// `(a, x)` pairs with `R(x,a) = (x,a)`, one per `a`, in order of `a`.
    fixed_pairs: Vec<(usize, usize)>,
}

/// Validation outcome for biquandle or virtual biquandle construction.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("malformed structure: {0}")]
    Structure(#[from] StructureError),
    #[error("axioms violated: {0}")]
    Axioms(AxiomReport),
}

impl Biquandle {
    pub fn new(op: OperatorTable) -> Result<Self, ValidationError> {
        let report = validate_biquandle(&op);
        if !report.passed() {
            return Err(ValidationError::Axioms(report));
        }
        Ok(Self::from_validated(&op))
    }

    // Derivations assume the axioms already hold.
    fn from_validated(op: &OperatorTable) -> Self {
        let n = op.n();
        let bar = invert_operator(op).expect("validated operator is bijective");
        let mut left_div = vec![0; n * n];
        let mut right_div = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                left_div[x * n + op.r1(x, y)] = y;
                right_div[y * n + op.r2(x, y)] = x;
            }
        }
        let fixed_pairs = (0..n)
            .map(|a| {
                let x = (0..n)
                    .find(|&x| op.r1(x, a) == x && op.r2(x, a) == a)
                    .expect("type I guarantees a fixed pair");
                (a, x)
            })
            .collect();
        Biquandle {
            op: op.clone(),
            bar,
            left_div,
            right_div,
            fixed_pairs,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.op.n()
    }

    pub fn op(&self) -> &OperatorTable {
        &self.op
    }

    /// The inverse operator `Rbar` as a table.
    pub fn bar(&self) -> &OperatorTable {
        &self.bar
    }

    #[inline]
    pub fn r1(&self, x: usize, y: usize) -> usize {
        self.op.r1(x, y)
    }

    #[inline]
    pub fn r2(&self, x: usize, y: usize) -> usize {
        self.op.r2(x, y)
    }

    #[inline]
    pub fn r1bar(&self, u: usize, v: usize) -> usize {
        self.bar.r1(u, v)
    }

    #[inline]
    pub fn r2bar(&self, u: usize, v: usize) -> usize {
        self.bar.r2(u, v)
    }

    /// The unique `y` with `R1(x,y) = z`.
    #[inline]
    pub fn left_div(&self, x: usize, z: usize) -> usize {
        self.left_div[x * self.n() + z]
    }

    /// The unique `x` with `R2(x,y) = w`.
    #[inline]
    pub fn right_div(&self, y: usize, w: usize) -> usize {
        self.right_div[y * self.n() + w]
    }

    /// The `(a, x)` pairs realizing the type I condition, indexed by `a`.
    pub fn fixed_pairs(&self) -> &[(usize, usize)] {
        &self.fixed_pairs
    }
}

/// A validated virtual biquandle: a [`Biquandle`] together with an
/// automorphism `f` and its inverse. Immutable after construction, safe to
/// share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualBiquandle {
    bq: Biquandle,
    f: Vec<usize>,
    f_inv: Vec<usize>,
}

impl VirtualBiquandle {
    pub fn new(op: OperatorTable, f: Vec<usize>) -> Result<Self, ValidationError> {
        let report = validate_virtual(&op, &f)?;
        if !report.passed() {
            return Err(ValidationError::Axioms(report));
        }
        let f_inv = permutation_inverse(&f, op.n()).expect("checked above");
        Ok(VirtualBiquandle {
            bq: Biquandle::from_validated(&op),
            f,
            f_inv,
        })
    }

    /// Wraps a biquandle with the identity automorphism.
    pub fn plain(op: OperatorTable) -> Result<Self, ValidationError> {
        let f = (0..op.n()).collect();
        VirtualBiquandle::new(op, f)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.bq.n()
    }

    pub fn bq(&self) -> &Biquandle {
        &self.bq
    }

    pub fn op(&self) -> &OperatorTable {
        self.bq.op()
    }

    #[inline]
    pub fn r1(&self, x: usize, y: usize) -> usize {
        self.bq.r1(x, y)
    }

    #[inline]
    pub fn r2(&self, x: usize, y: usize) -> usize {
        self.bq.r2(x, y)
    }

    #[inline]
    pub fn r1bar(&self, u: usize, v: usize) -> usize {
        self.bq.r1bar(u, v)
    }

    #[inline]
    pub fn r2bar(&self, u: usize, v: usize) -> usize {
        self.bq.r2bar(u, v)
    }

    #[inline]
    pub fn f(&self, x: usize) -> usize {
        self.f[x]
    }

    #[inline]
    pub fn f_inv(&self, x: usize) -> usize {
        self.f_inv[x]
    }

    /// `f^k(x)` for any integer `k`.
    pub fn f_pow(&self, k: i64, mut x: usize) -> usize {
        // Exponents reduce mod the permutation order; the loop below is fine
        // at the word lengths we handle, so no cycle decomposition.
        if k >= 0 {
            for _ in 0..k {
                x = self.f[x];
            }
        } else {
            for _ in 0..-k {
                x = self.f_inv[x];
            }
        }
        x
    }

    pub fn f_slice(&self) -> &[usize] {
        &self.f
    }

    pub fn is_plain(&self) -> bool {
        self.f.iter().enumerate().all(|(i, &y)| i == y)
    }
}

/// The derived operator `VR(x,y) = (R1(x, f(y)), R2(f^{-1}(x), y))`. The
/// result is itself a biquandle, with the same `f` still an automorphism;
/// tests assert both.
pub fn derive_vr(vbq: &VirtualBiquandle) -> OperatorTable {
    OperatorTable::from_fn(
        vbq.n(),
        |x, y| vbq.r1(x, vbq.f(y)),
        |x, y| vbq.r2(vbq.f_inv(x), y),
    )
}

/// Convenience wrapper: the derived `VR` structure revalidated with the same
/// automorphism.
pub fn derive_vr_virtual(vbq: &VirtualBiquandle) -> VirtualBiquandle {
    VirtualBiquandle::new(derive_vr(vbq), vbq.f_slice().to_vec())
        .expect("derived VR table must validate with the same automorphism")
}

/// True iff `map` commutes with both operator components and with the
/// distinguished automorphisms. `map[x]` is the image of `x`; its length
/// must match the source carrier and its values must lie in the target.
pub fn is_homomorphism(map: &[usize], src: &VirtualBiquandle, dst: &VirtualBiquandle) -> bool {
    assert_eq!(
        map.len(),
        src.n(),
        "map must be total on the source carrier"
    );
    assert!(
        map.iter().all(|&v| v < dst.n()),
        "map values must lie in the target carrier"
    );
    let n = src.n();
    for x in 0..n {
        if map[src.f(x)] != dst.f(map[x]) {
            return false;
        }
        for y in 0..n {
            if map[src.r1(x, y)] != dst.r1(map[x], map[y]) {
                return false;
            }
            if map[src.r2(x, y)] != dst.r2(map[x], map[y]) {
                return false;
            }
        }
    }
    true
}

/// The transposition operator `R(x,y) = (y,x)`, a biquandle on any carrier.
pub fn swap_operator(n: usize) -> OperatorTable {
    OperatorTable::from_fn(n, |_, y| y, |x, _| x)
}

/// Parameter failures for [`linear_biquandle`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinearParamError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("{name} = {value} is not a unit mod {n}")]
    NotAUnit {
        name: &'static str,
        value: usize,
        n: usize,
    },
    #[error("(1-alpha)(1-beta) = {product} mod {n}, expected 0")]
    ProductNotZero { product: usize, n: usize },
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The linear operator `R(x,y) = ((1-alpha)x + alpha y, beta x + (1-beta)y)`
/// over `Z_n`, defined when `alpha` and `beta` are units and
/// `(1-alpha)(1-beta) = 0 mod n`.
pub fn linear_biquandle(
    n: usize,
    alpha: usize,
    beta: usize,
) -> Result<OperatorTable, LinearParamError> {
    if n == 0 {
        return Err(LinearParamError::ZeroModulus);
    }
    let alpha = alpha % n;
    let beta = beta % n;
    if gcd(alpha, n) != 1 {
        return Err(LinearParamError::NotAUnit {
            name: "alpha",
            value: alpha,
            n,
        });
    }
    if gcd(beta, n) != 1 {
        return Err(LinearParamError::NotAUnit {
            name: "beta",
            value: beta,
            n,
        });
    }
    let one_minus = |u: usize| (1 + n - u) % n;
    let product = (one_minus(alpha) * one_minus(beta)) % n;
    if product != 0 {
        return Err(LinearParamError::ProductNotZero { product, n });
    }
    Ok(OperatorTable::from_fn(
        n,
        move |x, y| (one_minus(alpha) * x + alpha * y) % n,
        move |x, y| (beta * x + one_minus(beta) * y) % n,
    ))
}

/// Why a multiplication table fails to be a group.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupTableError {
    #[error("malformed multiplication table: {0}")]
    Structure(#[from] StructureError),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("not associative at ({a},{b},{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
}

/// The operator `R(x,y) = (x^{-1} y^{-1} x, y^2 x)` over a finite group given
/// by its multiplication table (`cayley[a][b] = a*b`). Always a biquandle.
pub fn wada_from_group(cayley: &[Vec<usize>]) -> Result<OperatorTable, GroupTableError> {
    let n = cayley.len();
    if n == 0 {
        return Err(StructureError::EmptyCarrier.into());
    }
    for (row, entries) in cayley.iter().enumerate() {
        if entries.len() != n {
            return Err(StructureError::BadRowLength {
                table: "cayley",
                row,
                len: entries.len(),
                n,
            }
            .into());
        }
        for (col, &value) in entries.iter().enumerate() {
            if value >= n {
                return Err(StructureError::EntryOutOfRange {
                    table: "cayley",
                    row,
                    col,
                    value,
                    n,
                }
                .into());
            }
        }
    }
    let mul = |a: usize, b: usize| cayley[a][b];
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
        .ok_or(GroupTableError::NoIdentity)?;
    let mut inv = vec![usize::MAX; n];
    for (x, slot) in inv.iter_mut().enumerate() {
        *slot = (0..n)
            .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
            .ok_or(GroupTableError::NoInverse { element: x })?;
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(GroupTableError::NotAssociative { a, b, c });
                }
            }
        }
    }
    Ok(OperatorTable::from_fn(
        n,
        move |x, y| mul(mul(inv[x], inv[y]), x),
        move |x, y| mul(mul(y, y), x),
    ))
}

/// Contents of a structure file: the operator table and the optional
/// automorphism block (`None` means the identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureFile {
    pub op: OperatorTable,
    pub f: Option<Vec<usize>>,
}

impl StructureFile {
    /// Validates the file contents, defaulting `f` to the identity.
    pub fn into_virtual(self) -> Result<VirtualBiquandle, ValidationError> {
        match self.f {
            Some(f) => VirtualBiquandle::new(self.op, f),
            None => VirtualBiquandle::plain(self.op),
        }
    }
}

/// Parse errors for the `vbq` structure file format.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FileParseError {
    #[error("empty input, expected a `vbq` header")]
    Empty,
    #[error("line {line}: expected {expected:?}, found {found:?}")]
    Expected {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: cannot parse {token:?} as an integer")]
    BadInteger { line: usize, token: String },
    #[error("line {line}: unexpected trailing content {found:?}")]
    Trailing { line: usize, found: String },
    #[error("unexpected end of input while reading {section}")]
    Truncated { section: &'static str },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Parses the line-oriented `vbq` structure format:
///
/// ```text
/// vbq
/// size <n>
/// R1
/// <n rows of n integers>
/// R2
/// <n rows of n integers>
/// f
/// <n integers>        (optional block; absent means the identity)
/// ```
///
/// Lines starting with `#` and blank lines are ignored.
pub fn parse_structure(text: &str) -> Result<StructureFile, FileParseError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.is_empty() {
        return Err(FileParseError::Empty);
    }

    struct Cursor<'a> {
        lines: &'a [(usize, &'a str)],
        pos: usize,
    }
    impl<'a> Cursor<'a> {
        fn next(&mut self, section: &'static str) -> Result<(usize, &'a str), FileParseError> {
            let item = self
                .lines
                .get(self.pos)
                .copied()
                .ok_or(FileParseError::Truncated { section })?;
            self.pos += 1;
            Ok(item)
        }
        fn done(&self) -> bool {
            self.pos >= self.lines.len()
        }
    }
    let mut cur = Cursor {
        lines: &lines,
        pos: 0,
    };

    let (line, header) = cur.next("header")?;
    if header != "vbq" {
        return Err(FileParseError::Expected {
            line,
            expected: "vbq",
            found: header.to_string(),
        });
    }
    let (line, size_line) = cur.next("size")?;
    let n = match size_line.strip_prefix("size ") {
        Some(rest) => rest
            .trim()
            .parse::<usize>()
            .map_err(|_| FileParseError::BadInteger {
                line,
                token: rest.trim().to_string(),
            })?,
        None => {
            return Err(FileParseError::Expected {
                line,
                expected: "size <n>",
                found: size_line.to_string(),
            })
        }
    };
    if n == 0 {
        return Err(StructureError::EmptyCarrier.into());
    }

    let parse_row = |line: usize, row: &str| -> Result<Vec<usize>, FileParseError> {
        row.split_whitespace()
            .map(|token| {
                token
                    .parse::<usize>()
                    .map_err(|_| FileParseError::BadInteger {
                        line,
                        token: token.to_string(),
                    })
            })
            .collect()
    };

    let mut tables = Vec::new();
    for label in ["R1", "R2"] {
        let (line, tag) = cur.next(label)?;
        if tag != label {
            return Err(FileParseError::Expected {
                line,
                expected: label,
                found: tag.to_string(),
            });
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, row) = cur.next(label)?;
            rows.push(parse_row(line, row)?);
        }
        tables.push(rows);
    }
    let r2 = tables.pop().unwrap();
    let r1 = tables.pop().unwrap();
    let op = OperatorTable::from_rows(&r1, &r2)?;

    let f = if !cur.done() {
        let (line, tag) = cur.next("f")?;
        if tag != "f" {
            return Err(FileParseError::Expected {
                line,
                expected: "f",
                found: tag.to_string(),
            });
        }
        let (line, row) = cur.next("f")?;
        let entries = parse_row(line, row)?;
        permutation_inverse(&entries, n)?;
        Some(entries)
    } else {
        None
    };

    if !cur.done() {
        let (line, found) = lines[cur.pos];
        return Err(FileParseError::Trailing {
            line,
            found: found.to_string(),
        });
    }

    Ok(StructureFile { op, f })
}

/// Renders a structure in the `vbq` file format, bit-exact: see
/// [`parse_structure`]. Pass `f: None` to omit the automorphism block.
pub fn render_structure(op: &OperatorTable, f: Option<&[usize]>) -> String {
    let n = op.n();
    let mut out = String::new();
    out.push_str("vbq\n");
    out.push_str(&format!("size {n}\n"));
    for (label, get) in [
        (
            "R1",
            &(|x, y| op.r1(x, y)) as &dyn Fn(usize, usize) -> usize,
        ),
        ("R2", &(|x, y| op.r2(x, y))),
    ] {
        out.push_str(label);
        out.push('\n');
        for x in 0..n {
            let row: Vec<String> = (0..n).map(|y| get(x, y).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    if let Some(f) = f {
        out.push_str("f\n");
        let row: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
