//! Virtual braid words: grammar, parsing, closure bookkeeping,
//! closure-preserving moves, and conversion of braid closures to Gauss codes.
//!
//! Letters apply top to bottom: the textual word `"a b"` means `a` acts on
//! the incoming tuple first. All three generator kinds transpose strand
//! positions `i, i+1`.

use std::fmt;
use thiserror::Error;

/// One letter of a virtual braid word. Indices are 1-based and must satisfy
/// `1 <= i <= n-1` for a word on `n` strands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Classical positive crossing: the strand entering at position `i`
    /// passes under and exits at `i+1`.
    Sigma(usize),
    /// Classical negative crossing: the strand entering at position `i`
    /// passes over.
    SigmaInv(usize),
    /// Virtual crossing; its own inverse.
    Rho(usize),
}

impl Generator {
    pub fn index(self) -> usize {
        match self {
            Generator::Sigma(i) | Generator::SigmaInv(i) | Generator::Rho(i) => i,
        }
    }

    pub fn inverse(self) -> Generator {
        match self {
            Generator::Sigma(i) => Generator::SigmaInv(i),
            Generator::SigmaInv(i) => Generator::Sigma(i),
            Generator::Rho(i) => Generator::Rho(i),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Sigma(i) => write!(f, "s{i}"),
            Generator::SigmaInv(i) => write!(f, "S{i}"),
            Generator::Rho(i) => write!(f, "v{i}"),
        }
    }
}

/// An element of the virtual braid group on `strands` strands, as a word in
/// the generators. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Generator>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BraidError {
    #[error("unknown token {token:?}; expected s<i>, S<i> or v<i>")]
    UnknownToken { token: String },
    #[error("generator index must be at least 1")]
    IndexZero,
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("strand count must be at least 1")]
    NoStrands,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Generator>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        for g in &letters {
            let i = g.index();
            if i == 0 {
                return Err(BraidError::IndexZero);
            }
            if i >= strands {
                return Err(BraidError::IndexOutOfRange { index: i, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> Self {
        BraidWord::new(strands, Vec::new()).expect("empty word is always valid")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation: `self` acts first, then `other`. Both words must be on
    /// the same strand count.
    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands, "strand counts must agree");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// The inverse word: letters reversed and inverted.
    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|g| g.inverse()).collect(),
        }
    }

    /// Number of classical (`sigma^{+-1}`) letters.
    pub fn classical_letters(&self) -> usize {
        self.letters
            .iter()
            .filter(|g| !matches!(g, Generator::Rho(_)))
            .count()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        Ok(())
    }
}

/// Parses a whitespace-separated braid word: `s<i>` for a positive crossing,
/// `S<i>` for its inverse, `v<i>` for a virtual crossing. When `strands` is
/// omitted the count is `1 + max index` (so the empty word is one strand).
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<BraidWord, BraidError> {
    let mut letters = Vec::new();
    let mut max_index = 0;
    for token in text.split_whitespace() {
        if !token.is_ascii() || token.len() < 2 {
            return Err(BraidError::UnknownToken {
                token: token.to_string(),
            });
        }
        let (kind, digits) = token.split_at(1);
        let index: usize = digits.parse().map_err(|_| BraidError::UnknownToken {
            token: token.to_string(),
        })?;
        if index == 0 {
            return Err(BraidError::IndexZero);
        }
        let g = match kind {
            "s" => Generator::Sigma(index),
            "S" => Generator::SigmaInv(index),
            "v" => Generator::Rho(index),
            _ => {
                return Err(BraidError::UnknownToken {
                    token: token.to_string(),
                })
            }
        };
        max_index = max_index.max(index);
        letters.push(g);
    }
    let strands = strands.unwrap_or(max_index + 1);
    BraidWord::new(strands, letters)
}

/// The permutation of strand positions induced by the word (`perm[i]` is the
/// bottom position of the strand entering at top position `i`, 0-based),
/// together with the number of closure components (cycles).
pub fn closure_permutation(b: &BraidWord) -> (Vec<usize>, usize) {
    let n = b.strands();
    let mut pos_to_strand: Vec<usize> = (0..n).collect();
    for g in b.letters() {
        let i = g.index() - 1;
        // every generator kind transposes positions i, i+1
        pos_to_strand.swap(i, i + 1);
    }
    let mut perm = vec![0; n];
    for (p, &s) in pos_to_strand.iter().enumerate() {
        perm[s] = p;
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
        }
    }
    (perm, components)
}

/// `g . b . g^{-1}` as a word. Conjugation preserves the closure.
pub fn conjugate(b: &BraidWord, g: Generator) -> BraidWord {
    let i = g.index();
    assert!(
        i >= 1 && i < b.strands(),
        "generator index out of range for the word's strand count"
    );
    let mut letters = Vec::with_capacity(b.len() + 2);
    letters.push(g);
    letters.extend_from_slice(b.letters());
    letters.push(g.inverse());
    BraidWord {
        strands: b.strands(),
        letters,
    }
}

/// Stabilization kind: which generator on the new strand pair is appended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stabilization {
    Pos,
    Neg,
    Virt,
}

/// Right stabilization: the word on `n+1` strands obtained by appending
/// `sigma_n`, `sigma_n^{-1}`, or `rho_n`. The closure is unchanged.
pub fn stabilize(b: &BraidWord, kind: Stabilization) -> BraidWord {
    let n = b.strands();
    let mut letters = b.letters().to_vec();
    letters.push(match kind {
        Stabilization::Pos => Generator::Sigma(n),
        Stabilization::Neg => Generator::SigmaInv(n),
        Stabilization::Virt => Generator::Rho(n),
    });
    BraidWord {
        strands: n + 1,
        letters,
    }
}

/// Deterministic splittable generator (splitmix64); the word built from a
/// given seed never changes across runs or platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}

/// A uniform random word of the requested length, deterministic in the seed.
pub fn random_braid(strands: usize, len: usize, seed: u64) -> BraidWord {
    assert!(strands >= 2, "random words need at least two strands");
    let mut rng = SplitMix64::new(seed);
    let letters = (0..len)
        .map(|_| {
            let k = rng.below(3 * (strands as u64 - 1));
            let index = (k % (strands as u64 - 1)) as usize + 1;
            match k / (strands as u64 - 1) {
                0 => Generator::Sigma(index),
                1 => Generator::SigmaInv(index),
                _ => Generator::Rho(index),
            }
        })
        .collect();
    BraidWord { strands, letters }
}

/// Over/under role of one passage through a classical crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Passage {
    Over,
    Under,
}

/// Crossing sign: `+` for `sigma_i`, `-` for `sigma_i^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => write!(f, "+"),
            Sign::Neg => write!(f, "-"),
        }
    }
}

/// One signed over/under passage token of a Gauss code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussToken {
    pub passage: Passage,
    pub id: usize,
    pub sign: Sign,
}

impl fmt::Display for GaussToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.passage {
            Passage::Over => 'O',
            Passage::Under => 'U',
        };
        write!(f, "{p}{}{}", self.id, self.sign)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GaussCodeError {
    #[error("crossing {id} appears {count} times, expected exactly two")]
    BadMultiplicity { id: usize, count: usize },
    #[error("crossing {id} appears twice with the same passage")]
    SamePassage { id: usize, passage: Passage },
    #[error("crossing {id} carries both signs")]
    SignMismatch { id: usize },
    #[error("a Gauss code needs at least one component")]
    NoComponents,
    #[error("crossing id must be positive")]
    IdZero,
}

/// A Gauss code: per-component cyclic sequences of signed over/under
/// passages. Only classical crossings are recorded; a component with no
/// tokens is a crossing-free circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussCode {
    components: Vec<Vec<GaussToken>>,
}

impl GaussCode {
    /// Validates the pairing invariants: every id occurs exactly twice, once
    /// over and once under, with equal signs.
    pub fn new(components: Vec<Vec<GaussToken>>) -> Result<Self, GaussCodeError> {
        if components.is_empty() {
            return Err(GaussCodeError::NoComponents);
        }
        use std::collections::BTreeMap;
        let mut seen: BTreeMap<usize, Vec<GaussToken>> = BTreeMap::new();
        for token in components.iter().flatten() {
            if token.id == 0 {
                return Err(GaussCodeError::IdZero);
            }
            seen.entry(token.id).or_default().push(*token);
        }
        for (id, tokens) in seen {
            if tokens.len() != 2 {
                return Err(GaussCodeError::BadMultiplicity {
                    id,
                    count: tokens.len(),
                });
            }
            if tokens[0].passage == tokens[1].passage {
                return Err(GaussCodeError::SamePassage {
                    id,
                    passage: tokens[0].passage,
                });
            }
            if tokens[0].sign != tokens[1].sign {
                return Err(GaussCodeError::SignMismatch { id });
            }
        }
        Ok(GaussCode { components })
    }

    pub fn components(&self) -> &[Vec<GaussToken>] {
        &self.components
    }

    pub fn crossing_count(&self) -> usize {
        self.token_count() / 2
    }

    pub fn token_count(&self) -> usize {
        self.components.iter().map(|c| c.len()).sum()
    }
}

impl fmt::Display for GaussCode {
    /// Components joined by `|`, tokens concatenated: `U1+O2+|O1+U2+`. A
    /// single token-free component renders as the empty string, which the
    /// parser deliberately rejects; every other code round-trips.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for comp in &self.components {
            if !first {
                write!(f, "|")?;
            }
            for token in comp {
                write!(f, "{token}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Traces the closure of `b` into a Gauss code. Classical letters get fresh
/// crossing ids (1, 2, ...) in word order; virtual letters leave no token.
/// Components are listed by their smallest starting strand, each starting at
/// the top of that strand.
pub fn braid_to_gauss(b: &BraidWord) -> GaussCode {
    let n = b.strands();
    // per-strand token runs, following each strand top to bottom
    let mut runs: Vec<Vec<GaussToken>> = vec![Vec::new(); n];
    let mut pos_to_strand: Vec<usize> = (0..n).collect();
    let mut next_id = 1;
    for g in b.letters() {
        let i = g.index() - 1;
        let (lower, upper) = (pos_to_strand[i], pos_to_strand[i + 1]);
        match g {
            Generator::Sigma(_) => {
                // the strand at position i goes under a positive crossing
                runs[lower].push(GaussToken {
                    passage: Passage::Under,
                    id: next_id,
                    sign: Sign::Pos,
                });
                runs[upper].push(GaussToken {
                    passage: Passage::Over,
                    id: next_id,
                    sign: Sign::Pos,
                });
                next_id += 1;
            }
            Generator::SigmaInv(_) => {
                // the strand at position i goes over a negative crossing
                runs[lower].push(GaussToken {
                    passage: Passage::Over,
                    id: next_id,
                    sign: Sign::Neg,
                });
                runs[upper].push(GaussToken {
                    passage: Passage::Under,
                    id: next_id,
                    sign: Sign::Neg,
                });
                next_id += 1;
            }
            Generator::Rho(_) => {}
        }
        pos_to_strand.swap(i, i + 1);
    }
    // closure: the strand ending at bottom position p continues at top p
    let mut end_pos = vec![0; n];
    for (p, &s) in pos_to_strand.iter().enumerate() {
        end_pos[s] = p;
    }
    let mut visited = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut tokens = Vec::new();
        let mut cur = start;
        while !visited[cur] {
            visited[cur] = true;
            tokens.extend_from_slice(&runs[cur]);
            cur = end_pos[cur];
        }
        components.push(tokens);
    }
    GaussCode::new(components).expect("strand tracing pairs every crossing")
}
