//! Free noncommutative differential graded algebras over GF(2), presented by
//! chord generators with integer degrees and positive rational actions.
//!
//! Elements are formal GF(2) sums of words in the generators; the empty word
//! is the algebra unit. The differential is declared on generators and
//! extended to words by the Leibniz rule (no signs over GF(2)):
//!
//! ```text
//! d(b1 b2 … bk) = (d b1) b2 … bk + b1 (d b2) … bk + … + b1 … (d bk)
//! ```
//!
//! Well-formedness of a presentation means three separately reported facts:
//! the differential squares to zero, every word of `d c` has degree
//! `|c| − 1`, and every word of `d c` has total action strictly below the
//! action of `c`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{LegchError, Result};

/// Whether a chord starts and ends on the same component (`Pure`) or runs
/// between two distinct components (`Mixed(i, j)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Pure,
    Mixed(usize, usize),
}

/// One chord generator of the algebra.
#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub action: Rational64,
    pub kind: GeneratorKind,
}

impl Generator {
    /// A pure generator; the common case for single-component inputs.
    pub fn pure(name: &str, degree: i64, action: Rational64) -> Self {
        Generator { name: name.into(), degree, action, kind: GeneratorKind::Pure }
    }
}

/// A word in the generators. The empty word is the unit `1`.
pub type Word = Vec<String>;

/// Render a word for messages: letters separated by `·`, unit as `1`.
pub fn word_display(w: &Word) -> String {
    if w.is_empty() { "1".to_string() } else { w.join("·") }
}

/// A formal GF(2) sum of words. Addition is symmetric difference, so every
/// word appears with coefficient 0 or 1 and duplicates cancel.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Gf2Sum {
    words: BTreeSet<Word>,
}

impl Gf2Sum {
    /// The zero element (empty sum).
    pub fn zero() -> Self {
        Gf2Sum::default()
    }

    /// The algebra unit `1` (the empty word with coefficient one).
    pub fn unit() -> Self {
        let mut s = Gf2Sum::zero();
        s.toggle(Vec::new());
        s
    }

    /// The sum consisting of a single word.
    pub fn word(w: Word) -> Self {
        let mut s = Gf2Sum::zero();
        s.toggle(w);
        s
    }

    /// Build from an iterator of words, cancelling duplicates mod 2.
    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Self {
        let mut s = Gf2Sum::zero();
        for w in words {
            s.toggle(w);
        }
        s
    }

    /// Flip the coefficient of one word.
    pub fn toggle(&mut self, w: Word) {
        if !self.words.remove(&w) {
            self.words.insert(w);
        }
    }

    /// GF(2) addition (symmetric difference), in place.
    pub fn add_assign(&mut self, other: &Gf2Sum) {
        for w in &other.words {
            self.toggle(w.clone());
        }
    }

    /// GF(2) addition, by value.
    pub fn plus(mut self, other: &Gf2Sum) -> Gf2Sum {
        self.add_assign(other);
        self
    }

    /// Product of sums: concatenate every pair of words, cancelling mod 2.
    pub fn mul(&self, other: &Gf2Sum) -> Gf2Sum {
        let mut out = Gf2Sum::zero();
        for a in &self.words {
            for b in &other.words {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                out.toggle(w);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Coefficient of the empty word.
    pub fn has_unit(&self) -> bool {
        self.words.contains(&Vec::new())
    }

    /// The words present (deterministic order).
    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The sub-sum of words of exactly `len` letters.
    pub fn length_part(&self, len: usize) -> Gf2Sum {
        Gf2Sum { words: self.words.iter().filter(|w| w.len() == len).cloned().collect() }
    }
}

impl fmt::Display for Gf2Sum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self.words.iter().map(word_display).collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Degree-vs-action growth constants: every generator must satisfy
/// `|c| > C1·action(c) + C0` with `C1 > 0` for inverse-limit stabilization
/// arguments to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotonicityConstants {
    pub c0: Rational64,
    pub c1: Rational64,
}

/// One degree/word violation found by [`DgaPresentation::check`].
#[derive(Debug, Clone)]
pub struct WordViolation {
    pub generator: String,
    pub word: Word,
    pub found: String,
    pub wanted: String,
}

/// Everything [`DgaPresentation::check`] finds. All violations are listed,
/// not just the first.
#[derive(Debug, Clone, Default)]
pub struct DgaReport {
    /// Generators whose `d²` is nonzero, with the offending sum.
    pub square_violations: Vec<(String, Gf2Sum)>,
    /// Words of the wrong degree.
    pub degree_violations: Vec<WordViolation>,
    /// Words whose action does not strictly drop.
    pub action_violations: Vec<WordViolation>,
}

impl DgaReport {
    pub fn ok(&self) -> bool {
        self.square_violations.is_empty()
            && self.degree_violations.is_empty()
            && self.action_violations.is_empty()
    }

    /// Flat human-readable list of findings.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (g, s) in &self.square_violations {
            out.push(format!("d²({g}) = {s} is nonzero"));
        }
        for v in &self.degree_violations {
            out.push(format!(
                "word {} in d({}) has degree {}, want {}",
                word_display(&v.word),
                v.generator,
                v.found,
                v.wanted
            ));
        }
        for v in &self.action_violations {
            out.push(format!(
                "word {} in d({}) has action {}, not below {}",
                word_display(&v.word),
                v.generator,
                v.found,
                v.wanted
            ));
        }
        out
    }
}

/// A presented DGA: ambient dimension, ordered generators, and the
/// differential on generators (missing entry = zero differential).
#[derive(Debug, Clone)]
pub struct DgaPresentation {
    ambient_n: i64,
    generators: Vec<Generator>,
    index: BTreeMap<String, usize>,
    differential: BTreeMap<String, Gf2Sum>,
}

impl DgaPresentation {
    /// Validate names and actions and build the presentation. Mathematical
    /// checks (square, degree, action drop) are done by [`Self::check`], not
    /// here, so that broken inputs can still be loaded and reported on.
    pub fn new(
        ambient_n: i64,
        generators: Vec<Generator>,
        differential: BTreeMap<String, Gf2Sum>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(LegchError::DuplicateGenerator(g.name.clone()));
            }
            if g.action <= Rational64::zero() {
                return Err(LegchError::NonPositiveAction(g.name.clone()));
            }
        }
        for (src, sum) in &differential {
            if !index.contains_key(src) {
                return Err(LegchError::UnknownGenerator(src.clone()));
            }
            for w in sum.words() {
                for letter in w {
                    if !index.contains_key(letter) {
                        return Err(LegchError::UnknownGenerator(letter.clone()));
                    }
                }
            }
        }
        Ok(DgaPresentation { ambient_n, generators, index, differential })
    }

    pub fn ambient_n(&self) -> i64 {
        self.ambient_n
    }

    /// Generators in declaration order.
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.index.get(name).map(|&i| &self.generators[i])
    }

    /// The declared differential of one generator (zero if undeclared).
    pub fn differential_of(&self, name: &str) -> Gf2Sum {
        self.differential.get(name).cloned().unwrap_or_default()
    }

    /// All declared differentials.
    pub fn differentials(&self) -> &BTreeMap<String, Gf2Sum> {
        &self.differential
    }

    /// Replace the differential wholesale (used by mutation tests and moves).
    pub fn with_differential(&self, differential: BTreeMap<String, Gf2Sum>) -> Result<Self> {
        DgaPresentation::new(self.ambient_n, self.generators.clone(), differential)
    }

    /// Sum of letter degrees; the unit has degree 0.
    pub fn word_degree(&self, w: &Word) -> i64 {
        w.iter().map(|g| self.generator(g).map(|x| x.degree).unwrap_or(0)).sum()
    }

    /// Sum of letter actions; the unit has action 0.
    pub fn word_action(&self, w: &Word) -> Rational64 {
        w.iter()
            .map(|g| self.generator(g).map(|x| x.action).unwrap_or_else(Rational64::zero))
            .sum()
    }

    /// Leibniz extension of the differential to a single word.
    pub fn boundary_word(&self, w: &Word) -> Gf2Sum {
        let mut out = Gf2Sum::zero();
        for j in 0..w.len() {
            let dj = self.differential_of(&w[j]);
            if dj.is_zero() {
                continue;
            }
            let prefix = Gf2Sum::word(w[..j].to_vec());
            let suffix = Gf2Sum::word(w[j + 1..].to_vec());
            out.add_assign(&prefix.mul(&dj).mul(&suffix));
        }
        out
    }

    /// Linear extension of [`Self::boundary_word`] to sums.
    pub fn boundary(&self, s: &Gf2Sum) -> Gf2Sum {
        let mut out = Gf2Sum::zero();
        for w in s.words() {
            out.add_assign(&self.boundary_word(w));
        }
        out
    }

    /// Run the three structural checks, reporting every violation.
    pub fn check(&self) -> DgaReport {
        let mut report = DgaReport::default();
        for g in &self.generators {
            let d = self.differential_of(&g.name);
            let dd = self.boundary(&d);
            if !dd.is_zero() {
                report.square_violations.push((g.name.clone(), dd));
            }
            for w in d.words() {
                let deg = self.word_degree(w);
                if deg != g.degree - 1 {
                    report.degree_violations.push(WordViolation {
                        generator: g.name.clone(),
                        word: w.clone(),
                        found: deg.to_string(),
                        wanted: (g.degree - 1).to_string(),
                    });
                }
                let act = self.word_action(w);
                if act >= g.action {
                    report.action_violations.push(WordViolation {
                        generator: g.name.clone(),
                        word: w.clone(),
                        found: act.to_string(),
                        wanted: format!("< {}", g.action),
                    });
                }
            }
        }
        report
    }

    /// Check the strict growth bound `|c| > C1·action(c) + C0` for every
    /// generator; returns the offending names if any.
    pub fn monotonicity_violations(&self, k: MonotonicityConstants) -> Vec<String> {
        self.generators
            .iter()
            .filter(|g| Rational64::from_integer(g.degree) <= k.c1 * g.action + k.c0)
            .map(|g| g.name.clone())
            .collect()
    }

    /// The length-1 part of each differential, as name → list of target
    /// names. Errors if any differential still contains the unit word, which
    /// means the caller forgot to remove constant terms first.
    pub fn linear_differential(&self) -> Result<BTreeMap<String, Vec<String>>> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            let d = self.differential_of(&g.name);
            if d.has_unit() {
                return Err(LegchError::ConstantTerm(g.name.clone()));
            }
            let targets: Vec<String> =
                d.length_part(1).words().map(|w| w[0].clone()).collect();
            out.insert(g.name.clone(), targets);
        }
        Ok(out)
    }
}
