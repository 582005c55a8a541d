//! Augmentations: algebra maps to GF(2) annihilating the differential,
//! their enumeration, the change of variables they induce, and the linear
//! (length-one) complex extracted afterwards.
//!
//! An augmentation assigns a bit to every generator (graded mode forces the
//! bit to 0 off degree zero), multiplicatively extended to words, with
//! `ε(d c) = 0` for every generator `c`. Conjugating the differential by the
//! substitution `b ↦ b + ε(b)` kills all constant terms, after which the
//! length-one part is an honest chain complex over GF(2).

use std::collections::{BTreeMap, BTreeSet};

use gf2core::{ChainComplex, ComplexBuilder, Direction};

use crate::dga::{DgaPresentation, Gf2Sum, Word};
use crate::error::{LegchError, Result};

/// An augmentation, stored as the set of generators sent to 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Augmentation {
    ones: BTreeSet<String>,
}

impl Augmentation {
    /// The zero augmentation.
    pub fn zero() -> Self {
        Augmentation::default()
    }

    /// Build from the names sent to 1.
    pub fn from_ones<I: IntoIterator<Item = String>>(ones: I) -> Self {
        Augmentation { ones: ones.into_iter().collect() }
    }

    pub fn value(&self, name: &str) -> bool {
        self.ones.contains(name)
    }

    /// Names sent to 1, in deterministic order.
    pub fn support(&self) -> impl Iterator<Item = &String> {
        self.ones.iter()
    }

    /// Multiplicative extension to a word; the unit evaluates to 1.
    pub fn eval_word(&self, w: &Word) -> bool {
        w.iter().all(|g| self.value(g))
    }

    /// Additive extension to a sum of words.
    pub fn eval(&self, s: &Gf2Sum) -> bool {
        let mut acc = false;
        for w in s.words() {
            acc ^= self.eval_word(w);
        }
        acc
    }

    /// Compact rendering such as `{x, y}` for reports.
    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.ones.iter().map(String::as_str).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// A relation `ε(d c) = 0` reduced to an XOR of AND-monomials over the
/// enumeration variables. Repeated letters collapse because bits are
/// idempotent; words containing a non-variable letter vanish outright
/// (non-variables evaluate to 0).
#[derive(Debug, Clone)]
struct Relation {
    /// Each monomial is a set of variable names; the empty set is the
    /// constant 1.
    monomials: BTreeSet<BTreeSet<String>>,
    /// Union of variables across monomials.
    support: BTreeSet<String>,
}

impl Relation {
    fn build(sum: &Gf2Sum, variables: &BTreeSet<String>) -> Relation {
        let mut monomials: BTreeSet<BTreeSet<String>> = BTreeSet::new();
        for w in sum.words() {
            if w.iter().any(|g| !variables.contains(g)) {
                continue; // a zero factor kills the monomial
            }
            let m: BTreeSet<String> = w.iter().cloned().collect();
            if !monomials.remove(&m) {
                monomials.insert(m);
            }
        }
        let support = monomials.iter().flatten().cloned().collect();
        Relation { monomials, support }
    }

    /// Evaluate once every variable of the relation is assigned.
    fn eval(&self, assigned: &BTreeMap<String, bool>) -> bool {
        let mut acc = false;
        for m in &self.monomials {
            acc ^= m.iter().all(|v| assigned[v]);
        }
        acc
    }
}

/// The generators an enumeration branches over: degree-zero generators in
/// graded mode, all generators otherwise. Order follows declaration order.
fn enumeration_variables(dga: &DgaPresentation, ungraded: bool) -> Vec<String> {
    dga.generators()
        .iter()
        .filter(|g| ungraded || g.degree == 0)
        .map(|g| g.name.clone())
        .collect()
}

/// Enumerate all augmentations by depth-first assignment over the variables
/// in declaration order, pruning as soon as a fully-assigned relation
/// evaluates to 1.
pub fn enumerate_augmentations(dga: &DgaPresentation, ungraded: bool) -> Vec<Augmentation> {
    let vars = enumeration_variables(dga, ungraded);
    let var_set: BTreeSet<String> = vars.iter().cloned().collect();
    let relations: Vec<Relation> = dga
        .generators()
        .iter()
        .map(|g| Relation::build(&dga.differential_of(&g.name), &var_set))
        .collect();
    // A relation becomes checkable at the point its last variable (in
    // declaration order) is assigned; constant relations are checkable
    // immediately.
    let position: BTreeMap<&str, usize> =
        vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut ready_at: Vec<Vec<usize>> = vec![Vec::new(); vars.len() + 1];
    for (ri, rel) in relations.iter().enumerate() {
        let slot = rel
            .support
            .iter()
            .map(|v| position[v.as_str()] + 1)
            .max()
            .unwrap_or(0);
        ready_at[slot].push(ri);
    }
    // Constant relations that are already 1 rule out every assignment.
    let empty = BTreeMap::new();
    for &ri in &ready_at[0] {
        if relations[ri].eval(&empty) {
            return Vec::new();
        }
    }

    let mut found = Vec::new();
    let mut assigned: BTreeMap<String, bool> = BTreeMap::new();
    dfs(&vars, &relations, &ready_at, 0, &mut assigned, &mut found);
    found
}

fn dfs(
    vars: &[String],
    relations: &[Relation],
    ready_at: &[Vec<usize>],
    depth: usize,
    assigned: &mut BTreeMap<String, bool>,
    found: &mut Vec<Augmentation>,
) {
    if depth == vars.len() {
        found.push(Augmentation::from_ones(
            assigned.iter().filter(|(_, &v)| v).map(|(k, _)| k.clone()),
        ));
        return;
    }
    for value in [false, true] {
        assigned.insert(vars[depth].clone(), value);
        let ok = ready_at[depth + 1].iter().all(|&ri| !relations[ri].eval(assigned));
        if ok {
            dfs(vars, relations, ready_at, depth + 1, assigned, found);
        }
    }
    assigned.remove(&vars[depth]);
}

/// Independent oracle: test every one of the `2^k` assignments directly
/// against `ε(d c) = 0`, evaluated on the raw word sums without any of the
/// relation machinery above.
pub fn exhaustive_augmentations(dga: &DgaPresentation, ungraded: bool) -> Vec<Augmentation> {
    let vars = enumeration_variables(dga, ungraded);
    assert!(vars.len() <= 20, "exhaustive enumeration is for small inputs");
    let mut found = Vec::new();
    for mask in 0u64..(1u64 << vars.len()) {
        let aug = Augmentation::from_ones(
            vars.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone()),
        );
        let valid = dga
            .generators()
            .iter()
            .all(|g| !aug.eval(&dga.differential_of(&g.name)));
        if valid {
            found.push(aug);
        }
    }
    found.sort();
    found
}

/// Conjugate the differential by `b ↦ b + ε(b)`: each word expands over all
/// subsets of its letters, keeping a subword exactly when every dropped
/// letter has `ε = 1`. For a genuine augmentation the constant term of every
/// conjugated differential cancels; a surviving constant term is an error
/// naming the generator.
pub fn conjugate(dga: &DgaPresentation, aug: &Augmentation) -> Result<DgaPresentation> {
    let mut new_diff = BTreeMap::new();
    for g in dga.generators() {
        let d = dga.differential_of(&g.name);
        if d.is_zero() {
            continue;
        }
        let mut out = Gf2Sum::zero();
        for w in d.words() {
            expand_word(w, aug, &mut out);
        }
        if out.has_unit() {
            return Err(LegchError::ConstantTerm(g.name.clone()));
        }
        if !out.is_zero() {
            new_diff.insert(g.name.clone(), out);
        }
    }
    dga.with_differential(new_diff)
}

/// Expand one word of the differential under the substitution, adding the
/// surviving subwords into `out` mod 2.
fn expand_word(w: &Word, aug: &Augmentation, out: &mut Gf2Sum) {
    // Letters with ε = 0 must be kept (dropping them contributes factor 0);
    // letters with ε = 1 may be kept or dropped, giving one subword per
    // subset of the ε = 1 positions.
    let flexible: Vec<usize> =
        (0..w.len()).filter(|&i| aug.value(&w[i])).collect();
    let count = 1u64 << flexible.len();
    assert!(flexible.len() <= 20, "word has too many augmented letters");
    for mask in 0..count {
        let dropped: BTreeSet<usize> = flexible
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &pos)| pos)
            .collect();
        let sub: Word = (0..w.len())
            .filter(|i| !dropped.contains(i))
            .map(|i| w[i].clone())
            .collect();
        out.toggle(sub);
    }
}

/// The linear complex of an augmentation: conjugate, keep length-one words,
/// grade by generator degree. The differential lowers degree by one.
pub fn linearized_complex(dga: &DgaPresentation, aug: &Augmentation) -> Result<ChainComplex> {
    let conj = conjugate(dga, aug)?;
    let linear = conj.linear_differential()?;
    let mut builder: ComplexBuilder = ChainComplex::builder(Direction::Down);
    for g in dga.generators() {
        builder = builder.generator(g.degree, &g.name);
    }
    for (src, targets) in &linear {
        if targets.is_empty() {
            continue;
        }
        let refs: Vec<&str> = targets.iter().map(String::as_str).collect();
        builder = builder.boundary(src, &refs);
    }
    Ok(builder.build()?)
}

/// Sorted (degree, rank) pairs of a complex's homology, omitting zeros.
pub fn poincare_polynomial(cx: &ChainComplex) -> Vec<(i64, usize)> {
    cx.homology().ranks().into_iter().filter(|&(_, r)| r > 0).collect()
}

/// Survey of all augmentations with their linear-homology polynomials and
/// the resulting multiset (polynomial → multiplicity).
#[derive(Debug, Clone)]
pub struct AugmentationSurvey {
    pub augmentations: Vec<Augmentation>,
    pub polynomials: Vec<Vec<(i64, usize)>>,
    pub multiset: BTreeMap<Vec<(i64, usize)>, usize>,
}

pub fn survey(dga: &DgaPresentation, ungraded: bool) -> Result<AugmentationSurvey> {
    let augmentations = enumerate_augmentations(dga, ungraded);
    let mut polynomials = Vec::new();
    let mut multiset: BTreeMap<Vec<(i64, usize)>, usize> = BTreeMap::new();
    for aug in &augmentations {
        let cx = linearized_complex(dga, aug)?;
        let poly = poincare_polynomial(&cx);
        *multiset.entry(poly.clone()).or_insert(0) += 1;
        polynomials.push(poly);
    }
    Ok(AugmentationSurvey { augmentations, polynomials, multiset })
}

/// Verify the chain-homotopy identity tying two augmentations along a
/// witness `K` (a bit per generator, absent = 0):
///
/// ```text
/// ε⁻(c) + ε⁺(c) = Ω_K(d c),
/// Ω_K(b₁ … b_m) = Σ_j ε⁻(b₁)…ε⁻(b_{j−1}) · K(b_j) · ε⁺(b_{j+1})…ε⁺(b_m),
/// Ω_K(1) = 0.
/// ```
///
/// Returns the generators where the identity fails (empty = homotopic via
/// this witness).
pub fn homotopy_witness_failures(
    dga: &DgaPresentation,
    eps_minus: &Augmentation,
    eps_plus: &Augmentation,
    witness: &BTreeMap<String, bool>,
) -> Vec<String> {
    let k = |name: &str| witness.get(name).copied().unwrap_or(false);
    let mut failures = Vec::new();
    for g in dga.generators() {
        let lhs = eps_minus.value(&g.name) ^ eps_plus.value(&g.name);
        let mut rhs = false;
        for w in dga.differential_of(&g.name).words() {
            for j in 0..w.len() {
                let before = w[..j].iter().all(|b| eps_minus.value(b));
                let after = w[j + 1..].iter().all(|b| eps_plus.value(b));
                rhs ^= before && k(&w[j]) && after;
            }
        }
        if lhs != rhs {
            failures.push(g.name.clone());
        }
    }
    failures
}
