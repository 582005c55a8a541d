//! The two-copy Floer complex: chords of the original knot become "long"
//! generators, critical points of a function on the knot become "short"
//! chord generators, and critical points of a function on a filling surface
//! become intersection-point generators.
//!
//! The total differential is upper triangular with respect to the
//! (chords, points) decomposition,
//!
//! ```text
//!     [ d_infty  rho ]
//!     [    0     d_0 ]
//! ```
//!
//! where `d_infty` acts on chords (its long-to-long block is the transposed
//! linear differential, the short block is the knot-level Morse complex, and
//! a connecting block maps shorts into longs), `d_0` is the filling-level
//! Morse complex, and `rho` maps points into chords.  Assembly verifies the
//! three block identities `d_infty² = 0`, `d_0² = 0`,
//! `d_infty∘rho + rho∘d_0 = 0` and an action filter: chords carry positive
//! action, points carry zero action, and the differential never decreases
//! action.  Short chords are assigned a uniform small positive action below
//! every long action, reflecting that they arise from an arbitrarily small
//! shift.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use num_traits::One;

use gf2core::{
    les_of_subcomplex, ChainComplex, ChainMap, Direction, Gf2Matrix, LongExactSequence,
    SubquotientLes,
};

use crate::aug::{enumerate_augmentations, linearized_complex, Augmentation};
use crate::dga::DgaPresentation;
use crate::error::{LegchError, Result};
use crate::sft::SftComplex;

/// Which geometric side a Morse complex describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorseRole {
    /// Function on the knot itself; critical points model short chords.
    Lambda,
    /// Function on the filling surface; critical points model intersection
    /// points.
    Filling,
}

/// A Morse complex given by explicit critical points with stored chain
/// degrees and a degree-raising boundary.
#[derive(Debug, Clone)]
pub struct MorseComplexData {
    pub role: MorseRole,
    pub complex: ChainComplex,
}

impl MorseComplexData {
    /// Either grading direction is accepted here; each consumer states the
    /// direction it needs (the two-copy assembly wants a degree-raising
    /// differential, the duality assembly a degree-lowering one).
    pub fn new(role: MorseRole, complex: ChainComplex) -> Result<MorseComplexData> {
        Ok(MorseComplexData { role, complex })
    }
}

/// The two off-diagonal inputs: short chords into long chords (inside
/// `d_infty`) and intersection points into chords (`rho`).
#[derive(Debug, Clone, Default)]
pub struct ConnectingData {
    /// Row `s -> set of long chords` appearing in `d(s)`.
    pub short_to_long: BTreeMap<String, BTreeSet<String>>,
    /// Row `p -> set of chords` appearing in `d(p)`.
    pub point_to_chord: BTreeMap<String, BTreeSet<String>>,
}

/// Raw generator data for a two-copy complex; the validated complex is
/// produced by [`TwoCopyComplex::from_parts`].
#[derive(Debug, Clone)]
pub struct TwoCopyParts {
    pub degrees: BTreeMap<String, i64>,
    pub long: BTreeSet<String>,
    pub short: BTreeSet<String>,
    pub points: BTreeSet<String>,
    /// Chord actions; points are implicitly at action zero.
    pub actions: BTreeMap<String, Rational64>,
    pub boundaries: BTreeMap<String, BTreeSet<String>>,
}

/// A validated two-copy complex with its basis partition and action data.
#[derive(Debug, Clone)]
pub struct TwoCopyComplex {
    total: ChainComplex,
    long: BTreeSet<String>,
    short: BTreeSet<String>,
    points: BTreeSet<String>,
    actions: BTreeMap<String, Rational64>,
}

impl TwoCopyComplex {
    /// Validate raw parts and build the total complex.
    ///
    /// Checks, in order: partition sanity and degree offsets of boundary
    /// entries (input errors); the three block identities (structured
    /// rejection naming the violated identity and the source degree); the
    /// action filter.
    pub fn from_parts(parts: TwoCopyParts) -> Result<TwoCopyComplex> {
        let TwoCopyParts { degrees, long, short, points, actions, boundaries } = parts;

        let chords: BTreeSet<&String> = long.union(&short).collect();
        let mut all = BTreeSet::new();
        for name in long.iter().chain(short.iter()).chain(points.iter()) {
            if !all.insert(name.clone()) {
                return Err(LegchError::DuplicateGenerator(name.clone()));
            }
            if !degrees.contains_key(name) {
                return Err(LegchError::UnknownGenerator(name.clone()));
            }
        }
        for (src, targets) in &boundaries {
            if !all.contains(src) {
                return Err(LegchError::UnknownGenerator(src.clone()));
            }
            for t in targets {
                if !all.contains(t) {
                    return Err(LegchError::UnknownGenerator(t.clone()));
                }
                if degrees[t] != degrees[src] + 1 {
                    return Err(LegchError::BasisIncompatibility(format!(
                        "boundary of `{src}` (degree {}) hits `{t}` (degree {}), expected \
                         degree {}",
                        degrees[src],
                        degrees[t],
                        degrees[src] + 1
                    )));
                }
                if chords.contains(src) && points.contains(t) {
                    return Err(LegchError::BasisIncompatibility(format!(
                        "chord `{src}` has intersection point `{t}` in its boundary; the \
                         point block must not receive chords"
                    )));
                }
            }
        }

        let empty = BTreeSet::new();
        let targets_of = |g: &String| boundaries.get(g).unwrap_or(&empty);
        let double = |g: &String| -> BTreeSet<String> {
            let mut dd = BTreeSet::new();
            for t in targets_of(g) {
                for tt in targets_of(t) {
                    if !dd.remove(tt) {
                        dd.insert(tt.clone());
                    }
                }
            }
            dd
        };

        // d_0 squared: the point part of d²p.
        for p in &points {
            if double(p).iter().any(|t| points.contains(t)) {
                return Err(LegchError::TwoCopyIdentity {
                    identity: "d_0 ∘ d_0".to_string(),
                    degree: degrees[p],
                });
            }
        }
        // d_infty squared on chords.
        for c in chords.iter() {
            if !double(c).is_empty() {
                return Err(LegchError::TwoCopyIdentity {
                    identity: "d_infty ∘ d_infty".to_string(),
                    degree: degrees[*c],
                });
            }
        }
        // The mixed identity: the chord part of d²p is d_infty∘rho + rho∘d_0.
        for p in &points {
            if double(p).iter().any(|t| chords.contains(t)) {
                return Err(LegchError::TwoCopyIdentity {
                    identity: "d_infty ∘ rho + rho ∘ d_0".to_string(),
                    degree: degrees[p],
                });
            }
        }

        // Action filter.  Chords must carry positive action; shorts get a
        // uniform action below every long action; points sit at zero.
        let mut full_actions: BTreeMap<String, Rational64> = BTreeMap::new();
        let short_action = long
            .iter()
            .map(|g| actions[g])
            .min()
            .map_or_else(Rational64::one, |m| m / 2);
        for g in &long {
            let a = *actions.get(g).ok_or_else(|| {
                LegchError::UnknownGenerator(format!("{g} (missing action)"))
            })?;
            if a <= Rational64::from_integer(0) {
                return Err(LegchError::NonPositiveAction(g.clone()));
            }
            full_actions.insert(g.clone(), a);
        }
        for s in &short {
            full_actions.insert(s.clone(), *actions.get(s).unwrap_or(&short_action));
        }
        for p in &points {
            full_actions.insert(p.clone(), Rational64::from_integer(0));
        }
        for (src, targets) in &boundaries {
            for t in targets {
                if full_actions[t] < full_actions[src] {
                    return Err(LegchError::ActionDecrease {
                        from: src.clone(),
                        to: t.clone(),
                    });
                }
            }
        }

        // All checks passed; materialize the total complex with the basis
        // order long < short < points inside each degree, each block sorted.
        let mut builder = ChainComplex::builder(Direction::Up);
        let mut by_degree: BTreeMap<i64, Vec<&String>> = BTreeMap::new();
        for part in [&long, &short, &points] {
            for g in part.iter() {
                by_degree.entry(degrees[g]).or_default().push(g);
            }
        }
        let mut ordered: Vec<(i64, String)> = Vec::new();
        for (d, names) in &by_degree {
            let mut longs: Vec<&&String> = names.iter().filter(|n| long.contains(**n)).collect();
            let mut shorts: Vec<&&String> = names.iter().filter(|n| short.contains(**n)).collect();
            let mut pts: Vec<&&String> = names.iter().filter(|n| points.contains(**n)).collect();
            longs.sort();
            shorts.sort();
            pts.sort();
            for g in longs.into_iter().chain(shorts).chain(pts) {
                ordered.push((*d, (**g).clone()));
            }
        }
        for (d, name) in &ordered {
            builder = builder.generator(*d, name);
        }
        for (src, targets) in &boundaries {
            if targets.is_empty() {
                continue;
            }
            let refs: Vec<&str> = targets.iter().map(String::as_str).collect();
            builder = builder.boundary(src, &refs);
        }
        let total = builder.build()?;

        Ok(TwoCopyComplex { total, long, short, points, actions: full_actions })
    }

    pub fn total(&self) -> &ChainComplex {
        &self.total
    }

    pub fn long_labels(&self) -> &BTreeSet<String> {
        &self.long
    }

    pub fn short_labels(&self) -> &BTreeSet<String> {
        &self.short
    }

    pub fn point_labels(&self) -> &BTreeSet<String> {
        &self.points
    }

    pub fn action_of(&self, name: &str) -> Option<Rational64> {
        self.actions.get(name).copied()
    }

    /// Boundary of one generator as a set of target labels.
    pub fn boundary_of(&self, name: &str) -> BTreeSet<String> {
        let d = self.total.degree_of(name).expect("generator present");
        let j = self.total.label_index(d, name).expect("generator present");
        let m = self.total.differential(d);
        let tgt = self.total.labels(d + 1);
        m.entries()
            .filter(|&(_, col)| col == j)
            .map(|(row, _)| tgt[row].clone())
            .collect()
    }

    fn parts(&self) -> TwoCopyParts {
        let mut degrees = BTreeMap::new();
        let mut boundaries = BTreeMap::new();
        for d in self.total.degrees() {
            for name in self.total.labels(d) {
                degrees.insert(name.clone(), d);
                boundaries.insert(name.clone(), self.boundary_of(name));
            }
        }
        TwoCopyParts {
            degrees,
            long: self.long.clone(),
            short: self.short.clone(),
            points: self.points.clone(),
            actions: self.actions.clone(),
            boundaries,
        }
    }

    /// Re-run the full validation pipeline on the stored data.
    pub fn verify(&self) -> Result<()> {
        TwoCopyComplex::from_parts(self.parts()).map(|_| ())
    }
}

/// Assemble a two-copy complex from a chord algebra with augmentation
/// (providing the long block as the transposed linear differential,
/// restricted to the tagged long chords), two Morse complexes and the
/// connecting matrices.
///
/// Tagging only a subset of chords as long models a truncation window; the
/// block identities then detect tag sets that are not action-closed.
pub fn assemble_two_copy(
    dga: &DgaPresentation,
    aug: &Augmentation,
    long_tags: &BTreeSet<String>,
    morse_lambda: &MorseComplexData,
    morse_filling: &MorseComplexData,
    conn: &ConnectingData,
) -> Result<TwoCopyComplex> {
    if morse_lambda.role != MorseRole::Lambda {
        return Err(LegchError::Precondition(
            "first morse block must have the knot-level role".to_string(),
        ));
    }
    if morse_filling.role != MorseRole::Filling {
        return Err(LegchError::Precondition(
            "second morse block must have the filling-level role".to_string(),
        ));
    }
    for m in [morse_lambda, morse_filling] {
        if m.complex.direction() != Direction::Up {
            return Err(LegchError::Precondition(
                "two-copy morse data must use a degree-raising differential".to_string(),
            ));
        }
    }
    let sft = SftComplex::build(dga, aug)?;

    let mut degrees = BTreeMap::new();
    let mut actions = BTreeMap::new();
    let mut boundaries: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();

    // Long chords: tagged generators with the truncated transposed linear
    // differential.
    for tag in long_tags {
        let g = dga
            .generator(tag)
            .ok_or_else(|| LegchError::UnknownGenerator(tag.clone()))?;
        degrees.insert(tag.clone(), g.degree);
        actions.insert(tag.clone(), g.action);
    }
    for tag in long_tags {
        let d = degrees[tag];
        let cx = sft.complex();
        let j = cx
            .label_index(d, tag)
            .expect("chord present in the co-vector complex");
        let tgt = cx.labels(d + 1);
        let targets: BTreeSet<String> = cx
            .differential(d)
            .entries()
            .filter(|&(_, col)| col == j)
            .map(|(row, _)| tgt[row].clone())
            .filter(|t| long_tags.contains(t))
            .collect();
        boundaries.insert(tag.clone(), targets);
    }

    // Short chords and intersection points from the Morse data.
    let mut collect = |cx: &ChainComplex, bucket: &mut BTreeSet<String>| -> Result<()> {
        for d in cx.degrees() {
            for name in cx.labels(d) {
                if dga.generator(name).is_some() {
                    return Err(LegchError::DuplicateGenerator(name.clone()));
                }
                degrees.insert(name.clone(), d);
                bucket.insert(name.clone());
                let j = cx.label_index(d, name).expect("label present");
                let tgt = cx.labels(d + 1);
                let targets: BTreeSet<String> = cx
                    .differential(d)
                    .entries()
                    .filter(|&(_, col)| col == j)
                    .map(|(row, _)| tgt[row].clone())
                    .collect();
                boundaries.insert(name.clone(), targets);
            }
        }
        Ok(())
    };
    let mut short = BTreeSet::new();
    let mut points = BTreeSet::new();
    collect(&morse_lambda.complex, &mut short)?;
    collect(&morse_filling.complex, &mut points)?;

    // Connecting rows: shorts into longs, points into chords.
    for (src, targets) in &conn.short_to_long {
        if !short.contains(src) {
            return Err(LegchError::BasisIncompatibility(format!(
                "connecting row source `{src}` is not a short chord"
            )));
        }
        for t in targets {
            if !long_tags.contains(t) {
                return Err(LegchError::BasisIncompatibility(format!(
                    "connecting target `{t}` is not a long chord"
                )));
            }
            boundaries.get_mut(src).expect("short registered").insert(t.clone());
        }
    }
    for (src, targets) in &conn.point_to_chord {
        if !points.contains(src) {
            return Err(LegchError::BasisIncompatibility(format!(
                "connecting row source `{src}` is not an intersection point"
            )));
        }
        for t in targets {
            if !long_tags.contains(t) && !short.contains(t) {
                return Err(LegchError::BasisIncompatibility(format!(
                    "connecting target `{t}` is not a chord"
                )));
            }
            boundaries.get_mut(src).expect("point registered").insert(t.clone());
        }
    }

    TwoCopyComplex::from_parts(TwoCopyParts {
        degrees,
        long: long_tags.clone(),
        short,
        points,
        actions,
        boundaries,
    })
}

/// The long exact sequence cut out by the long-chord subcomplex, with its
/// terms named after what they compute: the truncated co-vector homology
/// `E1`, the two-copy homology `HF`, and the filling homology read through
/// the degree reflection `H_{n-d-2}(L)` at stored degree `d`.
#[derive(Debug, Clone)]
pub struct ConjectureSequence {
    pub cut: SubquotientLes,
    /// The same sequence relabeled with the geometric names.
    pub sequence: LongExactSequence,
    /// Per stored degree: (degree, E1 rank, HF rank, quotient rank).
    pub entries: Vec<(i64, usize, usize, usize)>,
    /// The middle (two-copy) homology vanishes everywhere.
    pub hf_vanishes: bool,
    /// Every connecting map `H^d(quotient) -> E1^{d+1}` is an isomorphism;
    /// equivalent to `hf_vanishes` by exactness.
    pub connecting_iso: bool,
}

/// Cut the two-copy complex along its long-chord subcomplex and validate
/// exactness of the resulting sequence.
pub fn conjecture_sequence(tc: &TwoCopyComplex, ambient_n: i64) -> Result<ConjectureSequence> {
    let cut = les_of_subcomplex(tc.total(), &tc.long, ("E1", "HF", "Q"))
        .map_err(|_| {
            LegchError::Precondition(
                "long chords do not span a subcomplex (inconsistent action data)".to_string(),
            )
        })?;
    cut.les.verify_exact()?;

    // Relabel: terms walk degrees ascending as (sub, total, quot) trios.
    let mut degrees: BTreeSet<i64> = BTreeSet::new();
    for cx in [&cut.sub, tc.total(), &cut.quot] {
        degrees.extend(cx.degrees());
    }
    let mut labels = Vec::new();
    let mut entries = Vec::new();
    if let (Some(&lo), Some(&hi)) = (degrees.iter().next(), degrees.iter().next_back()) {
        for d in lo..=hi {
            labels.push(format!("E1^{d}"));
            labels.push(format!("HF^{d}"));
            labels.push(format!("H_{}(L)", ambient_n - d - 2));
            entries.push((
                d,
                cut.h_sub.rank(d),
                cut.h_total.rank(d),
                cut.h_quot.rank(d),
            ));
        }
    }
    let sequence = cut.les.with_labels(labels)?;

    let hf_vanishes = cut.h_total.total_rank() == 0;
    let mut connecting_iso = true;
    for &(d, _, _, _) in &entries {
        let rows = cut.h_sub.rank(d + 1);
        let cols = cut.h_quot.rank(d);
        if rows == 0 && cols == 0 {
            continue;
        }
        let rank = cut.connecting.get(&d).map_or(0, Gf2Matrix::rank);
        if rows != cols || rank != rows {
            connecting_iso = false;
        }
    }

    Ok(ConjectureSequence { cut, sequence, entries, hf_vanishes, connecting_iso })
}

/// Outcome of comparing linearized cohomology against a candidate filling
/// homology under the reflection `H_k(L) ~ LCH^{n-k-1}`.
#[derive(Debug, Clone)]
pub enum FillabilityVerdict {
    Consistent {
        augmentation: Augmentation,
    },
    Obstructed {
        augmentation: Augmentation,
        degree: i64,
        lch_rank: usize,
        candidate_rank: usize,
    },
    /// The algebra admits no graded augmentation at all, which already rules
    /// out the candidate.
    NoAugmentation,
}

impl FillabilityVerdict {
    pub fn describe(&self) -> String {
        match self {
            FillabilityVerdict::Consistent { augmentation } => {
                format!("consistent (augmentation {})", augmentation.describe())
            }
            FillabilityVerdict::Obstructed { augmentation, degree, lch_rank, candidate_rank } => {
                format!(
                    "obstructed at degree {degree}: cohomology rank {lch_rank} vs candidate \
                     rank {candidate_rank} (augmentation {})",
                    augmentation.describe()
                )
            }
            FillabilityVerdict::NoAugmentation => "obstructed (no augmentation)".to_string(),
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, FillabilityVerdict::Consistent { .. })
    }
}

/// First degree where the cohomology of the linear complex disagrees with
/// the reflected candidate ranks, with both ranks.
fn first_mismatch(
    lch: &[(i64, usize)],
    ambient_n: i64,
    candidate: &BTreeMap<i64, usize>,
) -> Option<(i64, usize, usize)> {
    let mut degrees: BTreeSet<i64> = lch.iter().map(|&(d, _)| d).collect();
    for (&k, &r) in candidate {
        if r > 0 {
            degrees.insert(ambient_n - k - 1);
        }
    }
    for u in degrees {
        let lch_rank = lch
            .iter()
            .find(|&&(d, _)| d == u)
            .map_or(0, |&(_, r)| r);
        let cand_rank = *candidate.get(&(ambient_n - u - 1)).unwrap_or(&0);
        if lch_rank != cand_rank {
            return Some((u, lch_rank, cand_rank));
        }
    }
    None
}

/// Test whether a candidate graded rank vector for the filling homology
/// `H_*(L)` is consistent with the chord algebra: some (or the given)
/// augmentation must produce linearized cohomology matching the candidate
/// under the reflection `H_k(L) ~ LCH^{n-k-1}` with `n` the ambient
/// dimension from the presentation.
pub fn fillability_check(
    dga: &DgaPresentation,
    eps: Option<&Augmentation>,
    candidate: &BTreeMap<i64, usize>,
) -> Result<FillabilityVerdict> {
    let n = dga.ambient_n();
    let candidates: Vec<Augmentation> = match eps {
        Some(a) => vec![a.clone()],
        None => enumerate_augmentations(dga, false),
    };
    if candidates.is_empty() {
        return Ok(FillabilityVerdict::NoAugmentation);
    }
    let mut first_failure = None;
    for aug in candidates {
        let lch = linearized_complex(dga, &aug)?.dual().homology().ranks();
        match first_mismatch(&lch, n, candidate) {
            None => return Ok(FillabilityVerdict::Consistent { augmentation: aug }),
            Some((degree, lch_rank, candidate_rank)) => {
                if first_failure.is_none() {
                    first_failure = Some(FillabilityVerdict::Obstructed {
                        augmentation: aug,
                        degree,
                        lch_rank,
                        candidate_rank,
                    });
                }
            }
        }
    }
    Ok(first_failure.expect("at least one augmentation was examined"))
}

/// Slide one intersection point across another of the same degree: the base
/// change `x -> x + y` conjugates the differential and returns the
/// transformed complex with the unipotent comparison isomorphism.
pub fn handle_slide_move(
    tc: &TwoCopyComplex,
    x: &str,
    y: &str,
) -> Result<(TwoCopyComplex, ChainMap)> {
    if !tc.points.contains(x) || !tc.points.contains(y) {
        return Err(LegchError::Precondition(format!(
            "handle slide arguments must be intersection points (got `{x}`, `{y}`)"
        )));
    }
    if x == y {
        return Err(LegchError::Precondition(
            "handle slide needs two distinct points".to_string(),
        ));
    }
    let dx_deg = tc.total.degree_of(x).expect("point present");
    let dy_deg = tc.total.degree_of(y).expect("point present");
    if dx_deg != dy_deg {
        return Err(LegchError::Precondition(format!(
            "handle slide requires |{x}| = |{y}| (got {dx_deg} and {dy_deg})"
        )));
    }

    let mut parts = tc.parts();
    // d'(x) = d(x) + d(y); any other source with x in its boundary gains y.
    let toggled: BTreeSet<String> = {
        let dx = parts.boundaries[x].clone();
        let dy = parts.boundaries[y].clone();
        dx.symmetric_difference(&dy).cloned().collect()
    };
    parts.boundaries.insert(x.to_string(), toggled);
    for (src, targets) in parts.boundaries.iter_mut() {
        if src.as_str() != x && targets.contains(x) && !targets.remove(y) {
            targets.insert(y.to_string());
        }
    }
    let slid = TwoCopyComplex::from_parts(parts)?;

    // Comparison map: identity except for the transvection in degree |x|.
    let mut components = BTreeMap::new();
    for d in tc.total.degrees() {
        let mut m = Gf2Matrix::identity(tc.total.dim(d));
        if d == dx_deg {
            let col = tc.total.label_index(d, x).expect("x present");
            let row = slid.total.label_index(d, y).expect("y present");
            m.flip(row, col);
        }
        components.insert(d, m);
    }
    let phi = ChainMap::new(tc.total(), slid.total(), 0, components)?;
    Ok((slid, phi))
}

/// Cancel a pair of intersection points `x`, `y` with `y` appearing in
/// `d(x)`.  Returns the reduced complex together with the projection
/// `Phi` (old to reduced; kills `x`, sends `y` to the residual part of
/// `d(x)`) and the twisted inclusion `Psi` (reduced to old).  Verifies both
/// are chain maps, that `Phi ∘ Psi` is the identity, and that all homology
/// ranks are preserved.
pub fn birth_death_move(
    tc: &TwoCopyComplex,
    x: &str,
    y: &str,
) -> Result<(TwoCopyComplex, ChainMap, ChainMap)> {
    if !tc.points.contains(x) || !tc.points.contains(y) {
        return Err(LegchError::Precondition(format!(
            "birth/death arguments must be intersection points (got `{x}`, `{y}`)"
        )));
    }
    let dx = tc.boundary_of(x);
    if !dx.contains(y) {
        return Err(LegchError::Precondition(format!(
            "`{y}` does not appear in the boundary of `{x}`"
        )));
    }
    let x_deg = tc.total.degree_of(x).expect("point present");
    let mut v = dx.clone();
    v.remove(y);

    let mut parts = tc.parts();
    for name in [x, y] {
        parts.boundaries.remove(name);
        parts.degrees.remove(name);
        parts.points.remove(name);
        parts.actions.remove(name);
    }
    for targets in parts.boundaries.values_mut() {
        if targets.remove(y) {
            // Reroute through the residual boundary of x.
            for t in &v {
                if !targets.remove(t) {
                    targets.insert(t.clone());
                }
            }
        }
        targets.remove(x);
    }
    let reduced = TwoCopyComplex::from_parts(parts)?;

    // Phi: old -> reduced.
    let mut phi_components = BTreeMap::new();
    for d in tc.total.degrees() {
        let rows = reduced.total.dim(d);
        let cols = tc.total.dim(d);
        let mut m = Gf2Matrix::zero(rows, cols);
        for (j, name) in tc.total.labels(d).iter().enumerate() {
            if name == x {
                continue;
            }
            if name == y {
                for t in &v {
                    let i = reduced.total.label_index(d, t).expect("residual target kept");
                    m.flip(i, j);
                }
                continue;
            }
            let i = reduced.total.label_index(d, name).expect("survivor kept");
            m.flip(i, j);
        }
        phi_components.insert(d, m);
    }
    let phi = ChainMap::new(tc.total(), reduced.total(), 0, phi_components)?;

    // Psi: reduced -> old, twisting degree-|x| sources through x.
    let mut psi_components = BTreeMap::new();
    for d in reduced.total.degrees() {
        let rows = tc.total.dim(d);
        let cols = reduced.total.dim(d);
        let mut m = Gf2Matrix::zero(rows, cols);
        for (j, name) in reduced.total.labels(d).iter().enumerate() {
            let i = tc.total.label_index(d, name).expect("survivor came from old basis");
            m.flip(i, j);
            if d == x_deg && tc.boundary_of(name).contains(y) {
                let xi = tc.total.label_index(d, x).expect("x present in old");
                m.flip(xi, j);
            }
        }
        psi_components.insert(d, m);
    }
    let psi = ChainMap::new(reduced.total(), tc.total(), 0, psi_components)?;

    let retract = phi.compose(&psi).map_err(LegchError::from)?;
    for d in reduced.total.degrees() {
        if retract.component(d) != Gf2Matrix::identity(reduced.total.dim(d)) {
            return Err(LegchError::Precondition(format!(
                "cancellation retraction is not the identity in degree {d}"
            )));
        }
    }
    let before = tc.total.homology().ranks();
    let after = reduced.total.homology().ranks();
    if before != after {
        return Err(LegchError::Precondition(format!(
            "cancellation changed homology ranks: {before:?} vs {after:?}"
        )));
    }
    Ok((reduced, phi, psi))
}

/// Verify a candidate comparison map between two two-copy complexes that is
/// required to fix every intersection point: point bases must agree and each
/// point must map identically to itself; the chain-map identity is then
/// checked on the supplied matrices.
pub fn join_map_check(
    source: &TwoCopyComplex,
    target: &TwoCopyComplex,
    components: &BTreeMap<i64, Gf2Matrix>,
) -> Result<ChainMap> {
    if source.points != target.points {
        return Err(LegchError::BasisIncompatibility(
            "join map endpoints have different intersection-point bases".to_string(),
        ));
    }
    for p in &source.points {
        let d = source.total.degree_of(p).expect("point present");
        if target.total.degree_of(p) != Some(d) {
            return Err(LegchError::BasisIncompatibility(format!(
                "intersection point `{p}` changes degree between the complexes"
            )));
        }
        let j = source.total.label_index(d, p).expect("point present");
        let i = target.total.label_index(d, p).expect("point present");
        let column: BTreeSet<usize> = components
            .get(&d)
            .map(|m| m.entries().filter(|&(_, c)| c == j).map(|(r, _)| r).collect())
            .unwrap_or_default();
        if column != BTreeSet::from([i]) {
            return Err(LegchError::BasisIncompatibility(format!(
                "join map moves intersection point `{p}`"
            )));
        }
    }
    Ok(ChainMap::new(source.total(), target.total(), 0, components.clone())?)
}

/// Result of the chain-homotopy identity check
/// `Psi ∘ Phi_minus + Phi_plus = K ∘ d + d ∘ K`.
#[derive(Debug, Clone)]
pub struct HomotopySquare {
    pub pass: bool,
    /// Degrees with a nonzero defect.
    pub failures: Vec<i64>,
}

/// Check the chain-homotopy identity exactly; `k` maps degree `d` to degree
/// `d - 1` of the target.  With `k = 0` this degenerates to strict equality
/// of `Psi ∘ Phi_minus` and `Phi_plus`.
pub fn homotopy_square_check(
    phi_minus: &ChainMap,
    phi_plus: &ChainMap,
    psi: &ChainMap,
    k: &BTreeMap<i64, Gf2Matrix>,
) -> Result<HomotopySquare> {
    let composed = psi.compose(phi_minus).map_err(LegchError::from)?;
    let defects = composed.homotopy_defect(phi_plus, k).map_err(LegchError::from)?;
    let failures: Vec<i64> = defects
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&d, _)| d)
        .collect();
    Ok(HomotopySquare { pass: failures.is_empty(), failures })
}
