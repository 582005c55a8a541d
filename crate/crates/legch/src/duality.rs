//! Three-block splittings of an acyclic, degree-lowering complex and the
//! checks they support.
//!
//! The basis splits into a top block `Q` (the linearized chord complex), a
//! middle block `C` (a Morse complex for the knot) and a bottom block `P`
//! paired off with `Q` element by element.  The differential is lower
//! triangular for that order,
//!
//! ```text
//!     [ d_Q    0     0   ]
//!     [ rho   d_C    0   ]
//!     [ eta  sigma  d_P  ]
//! ```
//!
//! with `d_P` the transpose of `d_Q` under the pairing and the total complex
//! acyclic.  From such a splitting this module extracts:
//!
//! * a long exact sequence interleaving the knot homology with the chord
//!   homology and its dual, together with a representative-level check that
//!   classes with nonzero image pair off against dual classes through
//!   `sigma`;
//! * the comparison chain maps `(eta sigma): Q+C -> P` and
//!   `(rho; eta): Q -> C+P`, which must induce isomorphisms on homology;
//! * commuting-square checks connecting the splitting's sequences to the
//!   two-copy complex of the same knot, where the two sides are aligned by
//!   reflecting degrees through the pairing degree sum.
//!
//! All homology-level comparisons use the deterministic representative bases
//! of the underlying exact linear algebra, so maps extracted from different
//! sequence constructions over the same complex compose consistently.

use std::collections::{BTreeMap, BTreeSet};

use gf2core::{
    les_of_subcomplex, ChainComplex, ChainMap, Direction, Gf2Matrix, Homology, LesTerm,
    LongExactSequence, SubquotientLes,
};

use crate::error::{LegchError, Result};
use crate::two_copy::{MorseComplexData, MorseRole, TwoCopyComplex};

/// Map from basis-element names to sums of basis-element names.  Used for
/// the off-diagonal blocks `rho`, `sigma`, `eta` and for user-supplied
/// comparison maps.
pub type LabelMap = BTreeMap<String, BTreeSet<String>>;

/// A validated lower-triangular splitting of an acyclic total complex.
#[derive(Debug, Clone)]
pub struct DualitySplitting {
    total: ChainComplex,
    q_labels: BTreeSet<String>,
    c_labels: BTreeSet<String>,
    p_labels: BTreeSet<String>,
    pairing: BTreeMap<String, String>,
    rho: LabelMap,
    sigma: LabelMap,
    eta: LabelMap,
    degree_sum: i64,
}

impl DualitySplitting {
    /// The assembled total complex (degree-lowering).
    pub fn total(&self) -> &ChainComplex {
        &self.total
    }

    pub fn q_labels(&self) -> &BTreeSet<String> {
        &self.q_labels
    }

    pub fn c_labels(&self) -> &BTreeSet<String> {
        &self.c_labels
    }

    pub fn p_labels(&self) -> &BTreeSet<String> {
        &self.p_labels
    }

    /// The bijection from `Q` basis names to their `P` partners.
    pub fn pairing(&self) -> &BTreeMap<String, String> {
        &self.pairing
    }

    /// The constant degree sum of paired elements.
    pub fn degree_sum(&self) -> i64 {
        self.degree_sum
    }

    pub fn rho(&self) -> &LabelMap {
        &self.rho
    }

    pub fn sigma(&self) -> &LabelMap {
        &self.sigma
    }

    pub fn eta(&self) -> &LabelMap {
        &self.eta
    }

    /// Names in the union of the `C` and `P` blocks.
    fn cp_labels(&self) -> BTreeSet<String> {
        self.c_labels.union(&self.p_labels).cloned().collect()
    }
}

/// Collect, per generator name, the set of names appearing in its boundary.
fn boundary_sets(cx: &ChainComplex) -> BTreeMap<String, BTreeSet<String>> {
    let off = cx.direction().offset();
    let mut out = BTreeMap::new();
    for d in cx.degrees() {
        let m = cx.differential(d);
        let tgt = cx.labels(d + off);
        let mut cols: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        for (i, j) in m.entries() {
            cols.entry(j).or_default().insert(tgt[i].clone());
        }
        for (j, name) in cx.labels(d).iter().enumerate() {
            out.insert(name.clone(), cols.remove(&j).unwrap_or_default());
        }
    }
    out
}

/// Validate one off-diagonal block: every source must live in `sources`,
/// every target in `targets`, and targets must sit exactly one degree below
/// their source in the (degree-lowering) total grading.
fn check_block_map(
    map: &LabelMap,
    name: &str,
    sources: &BTreeSet<String>,
    targets: &BTreeSet<String>,
    degree: &BTreeMap<String, i64>,
) -> Result<()> {
    for (src, tgts) in map {
        if !sources.contains(src) {
            return Err(LegchError::BasisIncompatibility(format!(
                "{name} source {src} is not in the expected block"
            )));
        }
        for t in tgts {
            if !targets.contains(t) {
                return Err(LegchError::BasisIncompatibility(format!(
                    "{name} target {t} of {src} is not in the expected block"
                )));
            }
            if degree[t] != degree[src] - 1 {
                return Err(LegchError::BasisIncompatibility(format!(
                    "{name} entry {src} -> {t} does not lower degree by one"
                )));
            }
        }
    }
    Ok(())
}

/// Assemble and validate a splitting from its pieces.
///
/// * `lin` is the linearized chord complex the `Q` block must reproduce;
/// * `q_block`, `p_block` are the declared top and bottom blocks;
/// * `morse_lambda` is the knot-level Morse block (role `Lambda`,
///   degree-lowering differential);
/// * `pairing` matches each `Q` basis name with a `P` basis name;
/// * `rho`, `sigma`, `eta` are the off-diagonal entries.
///
/// Checks, in order: grading directions and the Morse role; `Q` equal to
/// `lin` degree by degree; disjoint block names; the pairing a bijection
/// with constant degree sum; `d_P` equal to the transpose of `d_Q` under
/// the pairing; off-diagonal blocks shape-correct; the assembled total
/// differential squaring to zero; and the total complex acyclic.  Each
/// failure mode reports through its own error variant.
// One argument per input section keeps call sites aligned with the file
// format; bundling them into a struct would only rename the problem.
#[allow(clippy::too_many_arguments)]
pub fn assemble_duality(
    lin: &ChainComplex,
    q_block: &ChainComplex,
    morse_lambda: &MorseComplexData,
    p_block: &ChainComplex,
    pairing: &BTreeMap<String, String>,
    rho: &LabelMap,
    sigma: &LabelMap,
    eta: &LabelMap,
) -> Result<DualitySplitting> {
    if morse_lambda.role != MorseRole::Lambda {
        return Err(LegchError::Precondition(
            "the middle block must carry the knot-level Morse role".to_string(),
        ));
    }
    let c_block = &morse_lambda.complex;
    for (cx, what) in [
        (lin, "linearized complex"),
        (q_block, "Q block"),
        (c_block, "Morse block"),
        (p_block, "P block"),
    ] {
        if cx.direction() != Direction::Down {
            return Err(LegchError::Precondition(format!(
                "{what} must use a degree-lowering differential"
            )));
        }
    }

    // The top block must be exactly the linearized complex.
    if q_block.degrees() != lin.degrees() {
        return Err(LegchError::DualityQMismatch(
            "occupied degrees differ".to_string(),
        ));
    }
    for d in q_block.degrees() {
        if q_block.labels(d) != lin.labels(d) {
            return Err(LegchError::DualityQMismatch(format!(
                "basis differs at degree {d}"
            )));
        }
        if q_block.differential(d) != lin.differential(d) {
            return Err(LegchError::DualityQMismatch(format!(
                "differential differs at degree {d}"
            )));
        }
    }

    // Collect names and degrees; the three blocks must not share names.
    let mut degree: BTreeMap<String, i64> = BTreeMap::new();
    let mut collect = |cx: &ChainComplex| -> Result<BTreeSet<String>> {
        let mut set = BTreeSet::new();
        for d in cx.degrees() {
            for name in cx.labels(d) {
                if degree.insert(name.clone(), d).is_some() {
                    return Err(LegchError::BasisIncompatibility(format!(
                        "name {name} appears in two blocks"
                    )));
                }
                set.insert(name.clone());
            }
        }
        Ok(set)
    };
    let q_labels = collect(q_block)?;
    let c_labels = collect(c_block)?;
    let p_labels = collect(p_block)?;

    // The pairing must be a total bijection Q -> P with constant degree sum.
    for q in pairing.keys() {
        if !q_labels.contains(q) {
            return Err(LegchError::DualityPairMismatch(format!(
                "{q} is not a Q basis element"
            )));
        }
    }
    let mut seen_p: BTreeSet<&String> = BTreeSet::new();
    let mut degree_sum: Option<i64> = None;
    for q in &q_labels {
        let p = pairing.get(q).ok_or_else(|| {
            LegchError::DualityPairMismatch(format!("no partner declared for {q}"))
        })?;
        if !p_labels.contains(p) {
            return Err(LegchError::DualityPairMismatch(format!(
                "partner {p} of {q} is not a P basis element"
            )));
        }
        if !seen_p.insert(p) {
            return Err(LegchError::DualityPairMismatch(format!(
                "{p} is paired with two elements"
            )));
        }
        let s = degree[q] + degree[p];
        match degree_sum {
            None => degree_sum = Some(s),
            Some(t) if t != s => {
                return Err(LegchError::DualityPairMismatch(format!(
                    "degree sums differ: {t} for earlier pairs, {s} for ({q}, {p})"
                )));
            }
            _ => {}
        }
    }
    if seen_p.len() != p_labels.len() {
        let missing = p_labels
            .iter()
            .find(|p| !seen_p.contains(p))
            .expect("some P element is unpaired");
        return Err(LegchError::DualityPairMismatch(format!(
            "{missing} has no partner in Q"
        )));
    }
    let degree_sum = degree_sum.unwrap_or(0);

    // The bottom differential must be the transpose of the top one under
    // the pairing: d_Q(c') containing c forces d_P(pair(c)) to contain
    // pair(c'), and nothing else is allowed.
    let q_bnd = boundary_sets(q_block);
    let p_bnd = boundary_sets(p_block);
    let mut expected: BTreeMap<&String, BTreeSet<String>> =
        p_labels.iter().map(|p| (p, BTreeSet::new())).collect();
    for (src, tgts) in &q_bnd {
        for t in tgts {
            expected
                .get_mut(&pairing[t])
                .expect("pairing is total")
                .insert(pairing[src].clone());
        }
    }
    for (p, want) in &expected {
        let got = &p_bnd[*p];
        if *got != *want {
            return Err(LegchError::DualityPairMismatch(format!(
                "differential of {p} is not the transpose of the Q block"
            )));
        }
    }

    // Off-diagonal blocks: right source and target blocks, degree drop one.
    check_block_map(rho, "rho", &q_labels, &c_labels, &degree)?;
    check_block_map(sigma, "sigma", &c_labels, &p_labels, &degree)?;
    check_block_map(eta, "eta", &q_labels, &p_labels, &degree)?;

    // Total boundary of each generator as a name set.
    let c_bnd = boundary_sets(c_block);
    let mut boundaries: BTreeMap<&String, BTreeSet<String>> = BTreeMap::new();
    let empty = BTreeSet::new();
    for q in &q_labels {
        let mut b = q_bnd[q].clone();
        b.extend(rho.get(q).unwrap_or(&empty).iter().cloned());
        b.extend(eta.get(q).unwrap_or(&empty).iter().cloned());
        boundaries.insert(q, b);
    }
    for c in &c_labels {
        let mut b = c_bnd[c].clone();
        b.extend(sigma.get(c).unwrap_or(&empty).iter().cloned());
        boundaries.insert(c, b);
    }
    for p in &p_labels {
        boundaries.insert(p, p_bnd[p].clone());
    }

    // The square of the total differential, generator by generator.
    for (g, bnd) in &boundaries {
        let mut dd: BTreeSet<&String> = BTreeSet::new();
        for t in bnd {
            for u in &boundaries[t] {
                if !dd.remove(u) {
                    dd.insert(u);
                }
            }
        }
        if !dd.is_empty() {
            return Err(LegchError::DualitySquare(degree[*g]));
        }
    }

    // Materialize with the basis order Q < C < P inside each degree, each
    // block sorted by name.
    let mut builder = ChainComplex::builder(Direction::Down);
    for block in [&q_labels, &c_labels, &p_labels] {
        for g in block.iter() {
            builder = builder.generator(degree[g], g);
        }
    }
    for block in [&q_labels, &c_labels, &p_labels] {
        for g in block.iter() {
            let tgts: Vec<&str> = boundaries[g].iter().map(String::as_str).collect();
            if !tgts.is_empty() {
                builder = builder.boundary(g, &tgts);
            }
        }
    }
    let total = builder.build()?;

    let h = total.homology();
    if h.total_rank() != 0 {
        let (d, _) = h.ranks()[0];
        return Err(LegchError::DualityNotAcyclic(d));
    }

    Ok(DualitySplitting {
        total,
        q_labels,
        c_labels,
        p_labels,
        pairing: pairing.clone(),
        rho: rho.clone(),
        sigma: sigma.clone(),
        eta: eta.clone(),
        degree_sum,
    })
}

/// The long exact sequence extracted from a splitting, with the
/// representative-level pairing verification.
#[derive(Debug, Clone)]
pub struct DualitySequence {
    /// The spliced sequence
    /// `... -> H_j(C) -> H_{j-1}(P) -> H_j(Q) -> H_{j-1}(C) -> ...`,
    /// labeled with the knot and chord homology names and verified exact.
    pub sequence: LongExactSequence,
    /// Homology classes `(degree, basis index)` of the top block whose image
    /// in the knot homology is nonzero and for which a dual partner pairing
    /// to one was found.
    pub pairing_checked: Vec<(i64, usize)>,
    /// Classes with nonzero image but no dual partner.
    pub pairing_failures: Vec<(i64, usize)>,
    pub pairing_ok: bool,
}

/// Look a degree-indexed induced map up, defaulting to the zero map of the
/// right shape.
fn get_map(map: &BTreeMap<i64, Gf2Matrix>, d: i64, rows: usize, cols: usize) -> Gf2Matrix {
    map.get(&d)
        .cloned()
        .unwrap_or_else(|| Gf2Matrix::zero(rows, cols))
}

fn is_iso(m: &Gf2Matrix) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}

/// Extract the four-term-periodic long exact sequence of a splitting and
/// run the pairing check.
///
/// The sequence comes from splicing two standard ones: the bottom block `P`
/// is a subcomplex of the acyclic total complex, so the connecting map of
/// `0 -> P -> total -> Q+C -> 0` identifies `H_j(Q+C)` with `H_{j-1}(P)`;
/// substituting that identification into the sequence of `C` inside `Q+C`
/// yields
///
/// ```text
///   ... -> H_j(C) -> H_{j-1}(P) -> H_j(Q) -> H_{j-1}(C) -> ...
/// ```
///
/// whose three maps restrict, on representatives, to `sigma`, the inverse
/// identification followed by projection, and `rho`.  Terms are labeled
/// `H_{j+1}(Lambda)` for the knot block, `LCH^{s-(j-1)}` for the dual chord
/// block and `LCH_j` for the chord block, `s` being the pairing degree sum.
///
/// The pairing check walks every basis class of `H_j(Q)` with nonzero image
/// in `H_{j-1}(C)` and searches the basis of `H_{s-j+1}(C)` for a class
/// `gamma` with `<sigma(gamma), alpha> = 1`, the pairing evaluated on the
/// stored representatives through the `Q`-`P` bijection.
pub fn duality_sequence(ds: &DualitySplitting) -> Result<DualitySequence> {
    let (les_pt, row1) = splitting_sequences(ds)?;

    // Names for the pieces: H(C) = row1.h_sub, H(QC) = row1.h_total,
    // H(Q) = row1.h_quot, H(P) = les_pt.h_sub.
    let rank_c = |j: i64| row1.h_sub.rank(j);
    let rank_qc = |j: i64| row1.h_total.rank(j);
    let rank_q = |j: i64| row1.h_quot.rank(j);
    let rank_p = |j: i64| les_pt.h_sub.rank(j);

    // Degree range of the spliced sequence, padded so both ends are zero.
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for (d, _) in row1.h_sub.ranks() {
        lo = lo.min(d);
        hi = hi.max(d);
    }
    for (d, _) in row1.h_quot.ranks() {
        lo = lo.min(d);
        hi = hi.max(d);
    }
    for (d, _) in les_pt.h_sub.ranks() {
        lo = lo.min(d + 1);
        hi = hi.max(d + 1);
    }

    let s = ds.degree_sum;
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    if lo <= hi {
        let mut j = hi + 1;
        while j >= lo - 1 {
            // H_j(C) -> H_{j-1}(P) -> H_j(Q), then on to H_{j-1}(C).
            terms.push(LesTerm {
                label: format!("H_{}(Lambda)", j + 1),
                dim: rank_c(j),
            });
            let iota = get_map(&row1.inclusion_induced, j, rank_qc(j), rank_c(j));
            let ident = get_map(&les_pt.connecting, j, rank_p(j - 1), rank_qc(j));
            maps.push(ident.compose(&iota)?);

            terms.push(LesTerm {
                label: format!("LCH^{}", s - (j - 1)),
                dim: rank_p(j - 1),
            });
            let pi = get_map(&row1.projection_induced, j, rank_q(j), rank_qc(j));
            maps.push(pi.compose(&ident.inverse()?)?);

            terms.push(LesTerm {
                label: format!("LCH_{j}"),
                dim: rank_q(j),
            });
            maps.push(get_map(&row1.connecting, j, rank_c(j - 1), rank_q(j)));

            j -= 1;
        }
        // The trailing map points past the last term; drop it.
        maps.pop();
    }
    let sequence = LongExactSequence::new(terms, maps)?;
    sequence.verify_exact()?;

    // Pairing verification on representatives.
    let q_cx = &row1.quot;
    let c_cx = &row1.sub;
    let mut pairing_checked = Vec::new();
    let mut pairing_failures = Vec::new();
    for (j, _) in row1.h_quot.ranks() {
        let rho_star = get_map(&row1.connecting, j, rank_c(j - 1), rank_q(j));
        for (idx, alpha) in row1.h_quot.representatives(j).iter().enumerate() {
            let image_nonzero = rho_star.entries().any(|(_, col)| col == idx);
            if !image_nonzero {
                continue;
            }
            let alpha_names: BTreeSet<String> =
                q_cx.vector_labels(j, alpha).into_iter().collect();
            let jp = s - j + 1;
            let mut found = false;
            for gamma in row1.h_sub.representatives(jp) {
                // sigma(gamma) as a set of P names.
                let mut image: BTreeSet<&String> = BTreeSet::new();
                for cname in c_cx.vector_labels(jp, gamma) {
                    if let Some(tgts) = ds.sigma.get(&cname) {
                        for t in tgts {
                            if !image.remove(t) {
                                image.insert(t);
                            }
                        }
                    }
                }
                // <sigma(gamma), alpha> through the pairing bijection.
                let mut pair = false;
                for qname in &alpha_names {
                    if image.contains(&ds.pairing[qname]) {
                        pair = !pair;
                    }
                }
                if pair {
                    found = true;
                    break;
                }
            }
            if found {
                pairing_checked.push((j, idx));
            } else {
                pairing_failures.push((j, idx));
            }
        }
    }

    let pairing_ok = pairing_failures.is_empty();
    Ok(DualitySequence {
        sequence,
        pairing_checked,
        pairing_failures,
        pairing_ok,
    })
}

/// The two standard sequences every extraction starts from: `P` inside the
/// total complex (whose quotient is `Q+C`), and `C` inside that quotient.
fn splitting_sequences(ds: &DualitySplitting) -> Result<(SubquotientLes, SubquotientLes)> {
    let les_pt = les_of_subcomplex(ds.total(), &ds.p_labels, ("P", "total", "Q+C"))?;
    let row1 = les_of_subcomplex(&les_pt.quot, &ds.c_labels, ("C", "Q+C", "Q"))?;
    Ok((les_pt, row1))
}

/// Result of checking that the comparison maps induce isomorphisms.
#[derive(Debug, Clone)]
pub struct HMapsReport {
    /// `(eta sigma): Q+C -> P` induces isomorphisms in every degree.
    pub h_iso: bool,
    /// `(rho; eta): Q -> C+P` induces isomorphisms in every degree.
    pub h_prime_iso: bool,
    /// Degrees where the first map fails to be an isomorphism.
    pub h_failures: Vec<i64>,
    /// Degrees where the second map fails.
    pub h_prime_failures: Vec<i64>,
}

impl HMapsReport {
    pub fn pass(&self) -> bool {
        self.h_iso && self.h_prime_iso
    }
}

/// Build a degree-shift `-1` chain map between two complexes from a
/// name-level description of where each source basis element goes.
fn chain_map_from_labels(
    source: &ChainComplex,
    target: &ChainComplex,
    image: impl Fn(&str) -> Option<BTreeSet<String>>,
) -> Result<ChainMap> {
    let mut components = BTreeMap::new();
    for d in source.degrees() {
        let mut m = Gf2Matrix::zero(target.dim(d - 1), source.dim(d));
        for (j, name) in source.labels(d).iter().enumerate() {
            let Some(tgts) = image(name) else { continue };
            for t in &tgts {
                let i = target.label_index(d - 1, t).ok_or_else(|| {
                    LegchError::BasisIncompatibility(format!(
                        "image {t} of {name} is not a target basis element one degree down"
                    ))
                })?;
                m.flip(i, j);
            }
        }
        if !m.is_zero() {
            components.insert(d, m);
        }
    }
    Ok(ChainMap::new(source, target, -1, components)?)
}

/// Degrees where either homology is nonzero, with the source's degree used
/// as the key (the map shifts by `-1`).
fn iso_failures(
    induced: &BTreeMap<i64, Gf2Matrix>,
    hs: &Homology,
    ht: &Homology,
) -> Vec<i64> {
    let mut degrees: BTreeSet<i64> = hs.ranks().iter().map(|&(d, _)| d).collect();
    degrees.extend(ht.ranks().iter().map(|&(d, _)| d + 1));
    degrees
        .into_iter()
        .filter(|&d| {
            let m = get_map(induced, d, ht.rank(d - 1), hs.rank(d));
            !is_iso(&m)
        })
        .collect()
}

/// Check that the comparison maps built from the off-diagonal blocks induce
/// isomorphisms on homology.
///
/// `(eta sigma)` maps the quotient `Q+C` to the subcomplex `P`, and
/// `(rho; eta)` maps the quotient `Q` to the subcomplex `C+P`; both shift
/// degree by one down and are chain maps whenever the total differential
/// squares to zero.  Per degree, the induced map must be square and of full
/// rank.  The total complex is re-checked for acyclicity first and refused
/// otherwise, since both statements are meaningless without it.
pub fn h_maps_iso_check(ds: &DualitySplitting) -> Result<HMapsReport> {
    let total = ds.total();
    let h_total = total.homology();
    if h_total.total_rank() != 0 {
        let (d, _) = h_total.ranks()[0];
        return Err(LegchError::DualityNotAcyclic(d));
    }

    let (qc_cx, _) = total.quotient_by(&ds.p_labels)?;
    let (p_cx, _) = total.span_subcomplex(&ds.p_labels)?;
    let h = chain_map_from_labels(&qc_cx, &p_cx, |name| {
        if ds.q_labels.contains(name) {
            ds.eta.get(name).cloned()
        } else {
            ds.sigma.get(name).cloned()
        }
    })?;
    let h_qc = qc_cx.homology();
    let h_p = p_cx.homology();
    let h_failures = iso_failures(&h.induced_on_homology(&h_qc, &h_p)?, &h_qc, &h_p);

    let cp = ds.cp_labels();
    let (q_cx, _) = total.quotient_by(&cp)?;
    let (cp_cx, _) = total.span_subcomplex(&cp)?;
    let h_prime = chain_map_from_labels(&q_cx, &cp_cx, |name| {
        let mut out = BTreeSet::new();
        if let Some(ts) = ds.rho.get(name) {
            out.extend(ts.iter().cloned());
        }
        if let Some(ts) = ds.eta.get(name) {
            out.extend(ts.iter().cloned());
        }
        if out.is_empty() {
            None
        } else {
            Some(out)
        }
    })?;
    let h_q = q_cx.homology();
    let h_cp = cp_cx.homology();
    let h_prime_failures =
        iso_failures(&h_prime.induced_on_homology(&h_q, &h_cp)?, &h_q, &h_cp);

    Ok(HMapsReport {
        h_iso: h_failures.is_empty(),
        h_prime_iso: h_prime_failures.is_empty(),
        h_failures,
        h_prime_failures,
    })
}

/// Optional name-level maps refining the cross-complex square checks.
#[derive(Debug, Clone, Default)]
pub struct DiagramMaps {
    /// Vertical from the short-chord Morse basis to the splitting's Morse
    /// block at reflected degrees.  Defaults to the name-identity, which is
    /// refused if a name is missing at the reflected degree.
    pub vert: Option<LabelMap>,
    /// Vertical from the two-copy quotient basis to the `P` block.
    /// Defaults to the zero map.
    pub delta: Option<LabelMap>,
    /// Vertical from the intersection-point basis to the `C+P` subcomplex.
    /// Defaults to the zero map.
    pub delta_prime: Option<LabelMap>,
    /// Replacement for the comparison map `(eta sigma)` in the splitting's
    /// own squares.  Defaults to the off-diagonal blocks of the splitting.
    pub h: Option<LabelMap>,
}

/// Outcome of the commuting-square checks.
#[derive(Debug, Clone)]
pub struct DiagramReport {
    /// One entry per square: first the three squares internal to the
    /// splitting (inclusion, projection, connecting), then the three squares
    /// against the two-copy sequence in the same order; `true` means the
    /// square commutes on homology.
    pub squares: Vec<(String, bool)>,
    /// Diagnostic: whether each vertical map is an isomorphism in every
    /// occupied degree.
    pub verticals: Vec<(String, bool)>,
    pub pass: bool,
}

/// Induced homology-level matrix of a name-level map between fixed degrees
/// of two complexes.  Every representative of the source must map to a
/// cycle of the target.
fn induced_between(
    src_cx: &ChainComplex,
    src_h: &Homology,
    src_deg: i64,
    tgt_cx: &ChainComplex,
    tgt_h: &Homology,
    tgt_deg: i64,
    image: &mut impl FnMut(&str) -> Result<BTreeSet<String>>,
) -> Result<Gf2Matrix> {
    let mut m = Gf2Matrix::zero(tgt_h.rank(tgt_deg), src_h.rank(src_deg));
    for (j, rep) in src_h.representatives(src_deg).iter().enumerate() {
        let mut names: BTreeSet<String> = BTreeSet::new();
        for l in src_cx.vector_labels(src_deg, rep) {
            for t in image(&l)? {
                if !names.remove(&t) {
                    names.insert(t);
                }
            }
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let v = tgt_cx.vector(tgt_deg, &refs).map_err(|_| {
            LegchError::BasisIncompatibility(format!(
                "vertical image of a degree-{src_deg} class leaves degree {tgt_deg}"
            ))
        })?;
        let coords = tgt_h.express(tgt_deg, &v).ok_or_else(|| {
            LegchError::BasisIncompatibility(format!(
                "vertical image of a degree-{src_deg} class is not a cycle class"
            ))
        })?;
        for i in coords.ones() {
            m.flip(i, j);
        }
    }
    Ok(m)
}

/// Check the commuting squares relating a splitting to the two-copy complex
/// of the same knot.  All squares are compared after passing to homology.
///
/// The first three squares live inside the splitting: the rows are the
/// sequences of `C` inside `Q+C` and of `P` inside `C+P`, the verticals the
/// identity on the Morse block, the comparison map `(eta sigma)` (or the
/// supplied replacement) and `(rho; eta)`:
///
/// ```text
///   H_j(C) --> H_j(Q+C) --> H_j(Q) --> H_{j-1}(C)
///     |id        |H           |H'          |id
///   H_j(C) --> H_{j-1}(P) --> H_{j-1}(C+P) --> H_{j-1}(C)
/// ```
///
/// The last three squares compare the sequence of the short-chord block
/// inside the chord-truncated two-copy complex (degree-raising, upper row)
/// with the sequence of `P` inside `C+P` (degree-lowering, lower row).  The
/// two gradings are aligned by reflecting through the pairing degree sum
/// `s`: upper degree `u` corresponds to lower degree `s - u`.  The three
/// verticals are the supplied short-to-Morse map (name-identity by
/// default), `delta` and `delta_prime`.
pub fn corollary_diagram_check(
    ds: &DualitySplitting,
    tc: &TwoCopyComplex,
    maps: &DiagramMaps,
) -> Result<DiagramReport> {
    let total = ds.total();
    let (les_pt, row1) = splitting_sequences(ds)?;
    let cp = ds.cp_labels();
    let (cp_cx, _) = total.span_subcomplex(&cp)?;
    let row2 = les_of_subcomplex(&cp_cx, &ds.p_labels, ("P", "C+P", "C"))?;

    // The Morse block appears as a subcomplex in the first row and as a
    // quotient in the second; both must literally agree for the identity
    // verticals to make sense.
    if row1.sub != row2.quot {
        return Err(LegchError::BasisIncompatibility(
            "the Morse block differs between its subcomplex and quotient forms".to_string(),
        ));
    }

    let rank_c = |j: i64| row1.h_sub.rank(j);
    let rank_qc = |j: i64| row1.h_total.rank(j);
    let rank_q = |j: i64| row1.h_quot.rank(j);
    let rank_p = |j: i64| row2.h_sub.rank(j);
    let rank_cp = |j: i64| row2.h_total.rank(j);

    // Comparison maps as chain maps; `h` may be replaced by the caller.
    let h_chain = chain_map_from_labels(&les_pt.quot, &row2.sub, |name| {
        if let Some(user) = &maps.h {
            user.get(name).cloned()
        } else if ds.q_labels.contains(name) {
            ds.eta.get(name).cloned()
        } else {
            ds.sigma.get(name).cloned()
        }
    })?;
    let h_ind = h_chain.induced_on_homology(&row1.h_total, &row2.h_sub)?;
    let h_prime_chain = chain_map_from_labels(&row1.quot, &cp_cx, |name| {
        let mut out = BTreeSet::new();
        if let Some(ts) = ds.rho.get(name) {
            out.extend(ts.iter().cloned());
        }
        if let Some(ts) = ds.eta.get(name) {
            out.extend(ts.iter().cloned());
        }
        if out.is_empty() {
            None
        } else {
            Some(out)
        }
    })?;
    let h_prime_ind = h_prime_chain.induced_on_homology(&row1.h_quot, &row2.h_total)?;

    // Splitting-internal squares, all degrees with content.
    let mut degrees: BTreeSet<i64> = BTreeSet::new();
    for h in [&row1.h_sub, &row1.h_total, &row1.h_quot] {
        degrees.extend(h.ranks().iter().map(|&(d, _)| d));
    }
    for h in [&row2.h_sub, &row2.h_total] {
        degrees.extend(h.ranks().iter().map(|&(d, _)| d + 1));
    }
    let mut sq_split = [true, true, true];
    for &j in &degrees {
        let iota1 = get_map(&row1.inclusion_induced, j, rank_qc(j), rank_c(j));
        let pi1 = get_map(&row1.projection_induced, j, rank_q(j), rank_qc(j));
        let con1 = get_map(&row1.connecting, j, rank_c(j - 1), rank_q(j));
        let iota2 = get_map(&row2.inclusion_induced, j - 1, rank_cp(j - 1), rank_p(j - 1));
        let pi2 = get_map(&row2.projection_induced, j - 1, rank_c(j - 1), rank_cp(j - 1));
        let con2 = get_map(&row2.connecting, j, rank_p(j - 1), rank_c(j));
        let h_j = get_map(&h_ind, j, rank_p(j - 1), rank_qc(j));
        let hp_j = get_map(&h_prime_ind, j, rank_cp(j - 1), rank_q(j));

        sq_split[0] &= h_j.compose(&iota1)? == con2;
        sq_split[1] &= iota2.compose(&h_j)? == hp_j.compose(&pi1)?;
        sq_split[2] &= pi2.compose(&hp_j)? == con1;
    }

    // Two-copy side: the sequence of short chords inside the complex with
    // the long chords collapsed.
    let tc_total = tc.total();
    let (hat, _) = tc_total.quotient_by(tc.long_labels())?;
    let row_a = les_of_subcomplex(&hat, tc.short_labels(), ("I", "hat", "F"))?;

    let s = ds.degree_sum;
    let c_cx = &row1.sub;
    let p_cx = &row2.sub;

    // Vertical builders; closures so each degree can pick the right target.
    let vert_at = |u: i64, tgt_deg: i64| -> Result<Gf2Matrix> {
        let mut image = |name: &str| -> Result<BTreeSet<String>> {
            match &maps.vert {
                Some(m) => Ok(m.get(name).cloned().unwrap_or_default()),
                None => {
                    if c_cx.label_index(tgt_deg, name).is_some() {
                        Ok(BTreeSet::from([name.to_string()]))
                    } else {
                        Err(LegchError::BasisIncompatibility(format!(
                            "no Morse-block counterpart for {name} at degree {tgt_deg}"
                        )))
                    }
                }
            }
        };
        induced_between(
            &row_a.sub,
            &row_a.h_sub,
            u,
            c_cx,
            &row1.h_sub,
            tgt_deg,
            &mut image,
        )
    };
    let delta_at = |u: i64, tgt_deg: i64| -> Result<Gf2Matrix> {
        let mut image = |name: &str| -> Result<BTreeSet<String>> {
            Ok(maps
                .delta
                .as_ref()
                .and_then(|m| m.get(name).cloned())
                .unwrap_or_default())
        };
        induced_between(&hat, &row_a.h_total, u, p_cx, &row2.h_sub, tgt_deg, &mut image)
    };
    let delta_prime_at = |u: i64, tgt_deg: i64| -> Result<Gf2Matrix> {
        let mut image = |name: &str| -> Result<BTreeSet<String>> {
            Ok(maps
                .delta_prime
                .as_ref()
                .and_then(|m| m.get(name).cloned())
                .unwrap_or_default())
        };
        induced_between(
            &row_a.quot,
            &row_a.h_quot,
            u,
            &cp_cx,
            &row2.h_total,
            tgt_deg,
            &mut image,
        )
    };

    // Degrees `u` on the two-copy side with content on either side of the
    // reflection.
    let mut upper: BTreeSet<i64> = BTreeSet::new();
    for h in [&row_a.h_sub, &row_a.h_total, &row_a.h_quot] {
        upper.extend(h.ranks().iter().map(|&(d, _)| d));
    }
    upper.extend(row1.h_sub.ranks().iter().map(|&(d, _)| s - d));
    upper.extend(row2.h_sub.ranks().iter().map(|&(d, _)| s - 1 - d));
    upper.extend(row2.h_total.ranks().iter().map(|&(d, _)| s - 1 - d));

    let mut sq_tc = [true, true, true];
    let mut v1_iso = true;
    let mut v2_iso = true;
    let mut v3_iso = true;
    for &u in &upper {
        let phi = s - u;
        let v1 = vert_at(u, phi)?;
        let v1_next = vert_at(u + 1, phi - 1)?;
        let v2 = delta_at(u, phi - 1)?;
        let v3 = delta_prime_at(u, phi - 1)?;

        let i_a = get_map(
            &row_a.inclusion_induced,
            u,
            row_a.h_total.rank(u),
            row_a.h_sub.rank(u),
        );
        let pi_a = get_map(
            &row_a.projection_induced,
            u,
            row_a.h_quot.rank(u),
            row_a.h_total.rank(u),
        );
        let con_a = get_map(
            &row_a.connecting,
            u,
            row_a.h_sub.rank(u + 1),
            row_a.h_quot.rank(u),
        );
        let con_b = get_map(&row2.connecting, phi, rank_p(phi - 1), rank_c(phi));
        let i_b = get_map(
            &row2.inclusion_induced,
            phi - 1,
            rank_cp(phi - 1),
            rank_p(phi - 1),
        );
        let pi_b = get_map(
            &row2.projection_induced,
            phi - 1,
            rank_c(phi - 1),
            rank_cp(phi - 1),
        );

        sq_tc[0] &= v2.compose(&i_a)? == con_b.compose(&v1)?;
        sq_tc[1] &= v3.compose(&pi_a)? == i_b.compose(&v2)?;
        sq_tc[2] &= v1_next.compose(&con_a)? == pi_b.compose(&v3)?;

        v1_iso &= is_iso(&v1);
        v2_iso &= is_iso(&v2);
        v3_iso &= is_iso(&v3);
    }

    // Isomorphism diagnostics for the splitting-internal verticals.
    let h_iso = iso_failures(&h_ind, &row1.h_total, &row2.h_sub).is_empty();
    let hp_iso = iso_failures(&h_prime_ind, &row1.h_quot, &row2.h_total).is_empty();

    let squares: Vec<(String, bool)> = [
        ("splitting inclusion square", sq_split[0]),
        ("splitting projection square", sq_split[1]),
        ("splitting connecting square", sq_split[2]),
        ("two-copy inclusion square", sq_tc[0]),
        ("two-copy projection square", sq_tc[1]),
        ("two-copy connecting square", sq_tc[2]),
    ]
    .into_iter()
    .map(|(n, b)| (n.to_string(), b))
    .collect();
    let pass = squares.iter().all(|(_, b)| *b);
    let verticals = vec![
        ("morse identity".to_string(), true),
        ("comparison map".to_string(), h_iso),
        ("second comparison map".to_string(), hp_iso),
        ("short-to-morse".to_string(), v1_iso),
        ("truncated-to-dual".to_string(), v2_iso),
        ("points-to-lower".to_string(), v3_iso),
    ];

    Ok(DiagramReport {
        squares,
        verticals,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aug::{linearized_complex, Augmentation};
    use crate::dga::{DgaPresentation, Generator, Gf2Sum};
    use crate::two_copy::{assemble_two_copy, ConnectingData};
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn down(gens: &[(&str, i64)], bnd: &[(&str, &[&str])]) -> ChainComplex {
        let mut b = ChainComplex::builder(Direction::Down);
        for (name, d) in gens {
            b = b.generator(*d, name);
        }
        for (src, tgts) in bnd {
            b = b.boundary(src, tgts);
        }
        b.build().unwrap()
    }

    fn up(gens: &[(&str, i64)], bnd: &[(&str, &[&str])]) -> ChainComplex {
        let mut b = ChainComplex::builder(Direction::Up);
        for (name, d) in gens {
            b = b.generator(*d, name);
        }
        for (src, tgts) in bnd {
            b = b.boundary(src, tgts);
        }
        b.build().unwrap()
    }

    fn labels(map: &[(&str, &[&str])]) -> LabelMap {
        map.iter()
            .map(|(s, ts)| {
                (
                    s.to_string(),
                    ts.iter().map(|t| t.to_string()).collect::<BTreeSet<_>>(),
                )
            })
            .collect()
    }

    fn pairing(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(q, p)| (q.to_string(), p.to_string()))
            .collect()
    }

    fn unknot_dga() -> DgaPresentation {
        let gens = vec![Generator::pure("a", 1, r(1, 2))];
        DgaPresentation::new(2, gens, BTreeMap::new()).unwrap()
    }

    /// One chord of degree 1 over the circle: Q = {a}, C = {m, e},
    /// P = {pa}, glued by rho(a) = m and sigma(e) = pa.
    fn circle_splitting() -> DualitySplitting {
        let lin = linearized_complex(&unknot_dga(), &Augmentation::zero()).unwrap();
        let q = down(&[("a", 1)], &[]);
        let c = MorseComplexData::new(MorseRole::Lambda, down(&[("m", 0), ("e", -1)], &[]))
            .unwrap();
        let p = down(&[("pa", -2)], &[]);
        assemble_duality(
            &lin,
            &q,
            &c,
            &p,
            &pairing(&[("a", "pa")]),
            &labels(&[("a", &["m"])]),
            &labels(&[("e", &["pa"])]),
            &labels(&[]),
        )
        .unwrap()
    }

    fn barbell_dga() -> DgaPresentation {
        let gens = vec![
            Generator::pure("a", 1, r(1, 2)),
            Generator::pure("b", 0, r(1, 4)),
            Generator::pure("c", -1, r(1, 8)),
        ];
        let mut diffs = BTreeMap::new();
        diffs.insert("b".to_string(), Gf2Sum::word(vec!["c".to_string()]));
        DgaPresentation::new(2, gens, diffs).unwrap()
    }

    fn barbell_blocks() -> (ChainComplex, ChainComplex, MorseComplexData, ChainComplex) {
        let lin = linearized_complex(&barbell_dga(), &Augmentation::zero()).unwrap();
        let q = down(&[("a", 1), ("b", 0), ("c", -1)], &[("b", &["c"])]);
        let c = MorseComplexData::new(MorseRole::Lambda, down(&[("m", 0), ("e", -1)], &[]))
            .unwrap();
        let p = down(
            &[("pc", 0), ("pb", -1), ("pa", -2)],
            &[("pc", &["pb"])],
        );
        (lin, q, c, p)
    }

    /// Three chords with one linear cancellation: the bottom block picks up
    /// the transposed differential pc -> pb.
    fn barbell_splitting() -> DualitySplitting {
        let (lin, q, c, p) = barbell_blocks();
        assemble_duality(
            &lin,
            &q,
            &c,
            &p,
            &pairing(&[("a", "pa"), ("b", "pb"), ("c", "pc")]),
            &labels(&[("a", &["m"])]),
            &labels(&[("e", &["pa"])]),
            &labels(&[]),
        )
        .unwrap()
    }

    fn circle_two_copy() -> TwoCopyComplex {
        let dga = unknot_dga();
        let lambda = MorseComplexData::new(MorseRole::Lambda, up(&[("m", 0), ("e", -1)], &[]))
            .unwrap();
        let filling =
            MorseComplexData::new(MorseRole::Filling, up(&[("p", -2)], &[])).unwrap();
        let conn = ConnectingData {
            short_to_long: labels(&[("m", &["a"])]),
            point_to_chord: labels(&[("p", &["e"])]),
        };
        assemble_two_copy(
            &dga,
            &Augmentation::zero(),
            &BTreeSet::from(["a".to_string()]),
            &lambda,
            &filling,
            &conn,
        )
        .unwrap()
    }

    fn barbell_two_copy() -> TwoCopyComplex {
        let dga = barbell_dga();
        let lambda = MorseComplexData::new(MorseRole::Lambda, up(&[("m", 0), ("e", -1)], &[]))
            .unwrap();
        let filling =
            MorseComplexData::new(MorseRole::Filling, up(&[("p", -2)], &[])).unwrap();
        let conn = ConnectingData {
            short_to_long: labels(&[("m", &["a"])]),
            point_to_chord: labels(&[("p", &["e"])]),
        };
        let tags: BTreeSet<String> =
            ["a", "b", "c"].into_iter().map(String::from).collect();
        assemble_two_copy(&dga, &Augmentation::zero(), &tags, &lambda, &filling, &conn)
            .unwrap()
    }

    fn diagram_maps() -> DiagramMaps {
        DiagramMaps {
            vert: Some(labels(&[("m", &["e"]), ("e", &["m"])])),
            delta: Some(labels(&[("m", &["pa"])])),
            delta_prime: Some(labels(&[("p", &["m"])])),
            h: None,
        }
    }

    #[test]
    fn circle_splitting_assembles() {
        let ds = circle_splitting();
        assert_eq!(ds.degree_sum(), -1);
        assert_eq!(ds.q_labels().len(), 1);
        assert_eq!(ds.c_labels().len(), 2);
        assert_eq!(ds.p_labels().len(), 1);
        assert_eq!(ds.total().total_dim(), 4);
    }

    #[test]
    fn circle_sequence_is_exact_and_paired() {
        let seq = duality_sequence(&circle_splitting()).unwrap();
        assert!(seq.pairing_ok);
        assert_eq!(seq.pairing_checked, vec![(1, 0)]);
        let dims: BTreeMap<String, usize> = seq
            .sequence
            .terms()
            .iter()
            .map(|t| (t.label.clone(), t.dim))
            .collect();
        assert_eq!(dims.get("H_1(Lambda)"), Some(&1));
        assert_eq!(dims.get("H_0(Lambda)"), Some(&1));
        assert_eq!(dims.get("LCH_1"), Some(&1));
        assert_eq!(dims.get("LCH^1"), Some(&1));
        assert_eq!(dims.get("LCH_0"), Some(&0));
    }

    #[test]
    fn barbell_sequence_cancels_to_circle_ranks() {
        let seq = duality_sequence(&barbell_splitting()).unwrap();
        assert!(seq.pairing_ok);
        assert_eq!(seq.pairing_checked, vec![(1, 0)]);
        let dims: BTreeMap<String, usize> = seq
            .sequence
            .terms()
            .iter()
            .map(|t| (t.label.clone(), t.dim))
            .collect();
        // The b/c pair and its dual cancel; only the circle-sized ranks
        // survive.
        assert_eq!(dims.get("LCH_1"), Some(&1));
        assert_eq!(dims.get("LCH_0"), Some(&0));
        assert_eq!(dims.get("LCH^1"), Some(&1));
        assert_eq!(dims.get("LCH^0"), Some(&0));
        assert_eq!(dims.get("H_1(Lambda)"), Some(&1));
        assert_eq!(dims.get("H_0(Lambda)"), Some(&1));
    }

    #[test]
    fn pairing_with_inconstant_degree_sum_is_refused() {
        let (lin, q, c, p) = barbell_blocks();
        let err = assemble_duality(
            &lin,
            &q,
            &c,
            &p,
            &pairing(&[("a", "pa"), ("b", "pc"), ("c", "pb")]),
            &labels(&[("a", &["m"])]),
            &labels(&[("e", &["pa"])]),
            &labels(&[]),
        )
        .unwrap_err();
        assert!(matches!(err, LegchError::DualityPairMismatch(_)));
    }

    #[test]
    fn bottom_block_must_transpose_top_block() {
        let (lin, q, c, _) = barbell_blocks();
        // Forget the transposed arrow pc -> pb.
        let p = down(&[("pc", 0), ("pb", -1), ("pa", -2)], &[]);
        let err = assemble_duality(
            &lin,
            &q,
            &c,
            &p,
            &pairing(&[("a", "pa"), ("b", "pb"), ("c", "pc")]),
            &labels(&[("a", &["m"])]),
            &labels(&[("e", &["pa"])]),
            &labels(&[]),
        )
        .unwrap_err();
        assert!(matches!(err, LegchError::DualityPairMismatch(_)));
    }

    #[test]
    fn square_violation_reports_source_degree() {
        let (lin, q, c, p) = barbell_blocks();
        // sigma(m) = pb makes d(d(a)) = sigma(rho(a)) = pb nonzero.
        let err = assemble_duality(
            &lin,
            &q,
            &c,
            &p,
            &pairing(&[("a", "pa"), ("b", "pb"), ("c", "pc")]),
            &labels(&[("a", &["m"])]),
            &labels(&[("e", &["pa"]), ("m", &["pb"])]),
            &labels(&[]),
        )
        .unwrap_err();
        assert!(matches!(err, LegchError::DualitySquare(1)));
    }

    #[test]
    fn top_block_must_match_linearized_complex() {
        let lin = linearized_complex(&unknot_dga(), &Augmentation::zero()).unwrap();
        let q = down(&[("a", 2)], &[]);
        let c = MorseComplexData::new(MorseRole::Lambda, down(&[("m", 0), ("e", -1)], &[]))
            .unwrap();
        let p = down(&[("pa", -3)], &[]);
        let err = assemble_duality(
            &lin,
            &q,
            &c,
            &p,
            &pairing(&[("a", "pa")]),
            &labels(&[]),
            &labels(&[]),
            &labels(&[]),
        )
        .unwrap_err();
        assert!(matches!(err, LegchError::DualityQMismatch(_)));
    }

    /// A splitting whose acyclicity hinges on the corner block: dropping
    /// eta leaves two basis elements unmatched.
    fn corner_glued(eta_on: bool) -> Result<DualitySplitting> {
        let gens = vec![
            Generator::pure("q1", 1, r(1, 2)),
            Generator::pure("q0", 0, r(1, 4)),
        ];
        let dga = DgaPresentation::new(2, gens, BTreeMap::new()).unwrap();
        let lin = linearized_complex(&dga, &Augmentation::zero()).unwrap();
        let q = down(&[("q1", 1), ("q0", 0)], &[]);
        let c = MorseComplexData::new(
            MorseRole::Lambda,
            down(&[("c0", 0), ("cm", -1)], &[]),
        )
        .unwrap();
        let p = down(&[("p0", -1), ("p1", -2)], &[]);
        let eta = if eta_on {
            labels(&[("q0", &["p0"])])
        } else {
            labels(&[])
        };
        assemble_duality(
            &lin,
            &q,
            &c,
            &p,
            &pairing(&[("q1", "p1"), ("q0", "p0")]),
            &labels(&[("q1", &["c0"])]),
            &labels(&[("cm", &["p1"])]),
            &eta,
        )
    }

    #[test]
    fn missing_corner_glue_is_refused_as_not_acyclic() {
        assert!(corner_glued(true).is_ok());
        let err = corner_glued(false).unwrap_err();
        assert!(matches!(err, LegchError::DualityNotAcyclic(-1)));
    }

    #[test]
    fn comparison_maps_are_isomorphisms() {
        for ds in [circle_splitting(), barbell_splitting(), corner_glued(true).unwrap()] {
            let report = h_maps_iso_check(&ds).unwrap();
            assert!(report.pass(), "failed for {:?}", report);
        }
    }

    #[test]
    fn corner_glued_sequence_is_exact() {
        let seq = duality_sequence(&corner_glued(true).unwrap()).unwrap();
        assert!(seq.pairing_ok);
    }

    #[test]
    fn unglued_pair_of_pairs_is_degenerate_but_consistent() {
        // Q and P each cancel internally; C is empty and all glue is zero.
        let gens = vec![
            Generator::pure("q1", 1, r(1, 2)),
            Generator::pure("q0", 0, r(1, 4)),
        ];
        let mut diffs = BTreeMap::new();
        diffs.insert("q1".to_string(), Gf2Sum::word(vec!["q0".to_string()]));
        let dga = DgaPresentation::new(2, gens, diffs).unwrap();
        let lin = linearized_complex(&dga, &Augmentation::zero()).unwrap();
        let q = down(&[("q1", 1), ("q0", 0)], &[("q1", &["q0"])]);
        let c = MorseComplexData::new(MorseRole::Lambda, down(&[], &[])).unwrap();
        let p = down(&[("p0", -1), ("p1", -2)], &[("p0", &["p1"])]);
        let ds = assemble_duality(
            &lin,
            &q,
            &c,
            &p,
            &pairing(&[("q1", "p1"), ("q0", "p0")]),
            &labels(&[]),
            &labels(&[]),
            &labels(&[]),
        )
        .unwrap();
        let seq = duality_sequence(&ds).unwrap();
        assert!(seq.pairing_ok);
        assert!(seq.pairing_checked.is_empty());
        assert!(seq.sequence.terms().iter().all(|t| t.dim == 0));
        let report = h_maps_iso_check(&ds).unwrap();
        assert!(report.pass());
    }

    #[test]
    fn diagram_squares_commute_for_circle() {
        let report =
            corollary_diagram_check(&circle_splitting(), &circle_two_copy(), &diagram_maps())
                .unwrap();
        assert!(report.pass, "{:?}", report);
        assert!(report.verticals.iter().all(|(_, iso)| *iso), "{:?}", report);
    }

    #[test]
    fn diagram_squares_commute_for_barbell() {
        let report =
            corollary_diagram_check(&barbell_splitting(), &barbell_two_copy(), &diagram_maps())
                .unwrap();
        assert!(report.pass, "{:?}", report);
        assert!(report.verticals.iter().all(|(_, iso)| *iso), "{:?}", report);
    }

    #[test]
    fn default_vertical_requires_matching_names_at_reflected_degree() {
        let maps = DiagramMaps {
            vert: None,
            ..diagram_maps()
        };
        let err = corollary_diagram_check(&circle_splitting(), &circle_two_copy(), &maps)
            .unwrap_err();
        assert!(matches!(err, LegchError::BasisIncompatibility(_)));
    }

    #[test]
    fn chain_level_perturbation_still_commutes_on_homology() {
        // Perturb delta by a null-homotopic correction: e maps to pb, which
        // changes the chain-level map but no induced homology matrix.
        let mut maps = diagram_maps();
        maps.delta = Some(labels(&[("m", &["pa"]), ("e", &["pb"])]));
        let plain =
            corollary_diagram_check(&barbell_splitting(), &barbell_two_copy(), &diagram_maps())
                .unwrap();
        let perturbed =
            corollary_diagram_check(&barbell_splitting(), &barbell_two_copy(), &maps).unwrap();
        assert!(plain.pass && perturbed.pass);
        assert_eq!(plain.squares, perturbed.squares);
    }

    #[test]
    fn malformed_comparison_override_is_refused() {
        let maps = DiagramMaps {
            h: Some(labels(&[("a", &["pa"])])),
            ..diagram_maps()
        };
        let err = corollary_diagram_check(&circle_splitting(), &circle_two_copy(), &maps)
            .unwrap_err();
        assert!(matches!(err, LegchError::BasisIncompatibility(_)));
    }

    #[test]
    fn morse_direction_is_checked_per_consumer() {
        // A degree-lowering Morse complex is fine here but refused by the
        // two-copy assembly.
        let dga = unknot_dga();
        let lambda_down =
            MorseComplexData::new(MorseRole::Lambda, down(&[("m", 0), ("e", -1)], &[]))
                .unwrap();
        let filling =
            MorseComplexData::new(MorseRole::Filling, up(&[("p", -2)], &[])).unwrap();
        let err = assemble_two_copy(
            &dga,
            &Augmentation::zero(),
            &BTreeSet::from(["a".to_string()]),
            &lambda_down,
            &filling,
            &ConnectingData::default(),
        )
        .unwrap_err();
        assert!(matches!(err, LegchError::Precondition(_)));
    }
}
