//! Long exact sequences of homology groups.
//!
//! A [`LongExactSequence`] is a finite run of GF(2) vector spaces and maps,
//! checked for exactness at every position (the run is treated as padded by
//! zero spaces on both ends).  [`les_of_subcomplex`] assembles the standard
//! sequence of a subcomplex inclusion, including the connecting maps obtained
//! by lifting quotient cycles.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::BitVec;
use crate::complex::{ChainComplex, Direction, Homology};
use crate::error::Gf2Error;
use crate::map::ChainMap;
use crate::matrix::Gf2Matrix;

/// One space in an exact sequence: a display label plus its dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesTerm {
    pub label: String,
    pub dim: usize,
}

/// A finite sequence of spaces and maps, exact everywhere once padded with
/// zeros on both ends.
#[derive(Debug, Clone)]
pub struct LongExactSequence {
    terms: Vec<LesTerm>,
    maps: Vec<Gf2Matrix>,
}

impl LongExactSequence {
    /// Validate shapes only; exactness is a separate, explicit check.
    pub fn new(terms: Vec<LesTerm>, maps: Vec<Gf2Matrix>) -> Result<Self, Gf2Error> {
        if !terms.is_empty() && maps.len() + 1 != terms.len() {
            return Err(Gf2Error::Dimension(format!(
                "{} terms need {} maps, got {}",
                terms.len(),
                terms.len() - 1,
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.cols() != terms[i].dim || m.rows() != terms[i + 1].dim {
                return Err(Gf2Error::Dimension(format!(
                    "map {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    terms[i + 1].dim,
                    terms[i].dim
                )));
            }
        }
        Ok(LongExactSequence { terms, maps })
    }

    pub fn terms(&self) -> &[LesTerm] {
        &self.terms
    }

    pub fn maps(&self) -> &[Gf2Matrix] {
        &self.maps
    }

    /// Same maps under new display labels.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self, Gf2Error> {
        if labels.len() != self.terms.len() {
            return Err(Gf2Error::Dimension(format!(
                "{} labels for {} terms",
                labels.len(),
                self.terms.len()
            )));
        }
        let terms = labels
            .into_iter()
            .zip(&self.terms)
            .map(|(label, t)| LesTerm {
                label,
                dim: t.dim,
            })
            .collect();
        Ok(LongExactSequence {
            terms,
            maps: self.maps.clone(),
        })
    }

    /// Check exactness at every term: consecutive maps compose to zero and
    /// image rank plus kernel corank fill each middle space.  The first and
    /// last term are checked against zero maps outside the run.
    pub fn verify_exact(&self) -> Result<(), Gf2Error> {
        for i in 0..self.maps.len().saturating_sub(1) {
            let comp = self.maps[i + 1].compose(&self.maps[i])?;
            if !comp.is_zero() {
                return Err(Gf2Error::NotExact {
                    position: i + 1,
                    label: self.terms[i + 1].label.clone(),
                    im_rank: self.maps[i].rank(),
                    ker_rank: self.maps[i + 1].cols() - self.maps[i + 1].rank(),
                });
            }
        }
        for (i, term) in self.terms.iter().enumerate() {
            let im_rank = if i == 0 { 0 } else { self.maps[i - 1].rank() };
            let ker_rank = if i + 1 == self.terms.len() {
                term.dim
            } else {
                term.dim - self.maps[i].rank()
            };
            if im_rank != ker_rank {
                return Err(Gf2Error::NotExact {
                    position: i,
                    label: term.label.clone(),
                    im_rank,
                    ker_rank,
                });
            }
        }
        Ok(())
    }
}

/// Everything produced by cutting a complex along a subcomplex: the pieces,
/// their homologies, the induced and connecting maps, and the assembled
/// exact sequence.
#[derive(Debug, Clone)]
pub struct SubquotientLes {
    pub sub: ChainComplex,
    pub quot: ChainComplex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
    pub h_sub: Homology,
    pub h_total: Homology,
    pub h_quot: Homology,
    /// Induced map of the inclusion, keyed by degree.
    pub inclusion_induced: BTreeMap<i64, Gf2Matrix>,
    /// Induced map of the projection, keyed by degree.
    pub projection_induced: BTreeMap<i64, Gf2Matrix>,
    /// Connecting map `H_d(quot) -> H_{d+offset}(sub)`, keyed by `d`.
    pub connecting: BTreeMap<i64, Gf2Matrix>,
    pub les: LongExactSequence,
}

/// Build the homology sequence of `span(selected)` inside `total`.
///
/// `names.0/.1/.2` are display names for the sub, total and quotient pieces
/// in sequence labels.
pub fn les_of_subcomplex(
    total: &ChainComplex,
    selected: &BTreeSet<String>,
    names: (&str, &str, &str),
) -> Result<SubquotientLes, Gf2Error> {
    let off = total.direction().offset();
    let (sub, sub_pos) = total.span_subcomplex(selected)?;
    let (quot, quot_pos) = total.quotient_by(selected)?;

    // Inclusion and projection as explicit chain maps.
    let mut incl_components = BTreeMap::new();
    for (&d, pos) in &sub_pos {
        let mut m = Gf2Matrix::zero(total.dim(d), pos.len());
        for (j, &p) in pos.iter().enumerate() {
            m.flip(p, j);
        }
        incl_components.insert(d, m);
    }
    let inclusion = ChainMap::new(&sub, total, 0, incl_components)?;
    let mut proj_components = BTreeMap::new();
    for (&d, pos) in &quot_pos {
        let mut m = Gf2Matrix::zero(pos.len(), total.dim(d));
        for (j, &p) in pos.iter().enumerate() {
            m.flip(j, p);
        }
        proj_components.insert(d, m);
    }
    let projection = ChainMap::new(total, &quot, 0, proj_components)?;

    let h_sub = sub.homology();
    let h_total = total.homology();
    let h_quot = quot.homology();
    let inclusion_induced = inclusion.induced_on_homology(&h_sub, &h_total)?;
    let projection_induced = projection.induced_on_homology(&h_total, &h_quot)?;

    // Connecting map: lift a quotient cycle, differentiate in the ambient
    // complex, land in the subcomplex, read off the homology class.
    let mut degrees: BTreeSet<i64> = BTreeSet::new();
    for cx in [&sub, total, &quot] {
        degrees.extend(cx.degrees());
    }
    let mut connecting = BTreeMap::new();
    for &d in &degrees {
        let cols = h_quot.rank(d);
        let rows = h_sub.rank(d + off);
        if cols == 0 && rows == 0 {
            continue;
        }
        let mut m = Gf2Matrix::zero(rows, cols);
        let empty = Vec::new();
        let tgt_pos = sub_pos.get(&(d + off)).unwrap_or(&empty);
        for (j, rep) in h_quot.representatives(d).iter().enumerate() {
            let mut lift = BitVec::zeros(total.dim(d));
            for i in rep.ones() {
                lift.flip(quot_pos[&d][i]);
            }
            let dz = total.differential(d).apply(&lift);
            let mut in_sub = BitVec::zeros(sub.dim(d + off));
            for p in dz.ones() {
                let i = tgt_pos
                    .iter()
                    .position(|&q| q == p)
                    .expect("boundary of a quotient cycle lands in the subcomplex");
                in_sub.flip(i);
            }
            let coords = h_sub.express(d + off, &in_sub).ok_or_else(|| {
                Gf2Error::OutsideSpan(format!(
                    "connecting image of quotient class {j} in degree {d} is not a cycle class"
                ))
            })?;
            for i in coords.ones() {
                m.flip(i, j);
            }
        }
        connecting.insert(d, m);
    }

    // Assemble the sequence walking degrees in the differential direction.
    let h_degree = |f: &str, d: i64| match total.direction() {
        Direction::Up => format!("H^{d}({f})"),
        Direction::Down => format!("H_{d}({f})"),
    };
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    if let (Some(&lo), Some(&hi)) = (degrees.iter().next(), degrees.iter().next_back()) {
        let walk: Vec<i64> = match total.direction() {
            Direction::Up => (lo..=hi).collect(),
            Direction::Down => (lo..=hi).rev().collect(),
        };
        for (step, &d) in walk.iter().enumerate() {
            if step > 0 {
                // Connecting map from the previous trio's quotient term.
                let prev = d - off;
                maps.push(
                    connecting
                        .get(&prev)
                        .cloned()
                        .unwrap_or_else(|| Gf2Matrix::zero(h_sub.rank(d), h_quot.rank(prev))),
                );
            }
            terms.push(LesTerm {
                label: h_degree(names.0, d),
                dim: h_sub.rank(d),
            });
            maps.push(
                inclusion_induced
                    .get(&d)
                    .cloned()
                    .unwrap_or_else(|| Gf2Matrix::zero(h_total.rank(d), h_sub.rank(d))),
            );
            terms.push(LesTerm {
                label: h_degree(names.1, d),
                dim: h_total.rank(d),
            });
            maps.push(
                projection_induced
                    .get(&d)
                    .cloned()
                    .unwrap_or_else(|| Gf2Matrix::zero(h_quot.rank(d), h_total.rank(d))),
            );
            terms.push(LesTerm {
                label: h_degree(names.2, d),
                dim: h_quot.rank(d),
            });
        }
    }
    let les = LongExactSequence::new(terms, maps)?;

    Ok(SubquotientLes {
        sub,
        quot,
        inclusion,
        projection,
        h_sub,
        h_total,
        h_quot,
        inclusion_induced,
        projection_induced,
        connecting,
        les,
    })
}
