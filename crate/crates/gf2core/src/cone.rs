//! Mapping cones of degree-0 chain maps.
//!
//! The cone of `f: A -> B` holds a shifted copy of `A` next to `B`, with the
//! differential twisting the two together through `f`.  Its exact sequence
//! recovers `f` on homology as the connecting map — literally the same
//! matrices, thanks to the deterministic representative choices — which makes
//! the cone a convenient quasi-isomorphism certificate: `f` induces
//! isomorphisms exactly when the cone is acyclic.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::ChainComplex;
use crate::error::Gf2Error;
use crate::les::{les_of_subcomplex, LongExactSequence, SubquotientLes};
use crate::map::ChainMap;
use crate::matrix::Gf2Matrix;

/// The mapping cone of a degree-0 chain map, with its exact sequence.
///
/// Basis labels are prefixed `a|` (shifted source part) and `b|` (target
/// part) to keep them unique.
#[derive(Debug, Clone)]
pub struct MappingCone {
    cone: ChainComplex,
    cut: SubquotientLes,
}

impl MappingCone {
    pub fn new(f: &ChainMap) -> Result<Self, Gf2Error> {
        if f.shift() != 0 {
            return Err(Gf2Error::Dimension(format!(
                "mapping cone needs a degree-0 map, got shift {}",
                f.shift()
            )));
        }
        let a = f.source();
        let b = f.target();
        let off = a.direction().offset();

        let mut degrees: BTreeSet<i64> = BTreeSet::new();
        for d in a.degrees() {
            degrees.insert(d - off);
        }
        degrees.extend(b.degrees());

        let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for &d in &degrees {
            let mut v: Vec<String> = a.labels(d + off).iter().map(|l| format!("a|{l}")).collect();
            v.extend(b.labels(d).iter().map(|l| format!("b|{l}")));
            labels.insert(d, v);
        }

        let mut diffs: BTreeMap<i64, Gf2Matrix> = BTreeMap::new();
        for &d in &degrees {
            let a_cols = a.dim(d + off);
            let b_cols = b.dim(d);
            let a_rows = a.dim(d + 2 * off);
            let b_rows = b.dim(d + off);
            let mut m = Gf2Matrix::zero(a_rows + b_rows, a_cols + b_cols);
            for (r, c) in a.differential(d + off).entries() {
                m.flip(r, c);
            }
            for (r, c) in f.component(d + off).entries() {
                m.flip(a_rows + r, c);
            }
            for (r, c) in b.differential(d).entries() {
                m.flip(a_rows + r, a_cols + c);
            }
            if !m.is_zero() {
                diffs.insert(d, m);
            }
        }
        let cone = ChainComplex::new(a.direction(), labels, diffs)?;

        let b_labels: BTreeSet<String> = cone
            .degrees()
            .into_iter()
            .flat_map(|d| cone.labels(d).iter().cloned())
            .filter(|l| l.starts_with("b|"))
            .collect();
        let cut = les_of_subcomplex(&cone, &b_labels, ("target", "cone", "source"))?;
        Ok(MappingCone { cone, cut })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.cone
    }

    pub fn les(&self) -> &LongExactSequence {
        &self.cut.les
    }

    pub fn cut(&self) -> &SubquotientLes {
        &self.cut
    }

    /// True when the cone has no homology, i.e. the defining map is a
    /// quasi-isomorphism.
    pub fn is_acyclic(&self) -> bool {
        self.cut.h_total.total_rank() == 0
    }

    /// Check that the connecting map of the cone sequence equals the map `f`
    /// induces on homology, matrix by matrix.
    pub fn verify_connecting(&self, f: &ChainMap) -> Result<(), Gf2Error> {
        let off = f.source().direction().offset();
        let h_a = f.source().homology();
        let h_b = f.target().homology();
        let induced = f.induced_on_homology(&h_a, &h_b)?;
        let mut degrees: BTreeSet<i64> = self.cut.connecting.keys().copied().collect();
        for &e in induced.keys() {
            degrees.insert(e - off);
        }
        for d in degrees {
            let rows = h_b.rank(d + off);
            let cols = h_a.rank(d + off);
            let delta = self
                .cut
                .connecting
                .get(&d)
                .cloned()
                .unwrap_or_else(|| Gf2Matrix::zero(rows, cols));
            let want = induced
                .get(&(d + off))
                .cloned()
                .unwrap_or_else(|| Gf2Matrix::zero(rows, cols));
            if delta != want {
                return Err(Gf2Error::Dimension(format!(
                    "cone connecting map at degree {d} differs from the induced map in \
                     degree {}",
                    d + off
                )));
            }
        }
        Ok(())
    }
}
