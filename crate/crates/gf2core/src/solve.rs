//! Quotient-space bases: pick representatives for `span(Z) / span(B)` and
//! express arbitrary vectors in those representatives.
//!
//! This is the workhorse behind homology classes and spectral sequence page
//! entries.  The denominator span is inserted first, then candidate
//! numerator vectors are sieved; survivors become the representative basis.
//! All elimination pivots follow a caller-supplied coordinate order so that
//! representative choice is deterministic.

use crate::bits::BitVec;

/// Echelonized description of a quotient `span(candidates + denom) / span(denom)`.
///
/// Every stored row `(r, m)` satisfies `r = sum of reps[i] for i in m` modulo
/// the denominator span, which makes [`QuotientBasis::express`] a single
/// back-substitution pass.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    order: Vec<usize>,
    rows: Vec<(BitVec, BitVec)>,
    reps: Vec<BitVec>,
}

impl QuotientBasis {
    /// Build from a spanning set of the denominator and a list of candidate
    /// numerator vectors.  Candidates are processed in the given order; each
    /// one that is independent of everything seen so far contributes a
    /// representative (its fully reduced remainder).
    pub fn new(dim: usize, order: &[usize], denom: &[BitVec], candidates: &[BitVec]) -> Self {
        assert_eq!(order.len(), dim, "order must be a permutation of 0..dim");
        let mut qb = QuotientBasis {
            order: order.to_vec(),
            rows: Vec::new(),
            reps: Vec::new(),
        };
        for v in denom {
            let (r, mask) = qb.reduce(v);
            if !r.is_zero() {
                qb.rows.push((r, mask));
            }
        }
        for v in candidates {
            let (r, _) = qb.reduce(v);
            if r.is_zero() {
                continue;
            }
            // The reduced remainder itself becomes the representative: it
            // differs from `v` only by the denominator and by earlier rows,
            // so the row invariant holds with a singleton mask.
            let idx = qb.reps.len();
            qb.reps.push(r.clone());
            for (_, m) in &mut qb.rows {
                let mut grown = BitVec::zeros(idx + 1);
                for i in m.ones() {
                    grown.set(i, true);
                }
                *m = grown;
            }
            let mut mask = BitVec::zeros(idx + 1);
            mask.set(idx, true);
            qb.rows.push((r, mask));
        }
        qb
    }

    fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut r = v.clone();
        let mut mask = BitVec::zeros(self.reps.len());
        for (row, m) in &self.rows {
            if let Some(lead) = row.first_one_in(&self.order) {
                if r.get(lead) {
                    r.xor_assign(row);
                    for i in m.ones() {
                        mask.flip(i);
                    }
                }
            }
        }
        (r, mask)
    }

    /// Number of representatives (the quotient dimension).
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[BitVec] {
        &self.reps
    }

    /// Coordinates of `v` over the representatives, provided `v` lies in
    /// `span(denom + reps)`; `None` otherwise.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let (r, mask) = self.reduce(v);
        if r.is_zero() {
            Some(mask)
        } else {
            None
        }
    }
}
