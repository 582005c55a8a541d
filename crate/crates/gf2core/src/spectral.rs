//! The spectral sequence of a filtered complex.
//!
//! Page `r` entry at filtration level `p` and degree `n` is
//!
//! ```text
//!   E_r(p, n)  =  Z_r(p, n) / ( Z_{r-1}(p+1, n) + d Z_{r-1}(p-r+1, n-off) )
//!   Z_r(p, n)  =  { x in F^p, degree n  :  dx in F^{p+r} }
//! ```
//!
//! where `off` is the degree step of the differential.  Filtration pieces are
//! coordinate subspaces (levels live on basis labels), so every `Z` is the
//! kernel of a submatrix and each entry is a [`QuotientBasis`] with
//! deterministic representatives.  With `k` levels the differentials die
//! after page `k - 1`, so the last computed page (`r = k`) is the limit.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::BitVec;
use crate::error::Gf2Error;
use crate::filtered::FilteredComplex;
use crate::matrix::Gf2Matrix;
use crate::solve::QuotientBasis;

/// One page: entry ranks and the page differential `d_r: (p,n) -> (p+r, n+off)`.
#[derive(Debug, Clone)]
pub struct Page {
    r: usize,
    entries: BTreeMap<(i64, i64), usize>,
    differentials: BTreeMap<(i64, i64), Gf2Matrix>,
}

impl Page {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rank(&self, p: i64, n: i64) -> usize {
        self.entries.get(&(p, n)).copied().unwrap_or(0)
    }

    /// Nonzero entries as `((p, n), rank)`, sorted.
    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Stored (nonzero-shaped) differentials as `((p, n), matrix)`, sorted.
    pub fn differentials(&self) -> impl Iterator<Item = ((i64, i64), &Gf2Matrix)> + '_ {
        self.differentials.iter().map(|(&k, m)| (k, m))
    }

    /// The page differential out of `(p, n)`, materialized with its shape.
    pub fn differential(&self, p: i64, n: i64, off: i64) -> Gf2Matrix {
        match self.differentials.get(&(p, n)) {
            Some(m) => m.clone(),
            None => Gf2Matrix::zero(self.rank(p + self.r as i64, n + off), self.rank(p, n)),
        }
    }
}

/// All pages `1..=num_levels` of a filtered complex.
#[derive(Debug, Clone)]
pub struct SpectralSequence {
    off: i64,
    pages: Vec<Page>,
}

impl SpectralSequence {
    pub fn new(fc: &FilteredComplex) -> Result<Self, Gf2Error> {
        let cx = fc.complex();
        let off = cx.direction().offset();
        if fc.num_levels() == 0 {
            return Err(Gf2Error::Dimension(
                "a filtered complex needs at least one level".to_string(),
            ));
        }
        let k = fc.num_levels() as i64;
        let mut pages = Vec::new();
        for r in 1..=fc.num_levels() {
            let ri = r as i64;
            let mut spaces: BTreeMap<(i64, i64), QuotientBasis> = BTreeMap::new();
            for p in 1..=k {
                for n in cx.degrees() {
                    let z = relative_cycles(fc, n, p, p + ri);
                    let mut denom = relative_cycles(fc, n, p + 1, p + ri);
                    let lifts = relative_cycles(fc, n - off, p - ri + 1, p);
                    let d_in = cx.differential(n - off);
                    denom.extend(lifts.iter().map(|b| d_in.apply(b)));
                    let qb = QuotientBasis::new(cx.dim(n), &cx.lex_order(n), &denom, &z);
                    spaces.insert((p, n), qb);
                }
            }
            let mut entries = BTreeMap::new();
            for (&key, qb) in &spaces {
                if qb.rank() > 0 {
                    entries.insert(key, qb.rank());
                }
            }
            let mut differentials = BTreeMap::new();
            for (&(p, n), qb) in &spaces {
                let Some(target) = spaces.get(&(p + ri, n + off)) else {
                    continue;
                };
                if qb.rank() == 0 || target.rank() == 0 {
                    continue;
                }
                let mut m = Gf2Matrix::zero(target.rank(), qb.rank());
                let d = cx.differential(n);
                for (j, rep) in qb.representatives().iter().enumerate() {
                    let image = d.apply(rep);
                    let coords = target.express(&image).ok_or_else(|| {
                        Gf2Error::OutsideSpan(format!(
                            "page {r} differential image at (p={p}, n={n}) leaves the \
                             target entry"
                        ))
                    })?;
                    for i in coords.ones() {
                        m.flip(i, j);
                    }
                }
                if !m.is_zero() {
                    differentials.insert((p, n), m);
                }
            }
            pages.push(Page {
                r,
                entries,
                differentials,
            });
        }
        Ok(SpectralSequence { off, pages })
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    /// Page `r` (1-based, up to the number of levels).
    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.get(r.checked_sub(1)?)
    }

    /// The last computed page; with `k` levels this is already the limit.
    pub fn infinity(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    /// Re-derive the structural identities and compare against the stored
    /// pages: the first page must be the homology of the associated graded,
    /// every page differential must square to zero, consecutive pages must be
    /// homology of one another (by ranks), and the limit page must add up to
    /// the homology of the total complex.
    pub fn verify(&self, fc: &FilteredComplex) -> Result<(), Gf2Error> {
        let cx = fc.complex();
        let off = self.off;
        let first = &self.pages[0];
        for p in 1..=fc.num_levels() as i64 {
            let gr = fc.graded_piece(p as usize).homology();
            let mut degrees: BTreeSet<i64> = gr.ranks().iter().map(|&(n, _)| n).collect();
            degrees.extend(first.entries().filter(|((q, _), _)| *q == p).map(|((_, n), _)| n));
            for n in degrees {
                if first.rank(p, n) != gr.rank(n) {
                    return Err(Gf2Error::Dimension(format!(
                        "first page entry (p={p}, n={n}) has rank {}, but the graded piece \
                         has homology rank {}",
                        first.rank(p, n),
                        gr.rank(n)
                    )));
                }
            }
        }
        for page in &self.pages {
            let ri = page.r as i64;
            for ((p, n), m) in page.differentials() {
                let next = page.differential(p + ri, n + off, off);
                if next.rows() > 0 && !next.compose(m)?.is_zero() {
                    return Err(Gf2Error::Dimension(format!(
                        "page {} differential does not square to zero out of (p={p}, n={n})",
                        page.r
                    )));
                }
            }
        }
        for w in self.pages.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let ri = a.r as i64;
            let mut keys: BTreeSet<(i64, i64)> = a.entries().map(|(k, _)| k).collect();
            keys.extend(b.entries().map(|(k, _)| k));
            for (p, n) in keys {
                let out_rank = a.differential(p, n, off).rank();
                let in_rank = a.differential(p - ri, n - off, off).rank();
                let expect = a.rank(p, n) as i64 - out_rank as i64 - in_rank as i64;
                if b.rank(p, n) as i64 != expect {
                    return Err(Gf2Error::Dimension(format!(
                        "page {} entry (p={p}, n={n}) has rank {}, expected {} from page {}",
                        b.r,
                        b.rank(p, n),
                        expect,
                        a.r
                    )));
                }
            }
        }
        let h = cx.homology();
        let limit = self.infinity();
        let mut degrees: BTreeSet<i64> = h.ranks().iter().map(|&(n, _)| n).collect();
        degrees.extend(limit.entries().map(|((_, n), _)| n));
        for n in degrees {
            let total: usize = (1..=fc.num_levels() as i64).map(|p| limit.rank(p, n)).sum();
            if total != h.rank(n) {
                return Err(Gf2Error::Dimension(format!(
                    "limit page ranks in degree {n} sum to {total}, homology has rank {}",
                    h.rank(n)
                )));
            }
        }
        Ok(())
    }
}

/// Basis of `{ x in F^p, degree n : dx in F^q }`, embedded in ambient
/// coordinates.  `p <= 1` means no source constraint; `q` above the level
/// count forces `dx = 0`.
fn relative_cycles(fc: &FilteredComplex, n: i64, p: i64, q: i64) -> Vec<BitVec> {
    let cx = fc.complex();
    let off = cx.direction().offset();
    let src = fc.filtration_positions(n, p);
    // dx must have no support below level q.
    let forbidden: Vec<usize> = {
        let all: BTreeSet<usize> = (0..cx.dim(n + off)).collect();
        let allowed: BTreeSet<usize> =
            fc.filtration_positions(n + off, q).into_iter().collect();
        all.difference(&allowed).copied().collect()
    };
    let d = cx.differential(n);
    let mut m = Gf2Matrix::zero(forbidden.len(), src.len());
    for (j, &c) in src.iter().enumerate() {
        for (i, &r) in forbidden.iter().enumerate() {
            if d.get(r, c) {
                m.flip(i, j);
            }
        }
    }
    // Restrict the ambient lex order to the selected columns so the kernel
    // basis stays deterministic.
    let ambient = cx.lex_order(n);
    let order: Vec<usize> = ambient
        .iter()
        .filter_map(|&a| src.iter().position(|&s| s == a))
        .collect();
    m.kernel_basis(&order)
        .into_iter()
        .map(|kv| {
            let mut v = BitVec::zeros(cx.dim(n));
            for j in kv.ones() {
                v.flip(src[j]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{ChainComplex, Direction};

    fn filtered_interval() -> FilteredComplex {
        let cx = ChainComplex::builder(Direction::Down)
            .generator(0, "v0")
            .generator(0, "v1")
            .generator(1, "e")
            .boundary("e", &["v0", "v1"])
            .build()
            .unwrap();
        let levels = [("v0", 2), ("v1", 2), ("e", 1)]
            .into_iter()
            .map(|(l, p)| (l.to_string(), p))
            .collect();
        FilteredComplex::new(cx, levels, 2).unwrap()
    }

    #[test]
    fn two_level_interval_collapses_on_page_two() {
        let fc = filtered_interval();
        let ss = SpectralSequence::new(&fc).unwrap();
        let p1 = ss.page(1).unwrap();
        assert_eq!(p1.rank(2, 0), 2);
        assert_eq!(p1.rank(1, 1), 1);
        // The page-1 differential kills the edge class against [v0 + v1].
        assert_eq!(p1.differential(1, 1, -1).rank(), 1);
        let limit = ss.infinity();
        assert_eq!(limit.rank(2, 0), 1);
        assert_eq!(limit.rank(1, 1), 0);
        ss.verify(&fc).unwrap();
    }

    #[test]
    fn single_level_reproduces_homology() {
        let cx = ChainComplex::builder(Direction::Up)
            .generator(0, "x")
            .generator(1, "y")
            .generator(1, "z")
            .boundary("x", &["y"])
            .build()
            .unwrap();
        let levels = [("x", 1), ("y", 1), ("z", 1)]
            .into_iter()
            .map(|(l, p)| (l.to_string(), p))
            .collect();
        let fc = FilteredComplex::new(cx.clone(), levels, 1).unwrap();
        let ss = SpectralSequence::new(&fc).unwrap();
        let h = cx.homology();
        for (n, rank) in h.ranks() {
            assert_eq!(ss.infinity().rank(1, n), rank);
        }
        ss.verify(&fc).unwrap();
    }

    #[test]
    fn page_count_matches_levels() {
        let fc = filtered_interval();
        let ss = SpectralSequence::new(&fc).unwrap();
        assert_eq!(ss.pages().len(), 2);
        assert_eq!(ss.page(2).unwrap().r(), 2);
        assert!(ss.page(3).is_none());
    }
}
