//! Finite-dimensional graded complexes over GF(2) with a differential that
//! either raises or lowers degree by one.
//!
//! Basis elements are named; every elimination that has to choose pivots does
//! so in lexicographic label order, so homology representatives and induced
//! maps are reproducible across runs and independent of declaration order.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::BitVec;
use crate::error::Gf2Error;
use crate::matrix::Gf2Matrix;
use crate::solve::QuotientBasis;

/// Whether the differential raises (`Up`) or lowers (`Down`) the grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Differential sends degree `d` to `d + 1`.
    Up,
    /// Differential sends degree `d` to `d - 1`.
    Down,
}

impl Direction {
    /// Degree offset applied by the differential: `+1` or `-1`.
    pub fn offset(self) -> i64 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }

    /// The opposite direction.
    pub fn flip(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Up => write!(f, "+1"),
            Direction::Down => write!(f, "-1"),
        }
    }
}

/// A graded GF(2) complex with named basis elements.
///
/// Construction validates basis-label uniqueness, differential shapes, and
/// `d ∘ d = 0`; afterwards the object can be queried freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    direction: Direction,
    /// Basis labels per degree, in declaration order.
    labels: BTreeMap<i64, Vec<String>>,
    /// Differential components, keyed by source degree.  Absent key = zero.
    diffs: BTreeMap<i64, Gf2Matrix>,
}

impl ChainComplex {
    /// Build and validate a complex.  `diffs[d]` must map degree `d` to
    /// degree `d + direction.offset()`; missing entries are zero maps.
    pub fn new(
        direction: Direction,
        labels: BTreeMap<i64, Vec<String>>,
        diffs: BTreeMap<i64, Gf2Matrix>,
    ) -> Result<Self, Gf2Error> {
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for names in labels.values() {
            for n in names {
                if !seen.insert(n.as_str()) {
                    return Err(Gf2Error::DuplicateLabel(n.clone()));
                }
            }
        }
        let dim = |d: i64| labels.get(&d).map_or(0, |v| v.len());
        let off = direction.offset();
        for (&d, m) in &diffs {
            let want_rows = dim(d + off);
            let want_cols = dim(d);
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(Gf2Error::BoundaryShape {
                    degree: d,
                    rows: m.rows(),
                    cols: m.cols(),
                    want_rows,
                    want_cols,
                });
            }
        }
        let cx = ChainComplex {
            direction,
            labels,
            diffs,
        };
        for &d in cx.diffs.keys() {
            let second = cx.differential(d + off);
            let first = cx.differential(d);
            let square = second.compose(&first).expect("shapes checked above");
            if !square.is_zero() {
                return Err(Gf2Error::BoundarySquare { degree: d });
            }
        }
        Ok(cx)
    }

    /// Start an incremental builder (generators first, then boundary words).
    pub fn builder(direction: Direction) -> ComplexBuilder {
        ComplexBuilder {
            direction,
            gens: Vec::new(),
            boundaries: Vec::new(),
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Degrees carrying at least one basis element, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.labels
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(&d, _)| d)
            .collect()
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.labels.get(&degree).map_or(0, |v| v.len())
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(|v| v.len()).sum()
    }

    /// Basis labels of one degree (empty slice if the degree is trivial).
    pub fn labels(&self, degree: i64) -> &[String] {
        self.labels.get(&degree).map_or(&[], |v| v.as_slice())
    }

    /// Position of a named basis element within its degree.
    pub fn label_index(&self, degree: i64, name: &str) -> Option<usize> {
        self.labels(degree).iter().position(|l| l == name)
    }

    /// Degree of a named basis element, searching all degrees.
    pub fn degree_of(&self, name: &str) -> Option<i64> {
        self.labels
            .iter()
            .find(|(_, v)| v.iter().any(|l| l == name))
            .map(|(&d, _)| d)
    }

    /// The differential component out of `degree`, materialized with the
    /// correct shape even when it is zero.
    pub fn differential(&self, degree: i64) -> Gf2Matrix {
        match self.diffs.get(&degree) {
            Some(m) => m.clone(),
            None => Gf2Matrix::zero(self.dim(degree + self.direction.offset()), self.dim(degree)),
        }
    }

    /// Coordinate vector for a sum of named basis elements of one degree.
    pub fn vector(&self, degree: i64, names: &[&str]) -> Result<BitVec, Gf2Error> {
        let mut v = BitVec::zeros(self.dim(degree));
        for n in names {
            let i = self
                .label_index(degree, n)
                .ok_or_else(|| Gf2Error::UnknownLabel((*n).to_string()))?;
            v.flip(i);
        }
        Ok(v)
    }

    /// Express a coordinate vector of one degree as its supporting labels.
    pub fn vector_labels(&self, degree: i64, v: &BitVec) -> Vec<String> {
        v.ones().map(|i| self.labels(degree)[i].clone()).collect()
    }

    /// Permutation of basis positions sorting the labels lexicographically.
    /// Used as the pivot order for all degree-local eliminations.
    pub fn lex_order(&self, degree: i64) -> Vec<usize> {
        let labels = self.labels(degree);
        let mut idx: Vec<usize> = (0..labels.len()).collect();
        idx.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        idx
    }

    /// Homology in every degree, with deterministic representatives.
    pub fn homology(&self) -> Homology {
        let off = self.direction.offset();
        let mut degrees: BTreeSet<i64> = self.labels.keys().copied().collect();
        let mut spaces = BTreeMap::new();
        for &d in &degrees.clone() {
            degrees.insert(d + off);
        }
        for d in degrees {
            let n = self.dim(d);
            if n == 0 {
                continue;
            }
            let order = self.lex_order(d);
            let cycles = self.differential(d).kernel_basis(&order);
            let boundaries = self.differential(d - off).image_basis();
            let qb = QuotientBasis::new(n, &order, &boundaries, &cycles);
            spaces.insert(d, qb);
        }
        Homology {
            labels: self.labels.clone(),
            spaces,
        }
    }

    /// Transpose complex: same labels, transposed differentials, flipped
    /// direction.
    pub fn dual(&self) -> ChainComplex {
        let off = self.direction.offset();
        let mut diffs = BTreeMap::new();
        for (&d, m) in &self.diffs {
            diffs.insert(d + off, m.transpose());
        }
        ChainComplex {
            direction: self.direction.flip(),
            labels: self.labels.clone(),
            diffs,
        }
    }

    /// Relabel degree `d` as `a - d`.  The differential matrices are kept and
    /// now step in the opposite grading direction.
    pub fn regrade(&self, a: i64) -> ChainComplex {
        let mut labels = BTreeMap::new();
        for (&d, v) in &self.labels {
            labels.insert(a - d, v.clone());
        }
        let mut diffs = BTreeMap::new();
        for (&d, m) in &self.diffs {
            diffs.insert(a - d, m.clone());
        }
        ChainComplex {
            direction: self.direction.flip(),
            labels,
            diffs,
        }
    }

    /// Shift every degree by `s`, keeping the direction.
    pub fn shift_degrees(&self, s: i64) -> ChainComplex {
        let mut labels = BTreeMap::new();
        for (&d, v) in &self.labels {
            labels.insert(d + s, v.clone());
        }
        let mut diffs = BTreeMap::new();
        for (&d, m) in &self.diffs {
            diffs.insert(d + s, m.clone());
        }
        ChainComplex {
            direction: self.direction,
            labels,
            diffs,
        }
    }

    /// The sub-span of the named basis elements, verified to be closed under
    /// the differential.  Returns the subcomplex together with, per degree,
    /// the positions of the selected elements inside the ambient basis.
    pub fn span_subcomplex(
        &self,
        selected: &BTreeSet<String>,
    ) -> Result<(ChainComplex, BTreeMap<i64, Vec<usize>>), Gf2Error> {
        for name in selected {
            if self.degree_of(name).is_none() {
                return Err(Gf2Error::UnknownLabel(name.clone()));
            }
        }
        let mut positions: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for (&d, names) in &self.labels {
            let picked: Vec<usize> = (0..names.len())
                .filter(|&i| selected.contains(&names[i]))
                .collect();
            if picked.is_empty() {
                continue;
            }
            labels.insert(d, picked.iter().map(|&i| names[i].clone()).collect());
            positions.insert(d, picked);
        }
        let off = self.direction.offset();
        let mut diffs = BTreeMap::new();
        for (&d, picked) in &positions {
            let m = self.differential(d);
            let cols = m.to_cols();
            let tgt = positions.get(&(d + off)).cloned().unwrap_or_default();
            let tgt_set: BTreeSet<usize> = tgt.iter().copied().collect();
            let mut sub = Gf2Matrix::zero(tgt.len(), picked.len());
            for (j, &src_pos) in picked.iter().enumerate() {
                for i in cols[src_pos].ones() {
                    if !tgt_set.contains(&i) {
                        return Err(Gf2Error::NotSubcomplex(self.labels(d)[src_pos].clone()));
                    }
                    let row = tgt.iter().position(|&t| t == i).expect("present in set");
                    sub.flip(row, j);
                }
            }
            if !sub.is_zero() {
                diffs.insert(d, sub);
            }
        }
        let sub = ChainComplex::new(self.direction, labels, diffs)?;
        Ok((sub, positions))
    }

    /// Quotient by the span of the named basis elements (which must form a
    /// subcomplex).  Returns the quotient together with, per degree, the
    /// ambient positions of the surviving basis elements.
    pub fn quotient_by(
        &self,
        selected: &BTreeSet<String>,
    ) -> Result<(ChainComplex, BTreeMap<i64, Vec<usize>>), Gf2Error> {
        // Closure is what makes the induced differential well defined.
        self.span_subcomplex(selected)?;
        let mut positions: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for (&d, names) in &self.labels {
            let kept: Vec<usize> = (0..names.len())
                .filter(|&i| !selected.contains(&names[i]))
                .collect();
            if kept.is_empty() {
                continue;
            }
            labels.insert(d, kept.iter().map(|&i| names[i].clone()).collect());
            positions.insert(d, kept);
        }
        let off = self.direction.offset();
        let mut diffs = BTreeMap::new();
        for (&d, kept) in &positions {
            let m = self.differential(d);
            let cols = m.to_cols();
            let tgt = positions.get(&(d + off)).cloned().unwrap_or_default();
            let mut q = Gf2Matrix::zero(tgt.len(), kept.len());
            for (j, &src_pos) in kept.iter().enumerate() {
                for i in cols[src_pos].ones() {
                    if let Some(row) = tgt.iter().position(|&t| t == i) {
                        q.flip(row, j);
                    }
                }
            }
            if !q.is_zero() {
                diffs.insert(d, q);
            }
        }
        let quot = ChainComplex::new(self.direction, labels, diffs)?;
        Ok((quot, positions))
    }
}

/// Incremental construction: declare generators, then boundary values as
/// sums of generator names.
pub struct ComplexBuilder {
    direction: Direction,
    gens: Vec<(i64, String)>,
    boundaries: Vec<(String, Vec<String>)>,
}

impl ComplexBuilder {
    pub fn generator(mut self, degree: i64, name: &str) -> Self {
        self.gens.push((degree, name.to_string()));
        self
    }

    /// Set `d(source) = sum(targets)`.  Targets must live one step in the
    /// differential direction from the source.
    pub fn boundary(mut self, source: &str, targets: &[&str]) -> Self {
        self.boundaries.push((
            source.to_string(),
            targets.iter().map(|t| (*t).to_string()).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<ChainComplex, Gf2Error> {
        let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        let mut degree_of: BTreeMap<String, i64> = BTreeMap::new();
        for (d, name) in self.gens {
            if degree_of.contains_key(&name) {
                return Err(Gf2Error::DuplicateLabel(name));
            }
            degree_of.insert(name.clone(), d);
            labels.entry(d).or_default().push(name);
        }
        let index_of = |d: i64, name: &str| -> Option<usize> {
            labels.get(&d).and_then(|v| v.iter().position(|l| l == name))
        };
        let off = self.direction.offset();
        let mut diffs: BTreeMap<i64, Gf2Matrix> = BTreeMap::new();
        for (source, targets) in self.boundaries {
            let &sd = degree_of
                .get(&source)
                .ok_or_else(|| Gf2Error::UnknownLabel(source.clone()))?;
            let td = sd + off;
            let m = diffs.entry(sd).or_insert_with(|| {
                Gf2Matrix::zero(
                    labels.get(&td).map_or(0, |v| v.len()),
                    labels.get(&sd).map_or(0, |v| v.len()),
                )
            });
            let col = index_of(sd, &source).expect("source registered");
            for t in targets {
                let &got = degree_of
                    .get(&t)
                    .ok_or_else(|| Gf2Error::UnknownLabel(t.clone()))?;
                if got != td {
                    return Err(Gf2Error::Dimension(format!(
                        "boundary of '{source}' (degree {sd}) hits '{t}' in degree {got}, \
                         expected degree {td}"
                    )));
                }
                let row = index_of(td, &t).expect("target registered");
                m.flip(row, col);
            }
        }
        ChainComplex::new(self.direction, labels, diffs)
    }
}

/// Homology of a [`ChainComplex`], one quotient space per degree.
#[derive(Debug, Clone)]
pub struct Homology {
    labels: BTreeMap<i64, Vec<String>>,
    spaces: BTreeMap<i64, QuotientBasis>,
}

impl Homology {
    pub fn rank(&self, degree: i64) -> usize {
        self.spaces.get(&degree).map_or(0, |qb| qb.rank())
    }

    /// Degree/rank pairs with nonzero rank, ascending by degree.
    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.spaces
            .iter()
            .filter(|(_, qb)| qb.rank() > 0)
            .map(|(&d, qb)| (d, qb.rank()))
            .collect()
    }

    pub fn total_rank(&self) -> usize {
        self.spaces.values().map(|qb| qb.rank()).sum()
    }

    /// Representing cycles of one degree, as coordinate vectors.
    pub fn representatives(&self, degree: i64) -> &[BitVec] {
        self.spaces
            .get(&degree)
            .map_or(&[], |qb| qb.representatives())
    }

    /// Representing cycles of one degree, as sums of basis labels.
    pub fn representative_labels(&self, degree: i64) -> Vec<Vec<String>> {
        let labels = self.labels.get(&degree);
        self.representatives(degree)
            .iter()
            .map(|v| {
                v.ones()
                    .map(|i| labels.expect("nonempty degree")[i].clone())
                    .collect()
            })
            .collect()
    }

    /// Coordinates of a cycle in the homology basis of its degree.
    /// `None` when the vector is not a cycle-plus-boundary combination of the
    /// representatives (e.g. not a cycle at all).
    pub fn express(&self, degree: i64, v: &BitVec) -> Option<BitVec> {
        match self.spaces.get(&degree) {
            Some(qb) => qb.express(v),
            None => {
                if v.is_zero() {
                    Some(BitVec::zeros(0))
                } else {
                    None
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval_down() -> ChainComplex {
        // Two vertices, one edge: d(e) = v0 + v1, lowering direction.
        ChainComplex::builder(Direction::Down)
            .generator(0, "v0")
            .generator(0, "v1")
            .generator(1, "e")
            .boundary("e", &["v0", "v1"])
            .build()
            .unwrap()
    }

    #[test]
    fn interval_has_point_homology() {
        let h = interval_down().homology();
        assert_eq!(h.ranks(), vec![(0, 1)]);
        // Canonical coset form eliminates the lex-leading coordinate of the
        // boundary v0 + v1, leaving v1 as the representative.
        assert_eq!(h.representative_labels(0), vec![vec!["v1".to_string()]]);
    }

    #[test]
    fn circle_has_two_classes() {
        // Two vertices, two parallel edges: a circle.
        let cx = ChainComplex::builder(Direction::Down)
            .generator(0, "v0")
            .generator(0, "v1")
            .generator(1, "e0")
            .generator(1, "e1")
            .boundary("e0", &["v0", "v1"])
            .boundary("e1", &["v0", "v1"])
            .build()
            .unwrap();
        let h = cx.homology();
        assert_eq!(h.ranks(), vec![(0, 1), (1, 1)]);
        assert_eq!(
            h.representative_labels(1),
            vec![vec!["e0".to_string(), "e1".to_string()]]
        );
    }

    #[test]
    fn square_nonzero_is_rejected_with_degree() {
        // d(a) = x, d(x) = p: composing is nonzero.
        let err = ChainComplex::builder(Direction::Down)
            .generator(2, "a")
            .generator(1, "x")
            .generator(0, "p")
            .boundary("a", &["x"])
            .boundary("x", &["p"])
            .build()
            .unwrap_err();
        match err {
            Gf2Error::BoundarySquare { degree } => assert_eq!(degree, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_unknown_labels_are_rejected() {
        let err = ChainComplex::builder(Direction::Up)
            .generator(0, "x")
            .generator(1, "x")
            .build()
            .unwrap_err();
        assert!(matches!(err, Gf2Error::DuplicateLabel(l) if l == "x"));

        let err = ChainComplex::builder(Direction::Up)
            .generator(0, "x")
            .boundary("x", &["ghost"])
            .build()
            .unwrap_err();
        assert!(matches!(err, Gf2Error::UnknownLabel(l) if l == "ghost"));
    }

    #[test]
    fn wrong_degree_boundary_is_rejected() {
        let err = ChainComplex::builder(Direction::Down)
            .generator(2, "a")
            .generator(0, "p")
            .boundary("a", &["p"])
            .build()
            .unwrap_err();
        assert!(matches!(err, Gf2Error::Dimension(_)));
    }

    #[test]
    fn dual_transposes_and_flips() {
        let cx = interval_down();
        let dual = cx.dual();
        assert_eq!(dual.direction(), Direction::Up);
        // Raising differential out of degree 0 is the transpose of the old
        // lowering differential out of degree 1.
        assert_eq!(dual.differential(0), cx.differential(1).transpose());
        let h = dual.homology();
        assert_eq!(h.ranks(), vec![(0, 1)]);
    }

    #[test]
    fn regrade_mirrors_degrees() {
        let cx = interval_down();
        let r = cx.regrade(3); // degree d becomes 3 - d
        assert_eq!(r.direction(), Direction::Up);
        assert_eq!(r.dim(3), 2);
        assert_eq!(r.dim(2), 1);
        assert_eq!(r.homology().ranks(), vec![(3, 1)]);
    }

    #[test]
    fn shift_translates_degrees() {
        let cx = interval_down().shift_degrees(5);
        assert_eq!(cx.dim(5), 2);
        assert_eq!(cx.dim(6), 1);
        assert_eq!(cx.homology().ranks(), vec![(5, 1)]);
    }

    #[test]
    fn subcomplex_requires_closure() {
        let cx = interval_down();
        // The edge alone is not closed under d.
        let sel: BTreeSet<String> = ["e".to_string()].into_iter().collect();
        assert!(matches!(
            cx.span_subcomplex(&sel),
            Err(Gf2Error::NotSubcomplex(l)) if l == "e"
        ));
        // The two vertices are.
        let sel: BTreeSet<String> = ["v0".to_string(), "v1".to_string()].into_iter().collect();
        let (sub, _) = cx.span_subcomplex(&sel).unwrap();
        assert_eq!(sub.total_dim(), 2);
        assert_eq!(sub.homology().ranks(), vec![(0, 2)]);
        // The quotient by them is the edge with zero differential.
        let (quot, _) = cx.quotient_by(&sel).unwrap();
        assert_eq!(quot.total_dim(), 1);
        assert_eq!(quot.homology().ranks(), vec![(1, 1)]);
    }

    #[test]
    fn vector_roundtrip() {
        let cx = interval_down();
        let v = cx.vector(0, &["v1"]).unwrap();
        assert_eq!(cx.vector_labels(0, &v), vec!["v1".to_string()]);
        assert!(matches!(
            cx.vector(0, &["nope"]),
            Err(Gf2Error::UnknownLabel(_))
        ));
    }
}
