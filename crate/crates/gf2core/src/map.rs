//! Chain maps between graded complexes, possibly shifting degree, plus the
//! maps they induce on homology.
//!
//! Over GF(2) there are no signs, so a "degree `s` chain map" is simply a
//! collection of components commuting with the differentials on the nose.

use std::collections::BTreeMap;

use crate::bits::BitVec;
use crate::complex::{ChainComplex, Homology};
use crate::error::Gf2Error;
use crate::matrix::Gf2Matrix;

/// A degree-`shift` map of complexes commuting with the differentials.
///
/// Component `d` maps degree `d` of the source to degree `d + shift` of the
/// target.  Construction verifies shapes and the commutation identity.
#[derive(Debug, Clone)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    shift: i64,
    components: BTreeMap<i64, Gf2Matrix>,
}

impl ChainMap {
    pub fn new(
        source: &ChainComplex,
        target: &ChainComplex,
        shift: i64,
        components: BTreeMap<i64, Gf2Matrix>,
    ) -> Result<Self, Gf2Error> {
        if source.direction() != target.direction() {
            return Err(Gf2Error::DirectionMismatch {
                from: source.direction(),
                to: target.direction(),
            });
        }
        for (&d, m) in &components {
            let want_rows = target.dim(d + shift);
            let want_cols = source.dim(d);
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(Gf2Error::ComponentShape {
                    degree: d,
                    rows: m.rows(),
                    cols: m.cols(),
                    want_rows,
                    want_cols,
                });
            }
        }
        let map = ChainMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            components,
        };
        let off = source.direction().offset();
        let mut degrees: Vec<i64> = source.degrees();
        degrees.extend(map.components.keys().copied());
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            let lhs = map
                .target
                .differential(d + shift)
                .compose(&map.component(d))
                .expect("component shapes verified");
            let rhs = map
                .component(d + off)
                .compose(&map.source.differential(d))
                .expect("component shapes verified");
            if lhs != rhs {
                return Err(Gf2Error::NotChainMap { degree: d });
            }
        }
        Ok(map)
    }

    /// The identity map of a complex.
    pub fn identity(cx: &ChainComplex) -> ChainMap {
        let components = cx
            .degrees()
            .into_iter()
            .map(|d| (d, Gf2Matrix::identity(cx.dim(d))))
            .collect();
        ChainMap::new(cx, cx, 0, components).expect("identity always commutes")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Component out of one source degree, materialized with its shape.
    pub fn component(&self, degree: i64) -> Gf2Matrix {
        match self.components.get(&degree) {
            Some(m) => m.clone(),
            None => Gf2Matrix::zero(self.target.dim(degree + self.shift), self.source.dim(degree)),
        }
    }

    /// Apply to a coordinate vector of one source degree.
    pub fn apply(&self, degree: i64, v: &BitVec) -> BitVec {
        self.component(degree).apply(v)
    }

    /// Composite `self ∘ other`; shifts add.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap, Gf2Error> {
        if self.source != other.target {
            return Err(Gf2Error::Dimension(
                "compose: inner complexes differ".to_string(),
            ));
        }
        let mut components = BTreeMap::new();
        for d in other.source.degrees() {
            let m = self
                .component(d + other.shift)
                .compose(&other.component(d))?;
            if !m.is_zero() {
                components.insert(d, m);
            }
        }
        ChainMap::new(
            &other.source,
            &self.target,
            self.shift + other.shift,
            components,
        )
    }

    /// Pointwise sum with a map of identical shape data.
    pub fn add(&self, other: &ChainMap) -> Result<ChainMap, Gf2Error> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift
        {
            return Err(Gf2Error::Dimension(
                "add: maps have different source/target/shift".to_string(),
            ));
        }
        let mut components = BTreeMap::new();
        let mut degrees: Vec<i64> = self.components.keys().copied().collect();
        degrees.extend(other.components.keys().copied());
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            let m = self.component(d).add(&other.component(d))?;
            if !m.is_zero() {
                components.insert(d, m);
            }
        }
        ChainMap::new(&self.source, &self.target, self.shift, components)
    }

    /// Matrices of the induced map on homology, keyed by source degree.
    ///
    /// `hs` and `ht` must be the homologies of this map's source and target.
    /// Degrees where both sides vanish are omitted.
    pub fn induced_on_homology(
        &self,
        hs: &Homology,
        ht: &Homology,
    ) -> Result<BTreeMap<i64, Gf2Matrix>, Gf2Error> {
        let mut out = BTreeMap::new();
        let mut degrees: Vec<i64> = self.source.degrees();
        for d in self.target.degrees() {
            degrees.push(d - self.shift);
        }
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            let rows = ht.rank(d + self.shift);
            let cols = hs.rank(d);
            if rows == 0 && cols == 0 {
                continue;
            }
            let mut m = Gf2Matrix::zero(rows, cols);
            for (j, rep) in hs.representatives(d).iter().enumerate() {
                let image = self.apply(d, rep);
                let coords = ht.express(d + self.shift, &image).ok_or_else(|| {
                    Gf2Error::OutsideSpan(format!(
                        "image of homology representative {j} in degree {d} is not a cycle \
                         class of the target"
                    ))
                })?;
                for i in coords.ones() {
                    m.flip(i, j);
                }
            }
            out.insert(d, m);
        }
        Ok(out)
    }

    /// Per-degree defect `self + other + dK + Kd` of a candidate homotopy
    /// `k` between two maps of identical shape data.  `k[d]` maps source
    /// degree `d` to target degree `d + shift - offset`.  All components are
    /// materialized, so a zero map yields an explicitly zero defect.
    pub fn homotopy_defect(
        &self,
        other: &ChainMap,
        k: &BTreeMap<i64, Gf2Matrix>,
    ) -> Result<BTreeMap<i64, Gf2Matrix>, Gf2Error> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift
        {
            return Err(Gf2Error::Dimension(
                "homotopy defect: maps have different source/target/shift".to_string(),
            ));
        }
        let off = self.source.direction().offset();
        let k_shift = self.shift - off;
        let k_component = |d: i64| -> Result<Gf2Matrix, Gf2Error> {
            match k.get(&d) {
                Some(m) => {
                    let want_rows = self.target.dim(d + k_shift);
                    let want_cols = self.source.dim(d);
                    if m.rows() != want_rows || m.cols() != want_cols {
                        return Err(Gf2Error::ComponentShape {
                            degree: d,
                            rows: m.rows(),
                            cols: m.cols(),
                            want_rows,
                            want_cols,
                        });
                    }
                    Ok(m.clone())
                }
                None => Ok(Gf2Matrix::zero(
                    self.target.dim(d + k_shift),
                    self.source.dim(d),
                )),
            }
        };
        let mut out = BTreeMap::new();
        for d in self.source.degrees() {
            let dk = self
                .target
                .differential(d + k_shift)
                .compose(&k_component(d)?)?;
            let kd = k_component(d + off)?.compose(&self.source.differential(d))?;
            let defect = self
                .component(d)
                .add(&other.component(d))?
                .add(&dk)?
                .add(&kd)?;
            out.insert(d, defect);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Direction;

    fn interval() -> ChainComplex {
        ChainComplex::builder(Direction::Down)
            .generator(0, "v0")
            .generator(0, "v1")
            .generator(1, "e")
            .boundary("e", &["v0", "v1"])
            .build()
            .unwrap()
    }

    fn point() -> ChainComplex {
        ChainComplex::builder(Direction::Down)
            .generator(0, "w")
            .build()
            .unwrap()
    }

    #[test]
    fn collapse_to_point_is_chain_map_and_induces_iso_in_degree_zero() {
        let src = interval();
        let tgt = point();
        // v0, v1 -> w; e -> 0.
        let f0 = Gf2Matrix::from_entries(1, 2, [(0, 0), (0, 1)]).unwrap();
        let f = ChainMap::new(&src, &tgt, 0, BTreeMap::from([(0, f0)])).unwrap();
        let induced = f
            .induced_on_homology(&src.homology(), &tgt.homology())
            .unwrap();
        assert_eq!(induced[&0], Gf2Matrix::identity(1));
    }

    #[test]
    fn non_commuting_components_are_rejected_with_degree() {
        let src = interval();
        let tgt = point();
        // Sending only v0 to w breaks commutation out of degree 1.
        let f0 = Gf2Matrix::from_entries(1, 2, [(0, 0)]).unwrap();
        let err = ChainMap::new(&src, &tgt, 0, BTreeMap::from([(0, f0)])).unwrap_err();
        assert!(matches!(err, Gf2Error::NotChainMap { degree: 1 }));
    }

    #[test]
    fn component_shape_mismatch_is_rejected() {
        let src = interval();
        let tgt = point();
        let bad = Gf2Matrix::zero(2, 2);
        let err = ChainMap::new(&src, &tgt, 0, BTreeMap::from([(0, bad)])).unwrap_err();
        assert!(matches!(err, Gf2Error::ComponentShape { degree: 0, .. }));
    }

    #[test]
    fn homotopic_maps_have_zero_defect() {
        let cx = interval();
        let id = ChainMap::identity(&cx);
        // g collapses everything onto v1; homotopic to the identity via
        // K(v0) = e.
        let g0 = Gf2Matrix::from_entries(2, 2, [(1, 0), (1, 1)]).unwrap();
        let g = ChainMap::new(&cx, &cx, 0, BTreeMap::from([(0, g0)])).unwrap();
        let k = BTreeMap::from([(0, Gf2Matrix::from_entries(1, 2, [(0, 0)]).unwrap())]);
        let defect = id.homotopy_defect(&g, &k).unwrap();
        assert!(defect.values().all(Gf2Matrix::is_zero));

        // Without the homotopy the defect is visible.
        let defect = id.homotopy_defect(&g, &BTreeMap::new()).unwrap();
        assert!(!defect.values().all(Gf2Matrix::is_zero));
    }

    #[test]
    fn compose_and_add_roundtrip() {
        let cx = interval();
        let id = ChainMap::identity(&cx);
        let double = id.compose(&id).unwrap();
        assert_eq!(double.component(0), Gf2Matrix::identity(2));
        let zero = id.add(&id).unwrap();
        assert!(zero.component(0).is_zero());
        assert!(zero.component(1).is_zero());
    }

    #[test]
    fn degree_shift_maps_commute() {
        // A degree -1 map of the interval to itself: e -> v0 + v1 would not
        // commute; e -> 0 with v -> 0 trivially does, but a more telling one
        // is the boundary itself viewed as a map to the same complex.
        let cx = interval();
        let d1 = cx.differential(1);
        let f = ChainMap::new(&cx, &cx, -1, BTreeMap::from([(1, d1)])).unwrap();
        assert_eq!(f.shift(), -1);
        // d as a chain map induces zero on homology.
        let h = cx.homology();
        let induced = f.induced_on_homology(&h, &h).unwrap();
        assert!(induced.values().all(Gf2Matrix::is_zero));
    }
}
