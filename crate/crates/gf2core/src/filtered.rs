//! Complexes with a finite multiplicative-style filtration by basis labels.
//!
//! Each basis element carries a level in `1..=num_levels`; level-`p` spans
//! `F^p` = "everything of level at least `p`", so `F^1 ⊇ F^2 ⊇ …` is a
//! decreasing chain of coordinate subspaces.  Validation enforces that the
//! differential never lowers the level, which is exactly what makes every
//! `F^p` a subcomplex.

use std::collections::BTreeMap;

use crate::complex::ChainComplex;
use crate::error::Gf2Error;

/// A validated filtered complex.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    complex: ChainComplex,
    levels: BTreeMap<String, usize>,
    num_levels: usize,
}

impl FilteredComplex {
    pub fn new(
        complex: ChainComplex,
        levels: BTreeMap<String, usize>,
        num_levels: usize,
    ) -> Result<Self, Gf2Error> {
        for (label, &level) in &levels {
            if complex.degree_of(label).is_none() {
                return Err(Gf2Error::UnknownLabel(label.clone()));
            }
            if level < 1 || level > num_levels {
                return Err(Gf2Error::LevelRange {
                    label: label.clone(),
                    level,
                    levels: num_levels,
                });
            }
        }
        for d in complex.degrees() {
            for label in complex.labels(d) {
                if !levels.contains_key(label) {
                    return Err(Gf2Error::Dimension(format!(
                        "basis element '{label}' has no filtration level"
                    )));
                }
            }
        }
        let off = complex.direction().offset();
        for d in complex.degrees() {
            let src = complex.labels(d);
            let tgt = complex.labels(d + off);
            for (r, c) in complex.differential(d).entries() {
                let from_level = levels[&src[c]];
                let to_level = levels[&tgt[r]];
                if to_level < from_level {
                    return Err(Gf2Error::FiltrationViolated {
                        from: src[c].clone(),
                        to: tgt[r].clone(),
                        from_level,
                        to_level,
                    });
                }
            }
        }
        Ok(FilteredComplex {
            complex,
            levels,
            num_levels,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn num_levels(&self) -> usize {
        self.num_levels
    }

    pub fn level_of(&self, label: &str) -> Option<usize> {
        self.levels.get(label).copied()
    }

    /// Basis positions of `F^p` in one degree (`p` below 1 means everything;
    /// above `num_levels`, nothing).
    pub fn filtration_positions(&self, degree: i64, p: i64) -> Vec<usize> {
        self.complex
            .labels(degree)
            .iter()
            .enumerate()
            .filter(|(_, l)| (self.levels[*l] as i64) >= p)
            .map(|(i, _)| i)
            .collect()
    }

    /// The associated graded piece at one level: basis of that exact level,
    /// differential restricted to entries staying on the level.
    pub fn graded_piece(&self, p: usize) -> ChainComplex {
        let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        let mut positions: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for d in self.complex.degrees() {
            let keep: Vec<usize> = self
                .complex
                .labels(d)
                .iter()
                .enumerate()
                .filter(|(_, l)| self.levels[*l] == p)
                .map(|(i, _)| i)
                .collect();
            if keep.is_empty() {
                continue;
            }
            labels.insert(
                d,
                keep.iter()
                    .map(|&i| self.complex.labels(d)[i].clone())
                    .collect(),
            );
            positions.insert(d, keep);
        }
        let off = self.complex.direction().offset();
        let mut diffs = BTreeMap::new();
        for (&d, keep) in &positions {
            let tgt = positions.get(&(d + off)).cloned().unwrap_or_default();
            let mut m = crate::matrix::Gf2Matrix::zero(tgt.len(), keep.len());
            let full = self.complex.differential(d);
            for (j, &c) in keep.iter().enumerate() {
                for (i, &r) in tgt.iter().enumerate() {
                    if full.get(r, c) {
                        m.flip(i, j);
                    }
                }
            }
            if !m.is_zero() {
                diffs.insert(d, m);
            }
        }
        ChainComplex::new(self.complex.direction(), labels, diffs)
            .expect("graded piece of a filtered complex is a complex")
    }
}
