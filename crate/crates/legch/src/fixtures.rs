//! Bundled example inputs, compiled into the library so `selftest` and the
//! documentation examples work without any external files.
//!
//! Each fixture is a complete input file in the format of [`crate::parse`].
//! The expected numbers asserted in this module's tests were computed
//! independently (by enumerating augmentations exhaustively and by counting
//! kernel and image dimensions directly) and then frozen.

use num_rational::Rational64;

use crate::dga::MonotonicityConstants;
use crate::error::{LegchError, Result};
use crate::parse::{parse_str, Workspace};

/// One bundled input with the tower constants and degree window its
/// stabilization checks should use.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    /// Short name used on the command line (`selftest`, docs).
    pub name: &'static str,
    /// File name the text was bundled from.
    pub file: &'static str,
    /// The input text itself.
    pub text: &'static str,
    /// Growth constant `C0` as (numerator, denominator).
    pub c0: (i64, i64),
    /// Growth constant `C1` as (numerator, denominator).
    pub c1: (i64, i64),
    /// Degree window for tower stabilization checks.
    pub degrees: (i64, i64),
}

impl Fixture {
    pub fn constants(&self) -> MonotonicityConstants {
        MonotonicityConstants {
            c0: Rational64::new(self.c0.0, self.c0.1),
            c1: Rational64::new(self.c1.0, self.c1.1),
        }
    }

    /// Parse the bundled text.
    pub fn workspace(&self) -> Result<Workspace> {
        parse_str(self.text)
    }
}

/// Every bundled fixture, in documentation order.
pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "unknot",
        file: "unknot.dga",
        text: include_str!("../fixtures/unknot.dga"),
        c0: (0, 1),
        c1: (1, 1),
        degrees: (-1, 2),
    },
    Fixture {
        name: "trefoil",
        file: "trefoil.dga",
        text: include_str!("../fixtures/trefoil.dga"),
        c0: (-1, 1),
        c1: (1, 1),
        degrees: (-1, 2),
    },
    Fixture {
        name: "stabilized",
        file: "stabilized.dga",
        text: include_str!("../fixtures/stabilized.dga"),
        c0: (0, 1),
        c1: (1, 1),
        degrees: (-1, 2),
    },
    Fixture {
        name: "unknot-disk",
        file: "unknot_disk.tc",
        text: include_str!("../fixtures/unknot_disk.tc"),
        c0: (0, 1),
        c1: (1, 1),
        degrees: (-1, 2),
    },
    Fixture {
        name: "unknot-duality",
        file: "unknot_duality.leg",
        text: include_str!("../fixtures/unknot_duality.leg"),
        c0: (0, 1),
        c1: (1, 1),
        degrees: (-1, 2),
    },
];

/// Look a fixture up by its short name.
pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// Parse a bundled fixture by name; unknown names are an input error.
pub fn workspace(name: &str) -> Result<Workspace> {
    let f = fixture(name).ok_or_else(|| {
        let known: Vec<&str> = FIXTURES.iter().map(|f| f.name).collect();
        LegchError::Precondition(format!(
            "no bundled fixture named `{name}` (known: {})",
            known.join(", ")
        ))
    })?;
    f.workspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aug::{
        enumerate_augmentations, exhaustive_augmentations, poincare_polynomial, survey,
        linearized_complex,
    };
    use crate::duality::{corollary_diagram_check, duality_sequence, h_maps_iso_check};
    use crate::sft::theorem1_check;
    use crate::two_copy::fillability_check;
    use std::collections::BTreeMap;

    #[test]
    fn all_fixtures_parse_and_pass_the_axiom_checks() {
        for f in FIXTURES {
            let ws = f.workspace().unwrap_or_else(|e| panic!("{}: {e}", f.name));
            let report = ws.dga.check();
            assert!(report.ok(), "{}: {:?}", f.name, report.describe());
            assert!(ws.dga.monotonicity_violations(f.constants()).is_empty(), "{}", f.name);
        }
    }

    #[test]
    fn augmentation_counts_are_frozen() {
        // (fixture, graded count, ungraded count)
        for (name, graded, ungraded) in
            [("unknot", 1, 2), ("trefoil", 5, 20), ("stabilized", 0, 0)]
        {
            let ws = workspace(name).unwrap();
            for (flag, want) in [(false, graded), (true, ungraded)] {
                let mut fast = enumerate_augmentations(&ws.dga, flag);
                fast.sort();
                let slow = exhaustive_augmentations(&ws.dga, flag);
                assert_eq!(fast.len(), want, "{name} ungraded={flag}");
                assert_eq!(fast, slow, "{name} ungraded={flag}");
            }
        }
    }

    #[test]
    fn linearized_polynomials_are_frozen() {
        let unknot = workspace("unknot").unwrap();
        let s = survey(&unknot.dga, false).unwrap();
        assert_eq!(s.polynomials, vec![vec![(1, 1)]]);

        let trefoil = workspace("trefoil").unwrap();
        let s = survey(&trefoil.dga, false).unwrap();
        // All five augmentations linearize to the same polynomial 2 + t.
        assert_eq!(s.multiset, BTreeMap::from([(vec![(0, 2), (1, 1)], 5)]));
    }

    #[test]
    fn tower_limits_match_direct_cohomology() {
        for name in ["unknot", "trefoil"] {
            let f = fixture(name).unwrap();
            let ws = f.workspace().unwrap();
            for aug in enumerate_augmentations(&ws.dga, false) {
                let rep = theorem1_check(&ws.dga, &aug, f.constants(), f.degrees).unwrap();
                assert!(rep.chain_map_ok, "{name} {}", aug.describe());
                assert!(rep.ok, "{name} {}: {:?}", aug.describe(), rep.ranks);
            }
        }
    }

    #[test]
    fn cohomology_ranks_match_homology_ranks_degreewise() {
        for name in ["unknot", "trefoil"] {
            let ws = workspace(name).unwrap();
            for aug in enumerate_augmentations(&ws.dga, false) {
                let lin = linearized_complex(&ws.dga, &aug).unwrap();
                let dual = lin.dual();
                assert_eq!(
                    poincare_polynomial(&lin),
                    poincare_polynomial(&dual),
                    "{name} {}",
                    aug.describe()
                );
            }
        }
    }

    #[test]
    fn disk_two_copy_is_acyclic_and_fillability_consistent() {
        let ws = workspace("unknot-disk").unwrap();
        let aug = enumerate_augmentations(&ws.dga, false).remove(0);
        let tc = ws.build_two_copy(&aug).unwrap();
        assert_eq!(tc.total().homology().total_rank(), 0);

        let disk = BTreeMap::from([(0i64, 1usize)]);
        assert!(fillability_check(&ws.dga, None, &disk).unwrap().is_consistent());
        let genus1 = BTreeMap::from([(0i64, 1usize), (1, 2), (2, 1)]);
        assert!(!fillability_check(&ws.dga, None, &genus1).unwrap().is_consistent());
    }

    #[test]
    fn duality_bundle_passes_every_check() {
        let ws = workspace("unknot-duality").unwrap();
        let aug = enumerate_augmentations(&ws.dga, false).remove(0);
        let ds = ws.build_duality(&aug).unwrap();
        let seq = duality_sequence(&ds).unwrap();
        assert!(seq.pairing_ok);
        assert!(h_maps_iso_check(&ds).unwrap().pass());

        let tc = ws.build_two_copy(&aug).unwrap();
        let report = corollary_diagram_check(&ds, &tc, &ws.diagram).unwrap();
        assert!(report.pass, "{:?}", report.squares);
        assert!(report.verticals.iter().all(|&(_, ok)| ok), "{:?}", report.verticals);
    }
}
