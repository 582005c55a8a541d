//! Randomized cross-checks of the elimination pipeline against exhaustive
//! enumeration, on complexes whose homology is known by construction.
//!
//! The generator emits complexes built from matched generator pairs
//! (`d x = y`) plus free generators, then conjugates the differential by
//! random filtration-preserving transvections.  Conjugation never changes
//! homology ranks, so the free-generator counts are a third, independent
//! source of truth next to the fast path and the enumeration oracle.

use std::collections::{BTreeMap, BTreeSet};

use gf2core::oracle;
use gf2core::{
    les_of_subcomplex, ChainComplex, Direction, FilteredComplex, Gf2Matrix, MappingCone,
    SpectralSequence,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct RandomFiltered {
    fc: FilteredComplex,
    known_ranks: Vec<(i64, usize)>,
}

fn random_filtered(rng: &mut StdRng, direction: Direction) -> RandomFiltered {
    let off = direction.offset();
    let num_levels = rng.gen_range(1..=3usize);
    let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut levels: BTreeMap<String, usize> = BTreeMap::new();
    let mut next_id = 0usize;
    let mut fresh = |labels: &mut BTreeMap<i64, Vec<String>>,
                     levels: &mut BTreeMap<String, usize>,
                     degree: i64,
                     level: usize|
     -> (i64, usize) {
        let name = format!("g{next_id}");
        next_id += 1;
        let list = labels.entry(degree).or_default();
        list.push(name.clone());
        levels.insert(name, level);
        (degree, list.len() - 1)
    };

    let mut pair_entries: Vec<(i64, usize, usize)> = Vec::new(); // (src degree, row, col)
    for _ in 0..rng.gen_range(0..=4usize) {
        let d = rng.gen_range(-2..=2i64);
        // The boundary must not lower the filtration level.
        let from_level = rng.gen_range(1..=num_levels);
        let to_level = rng.gen_range(from_level..=num_levels);
        let (_, col) = fresh(&mut labels, &mut levels, d, from_level);
        let (_, row) = fresh(&mut labels, &mut levels, d + off, to_level);
        pair_entries.push((d, row, col));
    }
    let mut known: BTreeMap<i64, usize> = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=4usize) {
        let d = rng.gen_range(-2..=3i64);
        let level = rng.gen_range(1..=num_levels);
        fresh(&mut labels, &mut levels, d, level);
        *known.entry(d).or_default() += 1;
    }

    let dim = |labels: &BTreeMap<i64, Vec<String>>, d: i64| labels.get(&d).map_or(0, Vec::len);
    let mut diffs: BTreeMap<i64, Gf2Matrix> = BTreeMap::new();
    for (d, row, col) in pair_entries {
        let m = diffs
            .entry(d)
            .or_insert_with(|| Gf2Matrix::zero(dim(&labels, d + off), dim(&labels, d)));
        m.flip(row, col);
    }
    // Every degree needs a correctly shaped matrix before conjugation.
    let degrees: Vec<i64> = labels.keys().copied().collect();
    for &d in &degrees {
        diffs
            .entry(d)
            .or_insert_with(|| Gf2Matrix::zero(dim(&labels, d + off), dim(&labels, d)));
    }

    // Filtration-preserving base changes: P e_j = e_j + e_i needs the level
    // of i to be at least the level of j.  Transvections are self-inverse
    // over GF(2).
    let mut p: BTreeMap<i64, Gf2Matrix> = degrees
        .iter()
        .map(|&d| (d, Gf2Matrix::identity(dim(&labels, d))))
        .collect();
    let mut p_inv = p.clone();
    for _ in 0..rng.gen_range(0..=6usize) {
        let eligible: Vec<i64> = degrees
            .iter()
            .copied()
            .filter(|&d| dim(&labels, d) >= 2)
            .collect();
        if eligible.is_empty() {
            break;
        }
        let d = eligible[rng.gen_range(0..eligible.len())];
        let names = &labels[&d];
        let i = rng.gen_range(0..names.len());
        let j = rng.gen_range(0..names.len());
        if i == j || levels[&names[i]] < levels[&names[j]] {
            continue;
        }
        let n = names.len();
        let mut t = Gf2Matrix::identity(n);
        t.flip(i, j);
        let fwd = t.compose(&p[&d]).unwrap();
        let bwd = p_inv[&d].compose(&t).unwrap();
        p.insert(d, fwd);
        p_inv.insert(d, bwd);
    }
    let mut conjugated: BTreeMap<i64, Gf2Matrix> = BTreeMap::new();
    for &d in &degrees {
        let m = p
            .get(&(d + off))
            .map_or_else(
                || Gf2Matrix::identity(dim(&labels, d + off)),
                Clone::clone,
            )
            .compose(&diffs[&d])
            .unwrap()
            .compose(&p_inv[&d])
            .unwrap();
        if !m.is_zero() {
            conjugated.insert(d, m);
        }
    }

    let cx = ChainComplex::new(direction, labels, conjugated).expect("conjugation preserves d^2");
    let fc = FilteredComplex::new(cx, levels, num_levels).expect("transvections preserve levels");
    RandomFiltered {
        fc,
        known_ranks: known.into_iter().filter(|&(_, r)| r > 0).collect(),
    }
}

fn directions() -> [Direction; 2] {
    [Direction::Down, Direction::Up]
}

#[test]
fn homology_matches_construction_and_enumeration() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for case in 0..60 {
        for dir in directions() {
            let r = random_filtered(&mut rng, dir);
            let fast = r.fc.complex().homology().ranks();
            assert_eq!(fast, r.known_ranks, "known ranks, case {case} {dir}");
            assert_eq!(
                fast,
                oracle::homology_ranks(r.fc.complex()),
                "enumeration, case {case} {dir}"
            );
        }
    }
}

#[test]
fn classic_small_spaces() {
    // Real projective plane with one cell per dimension: over GF(2) the
    // boundary maps vanish except d(e) = 0, d(f) = 0 after reduction, so
    // every degree contributes one class.
    let rp2 = ChainComplex::builder(Direction::Down)
        .generator(0, "v")
        .generator(1, "e")
        .generator(2, "f")
        .build()
        .unwrap();
    assert_eq!(rp2.homology().ranks(), vec![(0, 1), (1, 1), (2, 1)]);
    assert_eq!(oracle::homology_ranks(&rp2), vec![(0, 1), (1, 1), (2, 1)]);

    // Two-sphere as two points cone-d twice: vertices N,S; edges a,b; faces
    // u,w with d(u) = d(w) = a + b.
    let s2 = ChainComplex::builder(Direction::Down)
        .generator(0, "N")
        .generator(0, "S")
        .generator(1, "a")
        .generator(1, "b")
        .generator(2, "u")
        .generator(2, "w")
        .boundary("a", &["N", "S"])
        .boundary("b", &["N", "S"])
        .boundary("u", &["a", "b"])
        .boundary("w", &["a", "b"])
        .build()
        .unwrap();
    assert_eq!(s2.homology().ranks(), vec![(0, 1), (2, 1)]);
    assert_eq!(oracle::homology_ranks(&s2), vec![(0, 1), (2, 1)]);
}

#[test]
fn subcomplex_sequences_are_exact_by_enumeration() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for case in 0..40 {
        for dir in directions() {
            let r = random_filtered(&mut rng, dir);
            let top = r.fc.num_levels();
            let selected: BTreeSet<String> = r
                .fc
                .complex()
                .degrees()
                .into_iter()
                .flat_map(|d| r.fc.complex().labels(d).to_vec())
                .filter(|l| r.fc.level_of(l) == Some(top))
                .collect();
            let cut = les_of_subcomplex(r.fc.complex(), &selected, ("deep", "all", "rest"))
                .expect("top level spans a subcomplex");
            cut.les.verify_exact().unwrap_or_else(|e| {
                panic!("case {case} {dir}: sequence not exact: {e}");
            });
            let dims: Vec<usize> = cut.les.terms().iter().map(|t| t.dim).collect();
            let maps: Vec<&Gf2Matrix> = cut.les.maps().iter().collect();
            assert!(
                oracle::is_exact(&dims, &maps),
                "case {case} {dir}: enumeration disagrees on exactness"
            );
        }
    }
}

#[test]
fn spectral_pages_verify_and_first_page_matches_enumeration() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for case in 0..30 {
        for dir in directions() {
            let r = random_filtered(&mut rng, dir);
            let ss = SpectralSequence::new(&r.fc).expect("pages computable");
            ss.verify(&r.fc)
                .unwrap_or_else(|e| panic!("case {case} {dir}: {e}"));
            let first = ss.page(1).unwrap();
            for p in 1..=r.fc.num_levels() {
                let by_enumeration = oracle::graded_homology_ranks(&r.fc, p);
                let mut degrees: BTreeSet<i64> =
                    by_enumeration.iter().map(|&(n, _)| n).collect();
                degrees.extend(
                    first
                        .entries()
                        .filter(|((q, _), _)| *q == p as i64)
                        .map(|((_, n), _)| n),
                );
                for n in degrees {
                    let want = by_enumeration
                        .iter()
                        .find(|&&(m, _)| m == n)
                        .map_or(0, |&(_, r)| r);
                    assert_eq!(
                        first.rank(p as i64, n),
                        want,
                        "case {case} {dir}: first page at (p={p}, n={n})"
                    );
                }
            }
        }
    }
}

#[test]
fn cones_detect_homotopy_class_of_random_maps() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    for case in 0..40 {
        for dir in directions() {
            let r = random_filtered(&mut rng, dir);
            let cx = r.fc.complex();
            let off = dir.offset();
            // A random null-homotopy r gives the chain map dr + rd; adding
            // the identity toggles the homotopy class.
            let mut h: BTreeMap<i64, Gf2Matrix> = BTreeMap::new();
            for d in cx.degrees() {
                let rows = cx.dim(d - off);
                let cols = cx.dim(d);
                let mut m = Gf2Matrix::zero(rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        if rng.gen_bool(0.3) {
                            m.flip(i, j);
                        }
                    }
                }
                if !m.is_zero() {
                    h.insert(d, m);
                }
            }
            let with_identity = rng.gen_bool(0.5);
            let mut components: BTreeMap<i64, Gf2Matrix> = BTreeMap::new();
            for d in cx.degrees() {
                let shape = Gf2Matrix::zero(cx.dim(d), cx.dim(d));
                let h_here = h.get(&d).cloned().unwrap_or_else(|| {
                    Gf2Matrix::zero(cx.dim(d - off), cx.dim(d))
                });
                let h_next = h.get(&(d + off)).cloned().unwrap_or_else(|| {
                    Gf2Matrix::zero(cx.dim(d), cx.dim(d + off))
                });
                let dr = cx.differential(d - off).compose(&h_here).unwrap();
                let rd = h_next.compose(&cx.differential(d)).unwrap();
                let mut m = shape.add(&dr).unwrap().add(&rd).unwrap();
                if with_identity {
                    m = m.add(&Gf2Matrix::identity(cx.dim(d))).unwrap();
                }
                if !m.is_zero() {
                    components.insert(d, m);
                }
            }
            let f = gf2core::ChainMap::new(cx, cx, 0, components)
                .expect("dr + rd always commutes with d");
            let cone = MappingCone::new(&f).expect("cone of a chain map");
            cone.les()
                .verify_exact()
                .unwrap_or_else(|e| panic!("case {case} {dir}: cone sequence: {e}"));
            cone.verify_connecting(&f)
                .unwrap_or_else(|e| panic!("case {case} {dir}: {e}"));
            let h_ranks = cx.homology().ranks();
            if with_identity {
                // Homotopic to the identity: a quasi-isomorphism.
                assert!(
                    cone.is_acyclic(),
                    "case {case} {dir}: cone of homotopy-identity not acyclic"
                );
            } else {
                // Null-homotopic: the cone stacks both homologies.
                let total: usize = h_ranks.iter().map(|&(_, r)| r).sum();
                assert_eq!(
                    cone.complex().homology().total_rank(),
                    2 * total,
                    "case {case} {dir}: cone of null-homotopic map"
                );
            }
        }
    }
}
