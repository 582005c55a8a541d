//! Exhaustive reference computations for cross-checking the elimination
//! code paths.
//!
//! Everything in this module works by enumerating entire GF(2) subspaces as
//! `u64` masks — no Gaussian elimination, no shared helpers with the fast
//! path, only the raw entry lists of the structures under test.  Dimensions
//! are capped accordingly; these functions exist for tests and self-checks,
//! not for production-size inputs.

use std::collections::BTreeSet;

use crate::complex::ChainComplex;
use crate::filtered::FilteredComplex;
use crate::matrix::Gf2Matrix;

/// Largest dimension we are willing to enumerate (2^20 vectors).
const MAX_DIM: usize = 20;

fn apply_entries(entries: &[(usize, usize)], x: u64) -> u64 {
    let mut y = 0u64;
    for &(r, c) in entries {
        if (x >> c) & 1 == 1 {
            y ^= 1 << r;
        }
    }
    y
}

/// log2 of a subspace size obtained by counting (sizes are powers of two).
fn log2_exact(count: usize) -> usize {
    assert!(count.is_power_of_two(), "subspace size must be a power of two");
    count.trailing_zeros() as usize
}

/// Number of distinct XOR combinations of the given masks.
pub fn span_size(vectors: &[u64]) -> usize {
    let mut span: BTreeSet<u64> = BTreeSet::new();
    span.insert(0);
    for &v in vectors {
        let extended: Vec<u64> = span.iter().map(|&s| s ^ v).collect();
        span.extend(extended);
    }
    span.len()
}

/// Dimension of `span(denom + numer) / span(denom)` by counting.
pub fn quotient_rank(denom: &[u64], numer: &[u64]) -> usize {
    let mut all = denom.to_vec();
    all.extend_from_slice(numer);
    log2_exact(span_size(&all)) - log2_exact(span_size(denom))
}

/// Homology ranks of a complex by enumerating cycles and boundary values.
pub fn homology_ranks(cx: &ChainComplex) -> Vec<(i64, usize)> {
    let off = cx.direction().offset();
    let mut degrees: BTreeSet<i64> = cx.degrees().into_iter().collect();
    for d in cx.degrees() {
        degrees.insert(d + off);
    }
    let mut out = Vec::new();
    for d in degrees {
        let n = cx.dim(d);
        if n == 0 {
            continue;
        }
        assert!(n <= MAX_DIM, "oracle dimension cap exceeded");
        let d_out: Vec<(usize, usize)> = cx.differential(d).entries().collect();
        let cycles = (0u64..1 << n)
            .filter(|&x| apply_entries(&d_out, x) == 0)
            .count();
        let m = cx.dim(d - off);
        assert!(m <= MAX_DIM, "oracle dimension cap exceeded");
        let d_in: Vec<(usize, usize)> = cx.differential(d - off).entries().collect();
        let boundaries: BTreeSet<u64> = (0u64..1 << m)
            .map(|x| apply_entries(&d_in, x))
            .collect();
        let rank = log2_exact(cycles) - log2_exact(boundaries.len());
        if rank > 0 {
            out.push((d, rank));
        }
    }
    out
}

/// Set-level exactness of a run of maps between spaces of the given
/// dimensions, padded by zero maps on both ends: at every position the
/// boundary image must equal the kernel, element by element.
pub fn is_exact(dims: &[usize], maps: &[&Gf2Matrix]) -> bool {
    assert_eq!(maps.len() + 1, dims.len().max(1), "one map between each pair");
    for (i, &dim) in dims.iter().enumerate() {
        assert!(dim <= MAX_DIM, "oracle dimension cap exceeded");
        let image: BTreeSet<u64> = if i == 0 {
            BTreeSet::from([0])
        } else {
            let prev: Vec<(usize, usize)> = maps[i - 1].entries().collect();
            (0u64..1 << maps[i - 1].cols())
                .map(|x| apply_entries(&prev, x))
                .collect()
        };
        let kernel: BTreeSet<u64> = if i + 1 == dims.len() {
            (0u64..1 << dim).collect()
        } else {
            let next: Vec<(usize, usize)> = maps[i].entries().collect();
            (0u64..1 << dim)
                .filter(|&x| apply_entries(&next, x) == 0)
                .collect()
        };
        if image != kernel {
            return false;
        }
    }
    true
}

/// Homology ranks of one associated-graded level of a filtered complex,
/// built directly from levels and raw differential entries.
pub fn graded_homology_ranks(fc: &FilteredComplex, p: usize) -> Vec<(i64, usize)> {
    let cx = fc.complex();
    let off = cx.direction().offset();
    // Per degree: ambient positions sitting exactly on level p.
    let positions = |d: i64| -> Vec<usize> {
        cx.labels(d)
            .iter()
            .enumerate()
            .filter(|(_, l)| fc.level_of(l) == Some(p))
            .map(|(i, _)| i)
            .collect()
    };
    // Differential entries rewritten in level-p local coordinates.
    let local_entries = |d: i64| -> Vec<(usize, usize)> {
        let src = positions(d);
        let tgt = positions(d + off);
        let full = cx.differential(d);
        let mut out = Vec::new();
        for (j, &c) in src.iter().enumerate() {
            for (i, &r) in tgt.iter().enumerate() {
                if full.get(r, c) {
                    out.push((i, j));
                }
            }
        }
        out
    };
    let mut degrees: BTreeSet<i64> = cx.degrees().into_iter().collect();
    for d in cx.degrees() {
        degrees.insert(d + off);
    }
    let mut out = Vec::new();
    for d in degrees {
        let n = positions(d).len();
        if n == 0 {
            continue;
        }
        assert!(n <= MAX_DIM, "oracle dimension cap exceeded");
        let fwd = local_entries(d);
        let cycles = (0u64..1 << n)
            .filter(|&x| apply_entries(&fwd, x) == 0)
            .count();
        let m = positions(d - off).len();
        assert!(m <= MAX_DIM, "oracle dimension cap exceeded");
        let back = local_entries(d - off);
        let boundaries: BTreeSet<u64> = (0u64..1 << m)
            .map(|x| apply_entries(&back, x))
            .collect();
        let rank = log2_exact(cycles) - log2_exact(boundaries.len());
        if rank > 0 {
            out.push((d, rank));
        }
    }
    out
}
