//! Exact linear and homological algebra over GF(2).
//!
//! Everything here is exact: vectors are bit vectors, matrices are sparse
//! position sets that densify to packed bit rows for elimination, and all
//! rank / kernel / homology computations are integer-valued with no
//! tolerances anywhere.
//!
//! The homological layer builds on a single [`ChainComplex`] type that covers
//! both chain complexes (differential lowers the degree) and cochain
//! complexes (differential raises it) through a [`Direction`] flag.  On top
//! of that sit chain maps, mapping cones with their long exact sequences,
//! and filtered complexes with the spectral sequence of the filtration.
//!
//! The [`oracle`] module contains deliberately naive reference
//! implementations (exhaustive enumeration of subspaces) used to cross-check
//! the elimination-based code paths in tests and self-tests.  It shares no
//! code with the fast path.

pub mod bits;
pub mod complex;
pub mod cone;
pub mod error;
pub mod filtered;
pub mod les;
pub mod map;
pub mod matrix;
pub mod oracle;
pub mod solve;
pub mod spectral;

pub use bits::BitVec;
pub use complex::{ChainComplex, ComplexBuilder, Direction, Homology};
pub use cone::MappingCone;
pub use error::Gf2Error;
pub use filtered::FilteredComplex;
pub use les::{les_of_subcomplex, LesTerm, LongExactSequence, SubquotientLes};
pub use map::ChainMap;
pub use matrix::Gf2Matrix;
pub use solve::QuotientBasis;
pub use spectral::{Page, SpectralSequence};
