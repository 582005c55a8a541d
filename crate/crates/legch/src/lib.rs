//! Legendrian contact homology over GF(2), organized around explicit chord
//! data: differential graded algebras with action filtration, augmentations,
//! linearized complexes, truncation towers, two-copy complexes, duality
//! sequences, and tame moves with their comparison maps.

pub mod aug;
pub mod dga;
pub mod duality;
pub mod error;
pub mod fixtures;
pub mod parse;
pub mod report;
pub mod sft;
pub mod synth;
pub mod two_copy;

pub use aug::{
    enumerate_augmentations, exhaustive_augmentations, linearized_complex,
    poincare_polynomial, survey, Augmentation, AugmentationSurvey,
};
pub use dga::{
    DgaPresentation, DgaReport, Generator, GeneratorKind, Gf2Sum,
    MonotonicityConstants, Word,
};
pub use duality::{
    assemble_duality, corollary_diagram_check, duality_sequence, h_maps_iso_check,
    DiagramMaps, DiagramReport, DualitySequence, DualitySplitting, HMapsReport, LabelMap,
};
pub use error::{LegchError, Result};
pub use parse::{parse_file, parse_str, DualityData, Workspace};
pub use report::{poly_string, LabeledPoly, RankTable, Report, Verdict};
pub use sft::{e1_limit, theorem1_check, E1Report, SftComplex};
pub use synth::{
    death_candidates, random_filtered, random_two_copy, slide_candidates, FilteredInstance,
    DEFAULT_SEED,
};
pub use two_copy::{
    assemble_two_copy, birth_death_move, conjecture_sequence, fillability_check,
    handle_slide_move, homotopy_square_check, join_map_check, ConjectureSequence,
    ConnectingData, FillabilityVerdict, MorseComplexData, MorseRole, TwoCopyComplex,
    TwoCopyParts,
};
