//! Line-oriented reader for the plain-text input format.
//!
//! One file carries everything a command needs: the chord presentation at
//! the top, then optional bracketed sections with Morse data for the
//! two-copy complex, a three-block splitting of the dual complex, and
//! override maps for the comparison diagrams.  `#` starts a comment, blank
//! lines are ignored, and tokens are whitespace-separated.
//!
//! Top level (before any section header):
//!
//! ```text
//! ambient n 2
//! gen a deg 1 action 1/2          # optional: mixed <i> <j>, trailing !long
//! d a = b c + 1                   # terms are words, `1` (unit), or `0`
//! ```
//!
//! Two-copy sections:
//!
//! ```text
//! [morse lambda]                  # degree-raising Morse complex of the link
//! crit m index 0 !short           # the !short tag is optional annotation
//! d m = e                         # terms must be single critical points
//! [morse filling]                 # degree-raising Morse complex of the filling
//! crit p index -2
//! [connect short]                 # short chords -> long chords
//! row m = a
//! [connect rho]                   # filling points -> chords
//! row p = e
//! ```
//!
//! Duality sections — three degree-lowering blocks, a pairing between the
//! outer two, and the gluing maps between blocks:
//!
//! ```text
//! [block q]
//! gen a deg 1
//! pair a pa                       # q-generator paired with p-generator
//! [block c]
//! gen m deg 0
//! d m = e                         # terms must be single generators
//! [block p]
//! gen pa deg -2
//! [map rho]                       # q -> c, degree -1
//! row a = m
//! [map sigma]                     # c -> p, degree -1
//! [map eta]                       # q -> p, degree -1
//! ```
//!
//! Diagram override sections `[map vert]`, `[map delta]`,
//! `[map delta-prime]` and `[map h]` use the same `row` grammar and replace
//! the default vertical maps of the comparison diagrams.
//!
//! Parsing is strict: unknown sections or directives, malformed numbers,
//! duplicate declarations, and references to undeclared names are rejected
//! with a line and column.  Structural mathematics (squaring to zero,
//! acyclicity, pairing bijectivity) is *not* checked here — broken inputs
//! load fine and fail later in the assembly or check that needs the
//! property, so the report can say which property failed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use gf2core::{ChainComplex, Direction};
use num_rational::Rational64;
use sha2::{Digest, Sha256};

use crate::aug::{linearized_complex, Augmentation};
use crate::dga::{DgaPresentation, Generator, GeneratorKind, Gf2Sum};
use crate::duality::{assemble_duality, DiagramMaps, DualitySplitting, LabelMap};
use crate::error::{LegchError, Result};
use crate::two_copy::{
    assemble_two_copy, ConnectingData, MorseComplexData, MorseRole, TwoCopyComplex,
};

/// The three-block splitting of the dual complex, as declared in the file.
///
/// `q` repeats the expected linearized complex, `c` is the degree-lowering
/// Morse block, `p` pairs off against `q`, and `rho`/`sigma`/`eta` are the
/// lower-triangular gluing maps.  Assembly against a concrete augmentation
/// happens in [`Workspace::build_duality`].
#[derive(Debug, Clone)]
pub struct DualityData {
    pub q: ChainComplex,
    pub c: MorseComplexData,
    pub p: ChainComplex,
    pub pairing: BTreeMap<String, String>,
    pub rho: LabelMap,
    pub sigma: LabelMap,
    pub eta: LabelMap,
}

/// Everything one input file declares, parsed and resolved.
///
/// The workspace is immutable after loading; commands borrow from it and
/// assemble what they need per augmentation.
#[derive(Debug, Clone)]
pub struct Workspace {
    /// The chord presentation from the top of the file.
    pub dga: DgaPresentation,
    /// Chords tagged `!long` on their `gen` lines.
    pub long_tags: BTreeSet<String>,
    /// `[morse lambda]` section, if present (degree-raising).
    pub morse_lambda: Option<MorseComplexData>,
    /// `[morse filling]` section, if present (degree-raising).
    pub morse_filling: Option<MorseComplexData>,
    /// Rows of `[connect short]` and `[connect rho]` (empty maps if absent).
    pub connecting: ConnectingData,
    /// The `[block ...]`/`[map rho|sigma|eta]` sections, if present.
    pub duality: Option<DualityData>,
    /// Diagram override maps; fields are `None` for absent sections.
    pub diagram: DiagramMaps,
    /// Hex SHA-256 of the raw input text, echoed into reports.
    pub source_sha256: String,
}

impl Workspace {
    /// Assemble the two-copy complex for one augmentation.  Needs both
    /// `[morse ...]` sections.
    pub fn build_two_copy(&self, aug: &Augmentation) -> Result<TwoCopyComplex> {
        let (lambda, filling) = match (&self.morse_lambda, &self.morse_filling) {
            (Some(l), Some(f)) => (l, f),
            _ => {
                return Err(LegchError::Precondition(
                    "this command needs both [morse lambda] and [morse filling] sections"
                        .to_string(),
                ))
            }
        };
        assemble_two_copy(&self.dga, aug, &self.long_tags, lambda, filling, &self.connecting)
    }

    /// Assemble the duality splitting for one augmentation.  Needs the
    /// `[block ...]` sections.
    pub fn build_duality(&self, aug: &Augmentation) -> Result<DualitySplitting> {
        let data = self.duality.as_ref().ok_or_else(|| {
            LegchError::Precondition(
                "this command needs the [block q], [block c] and [block p] sections".to_string(),
            )
        })?;
        let lin = linearized_complex(&self.dga, aug)?;
        assemble_duality(
            &lin,
            &data.q,
            &data.c,
            &data.p,
            &data.pairing,
            &data.rho,
            &data.sigma,
            &data.eta,
        )
    }
}

/// Parse a file from disk.  I/O problems surface as input errors.
pub fn parse_file(path: &Path) -> Result<Workspace> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text)
}

/// Parse input text into a [`Workspace`].
pub fn parse_str(text: &str) -> Result<Workspace> {
    let mut p = Parser::default();
    for (idx, raw) in text.lines().enumerate() {
        p.line(idx + 1, raw)?;
    }
    p.finish(text)
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> LegchError {
    LegchError::Parse { line, col, msg: msg.into() }
}

/// Tokens with their 1-based starting column, comments stripped.
fn tokenize(content: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &content[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &content[s..]));
    }
    out
}

fn parse_i64(line: usize, col: usize, s: &str) -> Result<i64> {
    s.parse()
        .map_err(|_| perr(line, col, format!("expected an integer, found `{s}`")))
}

fn parse_usize(line: usize, col: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| perr(line, col, format!("expected a component index, found `{s}`")))
}

fn parse_rational(line: usize, col: usize, s: &str) -> Result<Rational64> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let bad = || perr(line, col, format!("expected a rational like 3/4, found `{s}`"));
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(perr(line, col, format!("zero denominator in `{s}`")));
    }
    Ok(Rational64::new(num, den))
}

/// Declared names may not collide with the term literals `0` and `1` or
/// with grammar punctuation.
fn check_decl_name(line: usize, col: usize, s: &str) -> Result<()> {
    if s == "0" || s == "1" {
        return Err(perr(line, col, format!("`{s}` is reserved and cannot name a generator")));
    }
    if s == "=" || s == "+" || s.starts_with('!') || s.starts_with('[') {
        return Err(perr(line, col, format!("`{s}` is not a valid name")));
    }
    Ok(())
}

/// Which section the cursor is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Top,
    MorseLambda,
    MorseFilling,
    ConnectRho,
    ConnectShort,
    BlockQ,
    BlockC,
    BlockP,
    MapRho,
    MapSigma,
    MapEta,
    MapVert,
    MapDelta,
    MapDeltaPrime,
    MapH,
}

impl Section {
    fn header(self) -> &'static str {
        match self {
            Section::Top => "(top level)",
            Section::MorseLambda => "[morse lambda]",
            Section::MorseFilling => "[morse filling]",
            Section::ConnectRho => "[connect rho]",
            Section::ConnectShort => "[connect short]",
            Section::BlockQ => "[block q]",
            Section::BlockC => "[block c]",
            Section::BlockP => "[block p]",
            Section::MapRho => "[map rho]",
            Section::MapSigma => "[map sigma]",
            Section::MapEta => "[map eta]",
            Section::MapVert => "[map vert]",
            Section::MapDelta => "[map delta]",
            Section::MapDeltaPrime => "[map delta-prime]",
            Section::MapH => "[map h]",
        }
    }
}

/// A `d`/`row` right-hand side kept with positions for late validation.
#[derive(Debug)]
struct RawRow {
    line: usize,
    col: usize,
    src: String,
    targets: Vec<(usize, String)>,
}

/// One term of a top-level differential.
#[derive(Debug)]
enum RawTerm {
    Unit,
    Word(Vec<(usize, String)>),
}

#[derive(Debug)]
struct DgaRow {
    line: usize,
    col: usize,
    src: String,
    terms: Vec<RawTerm>,
}

/// Generators and boundary rows of one Morse section or duality block.
#[derive(Debug, Default)]
struct RawComplex {
    present: bool,
    gens: Vec<(String, i64)>,
    names: BTreeSet<String>,
    rows: Vec<RawRow>,
    seen_d: BTreeSet<String>,
}

impl RawComplex {
    fn declare(&mut self, line: usize, col: usize, name: &str, degree: i64) -> Result<()> {
        check_decl_name(line, col, name)?;
        if !self.names.insert(name.to_string()) {
            return Err(perr(line, col, format!("duplicate declaration of `{name}`")));
        }
        self.gens.push((name.to_string(), degree));
        Ok(())
    }
}

/// Rows of one `[map ...]` or `[connect ...]` section.
#[derive(Debug, Default)]
struct RawMap {
    present: bool,
    rows: Vec<RawRow>,
    seen: BTreeSet<String>,
}

impl RawMap {
    fn push(&mut self, row: RawRow) -> Result<()> {
        if !self.seen.insert(row.src.clone()) {
            return Err(perr(row.line, row.col, format!("duplicate row for `{}`", row.src)));
        }
        self.rows.push(row);
        Ok(())
    }

    fn into_label_map(self) -> LabelMap {
        self.rows
            .into_iter()
            .map(|r| (r.src, r.targets.into_iter().map(|(_, t)| t).collect()))
            .collect()
    }
}

#[derive(Debug, Default)]
struct Parser {
    section: Option<Section>,
    seen_headers: BTreeSet<&'static str>,
    ambient: Option<i64>,
    gens: Vec<Generator>,
    gen_names: BTreeSet<String>,
    long_tags: BTreeSet<String>,
    dga_rows: Vec<DgaRow>,
    dga_seen: BTreeSet<String>,
    lambda: RawComplex,
    filling: RawComplex,
    block_q: RawComplex,
    block_c: RawComplex,
    block_p: RawComplex,
    conn_short: RawMap,
    conn_rho: RawMap,
    map_rho: RawMap,
    map_sigma: RawMap,
    map_eta: RawMap,
    map_vert: RawMap,
    map_delta: RawMap,
    map_delta_prime: RawMap,
    map_h: RawMap,
    pairs: Vec<(usize, usize, String, usize, String)>,
    first_duality: Option<(usize, usize)>,
}

impl Parser {
    fn line(&mut self, line: usize, raw: &str) -> Result<()> {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            return Ok(());
        }
        if trimmed.starts_with('[') {
            let col = content.find('[').map(|i| i + 1).unwrap_or(1);
            return self.section_header(line, col, trimmed);
        }
        let toks = tokenize(content);
        let section = self.section.unwrap_or(Section::Top);
        let (dcol, directive) = toks[0];
        match (section, directive) {
            (Section::Top, "ambient") => self.ambient_line(line, &toks),
            (Section::Top, "gen") => self.gen_line_top(line, &toks),
            (Section::Top, "d") => self.d_line_top(line, &toks),
            (Section::MorseLambda, "crit") => self.crit_line(line, &toks, true),
            (Section::MorseFilling, "crit") => self.crit_line(line, &toks, false),
            (Section::MorseLambda, "d") | (Section::MorseFilling, "d") => {
                let row = linear_row(line, &toks, "d")?;
                let cx = if section == Section::MorseLambda { &mut self.lambda } else { &mut self.filling };
                if !cx.seen_d.insert(row.src.clone()) {
                    return Err(perr(row.line, row.col, format!("duplicate `d` line for `{}`", row.src)));
                }
                cx.rows.push(row);
                Ok(())
            }
            (Section::ConnectShort, "row") => self.conn_short.push(linear_row(line, &toks, "row")?),
            (Section::ConnectRho, "row") => self.conn_rho.push(linear_row(line, &toks, "row")?),
            (Section::BlockQ, "gen") | (Section::BlockC, "gen") | (Section::BlockP, "gen") => {
                self.block_gen_line(line, &toks, section)
            }
            (Section::BlockQ, "d") | (Section::BlockC, "d") | (Section::BlockP, "d") => {
                let row = linear_row(line, &toks, "d")?;
                let cx = match section {
                    Section::BlockQ => &mut self.block_q,
                    Section::BlockC => &mut self.block_c,
                    _ => &mut self.block_p,
                };
                if !cx.seen_d.insert(row.src.clone()) {
                    return Err(perr(row.line, row.col, format!("duplicate `d` line for `{}`", row.src)));
                }
                cx.rows.push(row);
                Ok(())
            }
            (Section::BlockQ, "pair") | (Section::BlockC, "pair") | (Section::BlockP, "pair") => {
                self.pair_line(line, &toks)
            }
            (Section::MapRho, "row") => self.map_rho.push(linear_row(line, &toks, "row")?),
            (Section::MapSigma, "row") => self.map_sigma.push(linear_row(line, &toks, "row")?),
            (Section::MapEta, "row") => self.map_eta.push(linear_row(line, &toks, "row")?),
            (Section::MapVert, "row") => self.map_vert.push(linear_row(line, &toks, "row")?),
            (Section::MapDelta, "row") => self.map_delta.push(linear_row(line, &toks, "row")?),
            (Section::MapDeltaPrime, "row") => {
                self.map_delta_prime.push(linear_row(line, &toks, "row")?)
            }
            (Section::MapH, "row") => self.map_h.push(linear_row(line, &toks, "row")?),
            _ => Err(perr(
                line,
                dcol,
                format!("unknown directive `{directive}` in {}", section.header()),
            )),
        }
    }

    fn section_header(&mut self, line: usize, col: usize, trimmed: &str) -> Result<()> {
        if !trimmed.ends_with(']') {
            return Err(perr(line, col, "unclosed section header"));
        }
        let inner: String = trimmed[1..trimmed.len() - 1]
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        let section = match inner.as_str() {
            "morse lambda" => Section::MorseLambda,
            "morse filling" => Section::MorseFilling,
            "connect rho" => Section::ConnectRho,
            "connect short" => Section::ConnectShort,
            "block q" => Section::BlockQ,
            "block c" => Section::BlockC,
            "block p" => Section::BlockP,
            "map rho" => Section::MapRho,
            "map sigma" => Section::MapSigma,
            "map eta" => Section::MapEta,
            "map vert" => Section::MapVert,
            "map delta" => Section::MapDelta,
            "map delta-prime" => Section::MapDeltaPrime,
            "map h" => Section::MapH,
            other => return Err(perr(line, col, format!("unknown section `[{other}]`"))),
        };
        if !self.seen_headers.insert(section.header()) {
            return Err(perr(line, col, format!("section `{}` appears twice", section.header())));
        }
        match section {
            Section::MorseLambda => self.lambda.present = true,
            Section::MorseFilling => self.filling.present = true,
            Section::ConnectShort => self.conn_short.present = true,
            Section::ConnectRho => self.conn_rho.present = true,
            Section::BlockQ => self.block_q.present = true,
            Section::BlockC => self.block_c.present = true,
            Section::BlockP => self.block_p.present = true,
            Section::MapRho => self.map_rho.present = true,
            Section::MapSigma => self.map_sigma.present = true,
            Section::MapEta => self.map_eta.present = true,
            Section::MapVert => self.map_vert.present = true,
            Section::MapDelta => self.map_delta.present = true,
            Section::MapDeltaPrime => self.map_delta_prime.present = true,
            Section::MapH => self.map_h.present = true,
            Section::Top => {}
        }
        if matches!(
            section,
            Section::BlockQ
                | Section::BlockC
                | Section::BlockP
                | Section::MapRho
                | Section::MapSigma
                | Section::MapEta
        ) && self.first_duality.is_none()
        {
            self.first_duality = Some((line, col));
        }
        self.section = Some(section);
        Ok(())
    }

    fn ambient_line(&mut self, line: usize, toks: &[(usize, &str)]) -> Result<()> {
        if toks.len() != 3 || toks[1].1 != "n" {
            return Err(perr(line, toks[0].0, "expected `ambient n <integer>`"));
        }
        let n = parse_i64(line, toks[2].0, toks[2].1)?;
        if self.ambient.replace(n).is_some() {
            return Err(perr(line, toks[0].0, "ambient dimension declared twice"));
        }
        Ok(())
    }

    fn gen_line_top(&mut self, line: usize, toks: &[(usize, &str)]) -> Result<()> {
        if toks.len() < 6 || toks[2].1 != "deg" || toks[4].1 != "action" {
            return Err(perr(
                line,
                toks[0].0,
                "expected `gen <name> deg <int> action <rational>`",
            ));
        }
        let (ncol, name) = toks[1];
        check_decl_name(line, ncol, name)?;
        if !self.gen_names.insert(name.to_string()) {
            return Err(perr(line, ncol, format!("duplicate generator `{name}`")));
        }
        let degree = parse_i64(line, toks[3].0, toks[3].1)?;
        let action = parse_rational(line, toks[5].0, toks[5].1)?;
        if action <= Rational64::from_integer(0) {
            return Err(LegchError::NonPositiveAction(name.to_string()));
        }
        let mut kind = GeneratorKind::Pure;
        let mut tagged_long = false;
        let mut i = 6;
        while i < toks.len() {
            let (col, tok) = toks[i];
            match tok {
                "mixed" if kind == GeneratorKind::Pure => {
                    if i + 2 >= toks.len() {
                        return Err(perr(line, col, "expected `mixed <i> <j>`"));
                    }
                    let a = parse_usize(line, toks[i + 1].0, toks[i + 1].1)?;
                    let b = parse_usize(line, toks[i + 2].0, toks[i + 2].1)?;
                    if a == b {
                        return Err(perr(
                            line,
                            toks[i + 1].0,
                            "mixed chords need two distinct component indices",
                        ));
                    }
                    kind = GeneratorKind::Mixed(a, b);
                    i += 3;
                }
                "!long" if !tagged_long => {
                    tagged_long = true;
                    self.long_tags.insert(name.to_string());
                    i += 1;
                }
                other => {
                    return Err(perr(line, col, format!("unexpected token `{other}` on gen line")))
                }
            }
        }
        self.gens.push(Generator {
            name: name.to_string(),
            degree,
            action,
            kind,
        });
        Ok(())
    }

    fn d_line_top(&mut self, line: usize, toks: &[(usize, &str)]) -> Result<()> {
        if toks.len() < 3 || toks[2].1 != "=" {
            return Err(perr(line, toks[0].0, "expected `d <name> = <terms>`"));
        }
        let (col, src) = toks[1];
        if !self.dga_seen.insert(src.to_string()) {
            return Err(perr(line, col, format!("duplicate `d` line for `{src}`")));
        }
        let groups = split_terms(line, toks[2].0, &toks[3..])?;
        let mut terms = Vec::new();
        for group in &groups {
            match term_kind(line, group)? {
                TermKind::Zero => {
                    if groups.len() > 1 {
                        return Err(perr(line, group[0].0, "`0` must stand alone"));
                    }
                }
                TermKind::Unit => terms.push(RawTerm::Unit),
                TermKind::Names => terms.push(RawTerm::Word(
                    group.iter().map(|&(c, t)| (c, t.to_string())).collect(),
                )),
            }
        }
        self.dga_rows.push(DgaRow { line, col, src: src.to_string(), terms });
        Ok(())
    }

    fn crit_line(&mut self, line: usize, toks: &[(usize, &str)], lambda: bool) -> Result<()> {
        if toks.len() < 4 || toks[2].1 != "index" {
            return Err(perr(line, toks[0].0, "expected `crit <name> index <int>`"));
        }
        let (ncol, name) = toks[1];
        let index = parse_i64(line, toks[3].0, toks[3].1)?;
        match toks.get(4) {
            None => {}
            Some(&(col, "!short")) if lambda && toks.len() == 5 => {
                let _ = col; // annotation only; short chords are exactly the lambda crits
            }
            Some(&(col, tok)) => {
                return Err(perr(line, col, format!("unexpected token `{tok}` on crit line")))
            }
        }
        let cx = if lambda { &mut self.lambda } else { &mut self.filling };
        cx.declare(line, ncol, name, index)
    }

    fn block_gen_line(&mut self, line: usize, toks: &[(usize, &str)], section: Section) -> Result<()> {
        if toks.len() != 4 || toks[2].1 != "deg" {
            return Err(perr(line, toks[0].0, "expected `gen <name> deg <int>`"));
        }
        let (ncol, name) = toks[1];
        let degree = parse_i64(line, toks[3].0, toks[3].1)?;
        let cx = match section {
            Section::BlockQ => &mut self.block_q,
            Section::BlockC => &mut self.block_c,
            _ => &mut self.block_p,
        };
        cx.declare(line, ncol, name, degree)
    }

    fn pair_line(&mut self, line: usize, toks: &[(usize, &str)]) -> Result<()> {
        if toks.len() != 3 {
            return Err(perr(line, toks[0].0, "expected `pair <q-name> <p-name>`"));
        }
        if self.first_duality.is_none() {
            self.first_duality = Some((line, toks[0].0));
        }
        self.pairs.push((
            line,
            toks[1].0,
            toks[1].1.to_string(),
            toks[2].0,
            toks[2].1.to_string(),
        ));
        Ok(())
    }

    fn finish(self, text: &str) -> Result<Workspace> {
        let Parser {
            ambient,
            gens,
            gen_names,
            long_tags,
            dga_rows,
            lambda,
            filling,
            block_q,
            block_c,
            block_p,
            conn_short,
            conn_rho,
            map_rho,
            map_sigma,
            map_eta,
            map_vert,
            map_delta,
            map_delta_prime,
            map_h,
            pairs,
            first_duality,
            ..
        } = self;

        let ambient = ambient.ok_or(LegchError::MissingAmbient)?;

        // Resolve top-level differentials now that every generator is known.
        let mut diffs: BTreeMap<String, Gf2Sum> = BTreeMap::new();
        for row in dga_rows {
            if !gen_names.contains(&row.src) {
                return Err(perr(
                    row.line,
                    row.col,
                    format!("unknown generator `{}`", row.src),
                ));
            }
            let mut sum = Gf2Sum::zero();
            for term in row.terms {
                match term {
                    RawTerm::Unit => sum.toggle(Vec::new()),
                    RawTerm::Word(letters) => {
                        for (col, letter) in &letters {
                            if !gen_names.contains(letter) {
                                return Err(perr(
                                    row.line,
                                    *col,
                                    format!("unknown generator `{letter}`"),
                                ));
                            }
                        }
                        sum.toggle(letters.into_iter().map(|(_, l)| l).collect());
                    }
                }
            }
            if !sum.is_zero() {
                diffs.insert(row.src, sum);
            }
        }
        let dga = DgaPresentation::new(ambient, gens, diffs)?;

        let morse_lambda = build_morse(&lambda, MorseRole::Lambda, Direction::Up, "critical point")?;
        let morse_filling =
            build_morse(&filling, MorseRole::Filling, Direction::Up, "critical point")?;

        // Connection rows: shorts map into the presentation's chords, points
        // into short or long chords.
        let lambda_names = &lambda.names;
        let filling_names = &filling.names;
        for row in &conn_short.rows {
            require_name(row.line, row.col, &row.src, lambda_names, "critical point of [morse lambda]")?;
            for (col, t) in &row.targets {
                require_name(row.line, *col, t, &gen_names, "chord generator")?;
            }
        }
        for row in &conn_rho.rows {
            require_name(row.line, row.col, &row.src, filling_names, "critical point of [morse filling]")?;
            for (col, t) in &row.targets {
                if !lambda_names.contains(t) && !gen_names.contains(t) {
                    return Err(perr(row.line, *col, format!("`{t}` is not a chord or critical point")));
                }
            }
        }
        let connecting = ConnectingData {
            short_to_long: conn_short.into_label_map(),
            point_to_chord: conn_rho.into_label_map(),
        };

        // Duality blocks: either absent entirely or all three declared.
        let any_duality = first_duality.is_some();
        let duality = if any_duality {
            let (dl, dc) = first_duality.unwrap();
            if !(block_q.present && block_c.present && block_p.present) {
                return Err(perr(
                    dl,
                    dc,
                    "duality data is incomplete: [block q], [block c] and [block p] are all required",
                ));
            }
            let q = build_chain(&block_q, Direction::Down, "block generator")?;
            let c_cx = build_chain(&block_c, Direction::Down, "block generator")?;
            let c = MorseComplexData::new(MorseRole::Lambda, c_cx)?;
            let p = build_chain(&block_p, Direction::Down, "block generator")?;
            let mut pairing = BTreeMap::new();
            for (line, qcol, qn, pcol, pn) in pairs {
                require_name(line, qcol, &qn, &block_q.names, "generator of [block q]")?;
                require_name(line, pcol, &pn, &block_p.names, "generator of [block p]")?;
                if pairing.insert(qn.clone(), pn).is_some() {
                    return Err(perr(line, qcol, format!("`{qn}` is paired twice")));
                }
            }
            check_map_rows(&map_rho, &block_q.names, &block_c.names, "q", "c")?;
            check_map_rows(&map_sigma, &block_c.names, &block_p.names, "c", "p")?;
            check_map_rows(&map_eta, &block_q.names, &block_p.names, "q", "p")?;
            Some(DualityData {
                q,
                c,
                p,
                pairing,
                rho: map_rho.into_label_map(),
                sigma: map_sigma.into_label_map(),
                eta: map_eta.into_label_map(),
            })
        } else {
            None
        };

        // Diagram overrides may mention any declared name; precise domain
        // checks happen where the maps are used.
        let mut all_names = gen_names.clone();
        all_names.extend(lambda.names.iter().cloned());
        all_names.extend(filling.names.iter().cloned());
        all_names.extend(block_q.names.iter().cloned());
        all_names.extend(block_c.names.iter().cloned());
        all_names.extend(block_p.names.iter().cloned());
        let mut diagram = DiagramMaps::default();
        for (acc, slot) in [
            (map_vert, &mut diagram.vert),
            (map_delta, &mut diagram.delta),
            (map_delta_prime, &mut diagram.delta_prime),
            (map_h, &mut diagram.h),
        ] {
            if !acc.present {
                continue;
            }
            for row in &acc.rows {
                require_name(row.line, row.col, &row.src, &all_names, "declared name")?;
                for (col, t) in &row.targets {
                    require_name(row.line, *col, t, &all_names, "declared name")?;
                }
            }
            *slot = Some(acc.into_label_map());
        }

        let source_sha256 = format!("{:x}", Sha256::digest(text.as_bytes()));
        Ok(Workspace {
            dga,
            long_tags,
            morse_lambda,
            morse_filling,
            connecting,
            duality,
            diagram,
            source_sha256,
        })
    }
}

/// Split the tokens after `=` into `+`-separated groups.
fn split_terms<'a>(
    line: usize,
    eq_col: usize,
    toks: &[(usize, &'a str)],
) -> Result<Vec<Vec<(usize, &'a str)>>> {
    let mut groups: Vec<Vec<(usize, &'a str)>> = vec![Vec::new()];
    for &(col, tok) in toks {
        if tok == "+" {
            if groups.last().unwrap().is_empty() {
                return Err(perr(line, col, "misplaced `+`"));
            }
            groups.push(Vec::new());
        } else {
            groups.last_mut().unwrap().push((col, tok));
        }
    }
    if groups.last().unwrap().is_empty() {
        let col = toks.last().map(|&(c, _)| c).unwrap_or(eq_col);
        return Err(perr(line, col, "missing term after `=` or `+`"));
    }
    Ok(groups)
}

enum TermKind {
    Zero,
    Unit,
    Names,
}

/// Classify one `+`-group: the literals `0` and `1` must stand alone.
fn term_kind(line: usize, group: &[(usize, &str)]) -> Result<TermKind> {
    let lone = group.len() == 1;
    for &(col, tok) in group {
        if tok == "0" {
            if !lone {
                return Err(perr(line, col, "`0` must stand alone"));
            }
            return Ok(TermKind::Zero);
        }
        if tok == "1" {
            if !lone {
                return Err(perr(line, col, "`1` cannot be multiplied inside a term"));
            }
            return Ok(TermKind::Unit);
        }
    }
    Ok(TermKind::Names)
}

/// Parse `d <src> = t (+ t)*` or `row <src> = t (+ t)*` where every term is
/// a single name (or a lone `0` for the zero row).
fn linear_row(line: usize, toks: &[(usize, &str)], directive: &str) -> Result<RawRow> {
    if toks.len() < 3 || toks[2].1 != "=" {
        return Err(perr(
            line,
            toks[0].0,
            format!("expected `{directive} <name> = <terms>`"),
        ));
    }
    let (col, src) = toks[1];
    check_decl_name(line, col, src)?;
    let groups = split_terms(line, toks[2].0, &toks[3..])?;
    let mut targets = Vec::new();
    for group in &groups {
        match term_kind(line, group)? {
            TermKind::Zero => {
                if groups.len() > 1 {
                    return Err(perr(line, group[0].0, "`0` must stand alone"));
                }
            }
            TermKind::Unit => {
                return Err(perr(line, group[0].0, "the unit `1` is not a valid term here"))
            }
            TermKind::Names => {
                if group.len() != 1 {
                    return Err(perr(
                        line,
                        group[0].0,
                        "each term must be a single name here",
                    ));
                }
                targets.push((group[0].0, group[0].1.to_string()));
            }
        }
    }
    Ok(RawRow { line, col, src: src.to_string(), targets })
}

fn require_name(
    line: usize,
    col: usize,
    name: &str,
    names: &BTreeSet<String>,
    what: &str,
) -> Result<()> {
    if names.contains(name) {
        return Ok(());
    }
    Err(perr(line, col, format!("`{name}` is not a {what}")))
}

/// Validate row references and build a chain complex from a raw section.
fn build_chain(raw: &RawComplex, direction: Direction, what: &str) -> Result<ChainComplex> {
    for row in &raw.rows {
        require_name(row.line, row.col, &row.src, &raw.names, what)?;
        for (col, t) in &row.targets {
            require_name(row.line, *col, t, &raw.names, what)?;
        }
    }
    let mut b = ChainComplex::builder(direction);
    for (name, degree) in &raw.gens {
        b = b.generator(*degree, name);
    }
    for row in &raw.rows {
        let targets: Vec<&str> = row.targets.iter().map(|(_, t)| t.as_str()).collect();
        b = b.boundary(&row.src, &targets);
    }
    Ok(b.build()?)
}

fn build_morse(
    raw: &RawComplex,
    role: MorseRole,
    direction: Direction,
    what: &str,
) -> Result<Option<MorseComplexData>> {
    if !raw.present {
        return Ok(None);
    }
    let cx = build_chain(raw, direction, what)?;
    Ok(Some(MorseComplexData::new(role, cx)?))
}

/// Check that map rows go from one block's names to another's.
fn check_map_rows(
    acc: &RawMap,
    src_names: &BTreeSet<String>,
    tgt_names: &BTreeSet<String>,
    src_block: &str,
    tgt_block: &str,
) -> Result<()> {
    for row in &acc.rows {
        require_name(
            row.line,
            row.col,
            &row.src,
            src_names,
            &format!("generator of [block {src_block}]"),
        )?;
        for (col, t) in &row.targets {
            require_name(row.line, *col, t, tgt_names, &format!("generator of [block {tgt_block}]"))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{duality_sequence, h_maps_iso_check};
    use crate::two_copy::fillability_check;

    const CIRCLE: &str = "\
# round chord presentation of the simplest example
ambient n 2
gen a deg 1 action 1/2 !long
";

    const CIRCLE_DISK: &str = "\
ambient n 2
gen a deg 1 action 1/2 !long

[morse lambda]
crit m index 0 !short
crit e index -1 !short

[morse filling]
crit p index -2

[connect short]
row m = a

[connect rho]
row p = e
";

    const CIRCLE_DUALITY: &str = "\
ambient n 2
gen a deg 1 action 1/2 !long

[block q]
gen a deg 1
pair a pa

[block c]
gen m deg 0
gen e deg -1

[block p]
gen pa deg -2

[map rho]
row a = m

[map sigma]
row e = pa

[map eta]
";

    fn err_pos(e: LegchError) -> (usize, usize, String) {
        match e {
            LegchError::Parse { line, col, msg } => (line, col, msg),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_missing_the_ambient_header() {
        for text in ["", "   \n# only a comment\n\n"] {
            match parse_str(text) {
                Err(LegchError::MissingAmbient) => {}
                other => panic!("expected MissingAmbient, got {other:?}"),
            }
        }
    }

    #[test]
    fn minimal_presentation_parses() {
        let ws = parse_str(CIRCLE).unwrap();
        assert_eq!(ws.dga.ambient_n(), 2);
        assert_eq!(ws.dga.generators().len(), 1);
        let a = ws.dga.generator("a").unwrap();
        assert_eq!(a.degree, 1);
        assert_eq!(a.action, Rational64::new(1, 2));
        assert_eq!(ws.long_tags, BTreeSet::from(["a".to_string()]));
        assert!(ws.morse_lambda.is_none() && ws.duality.is_none());
        assert_eq!(ws.source_sha256.len(), 64);
    }

    #[test]
    fn non_positive_action_is_refused() {
        for action in ["0", "-1/2", "0/7"] {
            let text = format!("ambient n 2\ngen a deg 1 action {action}\n");
            match parse_str(&text) {
                Err(LegchError::NonPositiveAction(name)) => assert_eq!(name, "a"),
                other => panic!("expected NonPositiveAction, got {other:?}"),
            }
        }
    }

    #[test]
    fn malformed_rationals_carry_positions() {
        let (line, col, msg) = err_pos(
            parse_str("ambient n 2\ngen a deg 1 action 1/x\n").unwrap_err(),
        );
        assert_eq!((line, col), (2, 20));
        assert!(msg.contains("rational"), "{msg}");
        let (_, _, msg) = err_pos(
            parse_str("ambient n 2\ngen a deg 1 action 1/0\n").unwrap_err(),
        );
        assert!(msg.contains("denominator"), "{msg}");
    }

    #[test]
    fn duplicate_generators_carry_positions() {
        let text = "ambient n 2\ngen a deg 1 action 1/2\ngen a deg 0 action 1/3\n";
        let (line, col, msg) = err_pos(parse_str(text).unwrap_err());
        assert_eq!((line, col), (3, 5));
        assert!(msg.contains("duplicate"), "{msg}");
    }

    #[test]
    fn unknown_directives_and_sections_are_refused() {
        let (line, col, msg) = err_pos(parse_str("ambient n 2\nfrob a b\n").unwrap_err());
        assert_eq!((line, col), (2, 1));
        assert!(msg.contains("unknown directive"), "{msg}");

        let (_, _, msg) = err_pos(parse_str("ambient n 2\n[weird]\n").unwrap_err());
        assert!(msg.contains("unknown section"), "{msg}");

        // Directives do not leak across sections.
        let (_, _, msg) =
            err_pos(parse_str("ambient n 2\n[morse lambda]\ngen a deg 1 action 1\n").unwrap_err());
        assert!(msg.contains("`gen` in [morse lambda]"), "{msg}");
    }

    #[test]
    fn unclosed_or_repeated_sections_are_refused() {
        let (_, _, msg) = err_pos(parse_str("ambient n 2\n[morse lambda\n").unwrap_err());
        assert!(msg.contains("unclosed"), "{msg}");
        let (_, _, msg) = err_pos(
            parse_str("ambient n 2\n[morse lambda]\n[morse lambda]\n").unwrap_err(),
        );
        assert!(msg.contains("appears twice"), "{msg}");
    }

    #[test]
    fn differential_grammar_round_trips() {
        let text = "\
ambient n 3
gen a deg 2 action 7/8
gen b deg 1 action 1/2
gen c deg 0 action 1/4
d a = b + 1
d b = c c
d c = 0
";
        let ws = parse_str(text).unwrap();
        let da = ws.dga.differential_of("a");
        let words: Vec<Vec<String>> = da.words().cloned().collect();
        assert_eq!(words, vec![vec![], vec!["b".to_string()]]);
        let db = ws.dga.differential_of("b");
        assert_eq!(
            db.words().cloned().collect::<Vec<_>>(),
            vec![vec!["c".to_string(), "c".to_string()]]
        );
        assert!(ws.dga.differential_of("c").is_zero());
        // Explicit zero rows do not show up as declared differentials.
        assert!(!ws.dga.differentials().contains_key("c"));
    }

    #[test]
    fn repeated_words_cancel() {
        let text = "\
ambient n 2
gen a deg 1 action 1/2
gen b deg 0 action 1/4
d a = b + b
";
        let ws = parse_str(text).unwrap();
        assert!(ws.dga.differential_of("a").is_zero());
    }

    #[test]
    fn zero_and_unit_literals_are_policed() {
        let base = "ambient n 2\ngen a deg 1 action 1/2\ngen b deg 0 action 1/4\n";
        for (rhs, needle) in [
            ("b + 0", "`0` must stand alone"),
            ("1 b", "`1` cannot be multiplied"),
            ("b +", "missing term"),
            ("+ b", "misplaced `+`"),
            ("", "missing term"),
        ] {
            let text = format!("{base}d a = {rhs}\n");
            let (line, _, msg) = err_pos(parse_str(&text).unwrap_err());
            assert_eq!(line, 4);
            assert!(msg.contains(needle), "rhs `{rhs}`: {msg}");
        }
    }

    #[test]
    fn unknown_names_in_differentials_carry_positions() {
        let text = "ambient n 2\ngen a deg 1 action 1/2\nd a = z\n";
        let (line, col, msg) = err_pos(parse_str(text).unwrap_err());
        assert_eq!((line, col), (3, 7));
        assert!(msg.contains("unknown generator `z`"), "{msg}");

        let text = "ambient n 2\ngen a deg 1 action 1/2\nd z = a\n";
        let (line, _, msg) = err_pos(parse_str(text).unwrap_err());
        assert_eq!(line, 3);
        assert!(msg.contains("unknown generator `z`"), "{msg}");
    }

    #[test]
    fn two_copy_sections_build_and_assemble() {
        let ws = parse_str(CIRCLE_DISK).unwrap();
        let lambda = ws.morse_lambda.as_ref().unwrap();
        assert_eq!(lambda.role, MorseRole::Lambda);
        assert_eq!(lambda.complex.direction(), Direction::Up);
        assert_eq!(lambda.complex.labels(0), &["m".to_string()]);
        assert_eq!(
            ws.connecting.short_to_long.get("m"),
            Some(&BTreeSet::from(["a".to_string()]))
        );
        assert_eq!(
            ws.connecting.point_to_chord.get("p"),
            Some(&BTreeSet::from(["e".to_string()]))
        );

        let aug = Augmentation::zero();
        let tc = ws.build_two_copy(&aug).unwrap();
        assert_eq!(tc.total().homology().total_rank(), 0);
        let disk = BTreeMap::from([(0i64, 1usize)]);
        assert!(fillability_check(&ws.dga, None, &disk).unwrap().is_consistent());
    }

    #[test]
    fn two_copy_assembly_requires_both_morse_sections() {
        let text = "\
ambient n 2
gen a deg 1 action 1/2 !long
[morse lambda]
crit m index 0
";
        let ws = parse_str(text).unwrap();
        match ws.build_two_copy(&Augmentation::zero()) {
            Err(LegchError::Precondition(msg)) => assert!(msg.contains("[morse filling]")),
            other => panic!("expected Precondition, got {other:?}"),
        }
    }

    #[test]
    fn morse_rows_use_single_names_and_known_crits() {
        let base = "ambient n 2\ngen a deg 1 action 1/2\n[morse lambda]\ncrit x index 1\ncrit y index 0\n";
        let ws = parse_str(&format!("{base}d y = x\n")).unwrap();
        let cx = &ws.morse_lambda.unwrap().complex;
        assert_eq!(cx.homology().total_rank(), 0);

        let (_, _, msg) = err_pos(parse_str(&format!("{base}d y = 1\n")).unwrap_err());
        assert!(msg.contains("unit `1` is not a valid term"), "{msg}");
        let (_, _, msg) = err_pos(parse_str(&format!("{base}d y = x x\n")).unwrap_err());
        assert!(msg.contains("single name"), "{msg}");
        let (_, _, msg) = err_pos(parse_str(&format!("{base}d y = w\n")).unwrap_err());
        assert!(msg.contains("not a critical point"), "{msg}");
    }

    #[test]
    fn short_tag_is_rejected_outside_the_lambda_section() {
        let text = "ambient n 2\n[morse filling]\ncrit p index -2 !short\n";
        let (_, _, msg) = err_pos(parse_str(text).unwrap_err());
        assert!(msg.contains("!short"), "{msg}");
    }

    #[test]
    fn duality_sections_build_and_assemble() {
        let ws = parse_str(CIRCLE_DUALITY).unwrap();
        let data = ws.duality.as_ref().unwrap();
        assert_eq!(data.q.labels(1), &["a".to_string()]);
        assert_eq!(data.c.complex.direction(), Direction::Down);
        assert_eq!(data.pairing, BTreeMap::from([("a".to_string(), "pa".to_string())]));
        assert_eq!(data.rho.get("a"), Some(&BTreeSet::from(["m".to_string()])));

        let aug = Augmentation::zero();
        let ds = ws.build_duality(&aug).unwrap();
        assert_eq!(ds.degree_sum(), -1);
        let seq = duality_sequence(&ds).unwrap();
        assert!(seq.pairing_ok);
        assert!(h_maps_iso_check(&ds).unwrap().pass());
    }

    #[test]
    fn duality_blocks_must_all_be_declared() {
        let text = "ambient n 2\ngen a deg 1 action 1/2\n[block q]\ngen a deg 1\n";
        let (line, col, msg) = err_pos(parse_str(text).unwrap_err());
        assert_eq!((line, col), (3, 1));
        assert!(msg.contains("all required"), "{msg}");

        // A gluing map section alone also demands the blocks.
        let text = "ambient n 2\ngen a deg 1 action 1/2\n[map rho]\n";
        let (_, _, msg) = err_pos(parse_str(text).unwrap_err());
        assert!(msg.contains("all required"), "{msg}");
    }

    #[test]
    fn pairing_and_map_rows_are_checked_against_their_blocks() {
        let bad_pair = CIRCLE_DUALITY.replace("pair a pa", "pair a zz");
        let (_, _, msg) = err_pos(parse_str(&bad_pair).unwrap_err());
        assert!(msg.contains("not a generator of [block p]"), "{msg}");

        let bad_rho = CIRCLE_DUALITY.replace("row a = m", "row a = pa");
        let (_, _, msg) = err_pos(parse_str(&bad_rho).unwrap_err());
        assert!(msg.contains("not a generator of [block c]"), "{msg}");

        let twice = CIRCLE_DUALITY.replace("pair a pa", "pair a pa\npair a pa");
        let (_, _, msg) = err_pos(parse_str(&twice).unwrap_err());
        assert!(msg.contains("paired twice"), "{msg}");
    }

    #[test]
    fn diagram_override_sections_parse() {
        let text = format!(
            "{CIRCLE_DUALITY}\n[map vert]\nrow m = e\nrow e = m\n\n[map delta]\nrow m = pa\n\n[map h]\n"
        );
        let ws = parse_str(&text).unwrap();
        let vert = ws.diagram.vert.as_ref().unwrap();
        assert_eq!(vert.get("m"), Some(&BTreeSet::from(["e".to_string()])));
        assert_eq!(ws.diagram.delta.as_ref().unwrap().len(), 1);
        // A present-but-empty section is an explicit empty override, not a default.
        assert_eq!(ws.diagram.h, Some(BTreeMap::new()));
        assert!(ws.diagram.delta_prime.is_none());

        let bad = format!("{CIRCLE_DUALITY}\n[map vert]\nrow m = zz\n");
        let (_, _, msg) = err_pos(parse_str(&bad).unwrap_err());
        assert!(msg.contains("not a declared name"), "{msg}");
    }

    #[test]
    fn mixed_chords_and_tags_parse() {
        let text = "ambient n 2\ngen a deg 1 action 1/2 mixed 0 1 !long\n";
        let ws = parse_str(text).unwrap();
        assert_eq!(ws.dga.generator("a").unwrap().kind, GeneratorKind::Mixed(0, 1));

        let (_, _, msg) =
            err_pos(parse_str("ambient n 2\ngen a deg 1 action 1/2 mixed 1 1\n").unwrap_err());
        assert!(msg.contains("distinct component"), "{msg}");
        let (_, _, msg) =
            err_pos(parse_str("ambient n 2\ngen a deg 1 action 1/2 !short\n").unwrap_err());
        assert!(msg.contains("unexpected token `!short`"), "{msg}");
    }

    #[test]
    fn ambient_header_is_declared_once_with_the_right_shape() {
        let (_, _, msg) = err_pos(parse_str("ambient 2\n").unwrap_err());
        assert!(msg.contains("ambient n"), "{msg}");
        let (_, _, msg) = err_pos(parse_str("ambient n 2\nambient n 3\n").unwrap_err());
        assert!(msg.contains("twice"), "{msg}");
    }

    #[test]
    fn reserved_names_are_refused() {
        let (_, _, msg) = err_pos(parse_str("ambient n 2\ngen 1 deg 1 action 1/2\n").unwrap_err());
        assert!(msg.contains("reserved"), "{msg}");
    }

    #[test]
    fn hash_is_deterministic_and_content_sensitive() {
        let a = parse_str(CIRCLE).unwrap();
        let b = parse_str(CIRCLE).unwrap();
        assert_eq!(a.source_sha256, b.source_sha256);
        let c = parse_str(CIRCLE_DISK).unwrap();
        assert_ne!(a.source_sha256, c.source_sha256);
    }

    #[test]
    fn broken_mathematics_still_loads_or_fails_as_math_not_parse() {
        // A Morse boundary that does not square to zero is grammatically
        // fine; the failure is a mathematical one (non-input exit class).
        let text = "\
ambient n 2
gen a deg 1 action 1/2
[morse lambda]
crit x index 2
crit y index 1
crit z index 0
d z = y
d y = x
";
        let err = parse_str(text).unwrap_err();
        assert_eq!(err.exit_code(), 1, "{err:?}");
    }
}
