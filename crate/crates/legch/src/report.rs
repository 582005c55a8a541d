//! Deterministic run reports.
//!
//! Every command produces one [`Report`]: a JSON document by default, an
//! aligned plain-text table with `--pretty`.  All containers iterate in a
//! fixed order (struct fields as declared, `BTreeMap` keys sorted, vectors
//! in the order the command pushed them), so two runs over the same input
//! with the same options render byte-identical output.

use std::collections::BTreeMap;

use serde::Serialize;

/// What the run was and what it found.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Tool name and version.
    pub tool: String,
    /// The subcommand that ran.
    pub command: String,
    /// Input file as given on the command line, if any.
    pub input: Option<String>,
    /// Hex SHA-256 of the raw input text, if any.
    pub sha256: Option<String>,
    /// RNG seed in effect (commands that never draw still record it).
    pub seed: u64,
    /// Echo of the options that shaped the run, sorted by name.
    pub options: BTreeMap<String, String>,
    /// One entry per check, in execution order.
    pub verdicts: Vec<Verdict>,
    /// Graded rank tables, in presentation order.
    pub tables: Vec<RankTable>,
    /// Labeled Poincaré polynomials, in presentation order.
    pub polynomials: Vec<LabeledPoly>,
    /// Standing assumptions behind the verdicts.
    pub assumptions: Vec<String>,
    /// True when every verdict passed.
    pub overall: bool,
}

/// One named check with its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    /// Short free-form detail (counts, witnesses, failure positions).
    pub detail: String,
}

/// A graded rank table.
#[derive(Debug, Clone, Serialize)]
pub struct RankTable {
    pub title: String,
    /// (degree, rank) rows sorted by degree; zero ranks omitted.
    pub rows: Vec<(i64, usize)>,
}

/// A Poincaré polynomial with both its terms and a display form.
#[derive(Debug, Clone, Serialize)]
pub struct LabeledPoly {
    pub label: String,
    /// (degree, rank) terms sorted by degree.
    pub terms: Vec<(i64, usize)>,
    /// Human form such as `2 + t` or `t^-1 + 3t^2`.
    pub display: String,
}

/// Render graded ranks as a polynomial in `t`.
pub fn poly_string(terms: &[(i64, usize)]) -> String {
    let mut parts = Vec::new();
    for &(deg, rank) in terms {
        if rank == 0 {
            continue;
        }
        let var = match deg {
            0 => String::new(),
            1 => "t".to_string(),
            d => format!("t^{d}"),
        };
        let part = match (rank, var.is_empty()) {
            (r, true) => r.to_string(),
            (1, false) => var,
            (r, false) => format!("{r}{var}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Report {
        Report {
            tool: format!("legch {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            input: None,
            sha256: None,
            seed,
            options: BTreeMap::new(),
            verdicts: Vec::new(),
            tables: Vec::new(),
            polynomials: Vec::new(),
            assumptions: Vec::new(),
            overall: true,
        }
    }

    pub fn stamp_input(&mut self, path: &str, sha256: &str) {
        self.input = Some(path.to_string());
        self.sha256 = Some(sha256.to_string());
    }

    pub fn option(&mut self, name: &str, value: impl ToString) {
        self.options.insert(name.to_string(), value.to_string());
    }

    pub fn verdict(&mut self, check: &str, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { check: check.to_string(), pass, detail: detail.into() });
        self.overall &= pass;
    }

    pub fn table(&mut self, title: &str, rows: Vec<(i64, usize)>) {
        self.tables.push(RankTable { title: title.to_string(), rows });
    }

    pub fn polynomial(&mut self, label: &str, terms: Vec<(i64, usize)>) {
        let display = poly_string(&terms);
        self.polynomials.push(LabeledPoly { label: label.to_string(), terms, display });
    }

    pub fn assume(&mut self, note: &str) {
        self.assumptions.push(note.to_string());
    }

    /// The process exit code the report implies: 0 when everything passed,
    /// 1 when some check failed on well-formed input.
    pub fn exit_code(&self) -> i32 {
        if self.overall {
            0
        } else {
            1
        }
    }

    /// JSON rendering (trailing newline included).
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned plain-text rendering (trailing newline included).
    pub fn render_pretty(&self) -> String {
        let mut out = String::new();
        let mut push = |line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(format!("tool:     {}", self.tool));
        push(format!("command:  {}", self.command));
        if let Some(input) = &self.input {
            push(format!("input:    {input}"));
        }
        if let Some(h) = &self.sha256 {
            push(format!("sha256:   {h}"));
        }
        push(format!("seed:     {}", self.seed));
        for (k, v) in &self.options {
            push(format!("option:   {k} = {v}"));
        }
        if !self.verdicts.is_empty() {
            push("checks:".to_string());
            for v in &self.verdicts {
                let mark = if v.pass { "pass" } else { "FAIL" };
                if v.detail.is_empty() {
                    push(format!("  [{mark}] {}", v.check));
                } else {
                    push(format!("  [{mark}] {} — {}", v.check, v.detail));
                }
            }
        }
        for t in &self.tables {
            push(format!("table: {}", t.title));
            push("  degree  rank".to_string());
            for &(d, r) in &t.rows {
                push(format!("  {d:>6}  {r:>4}"));
            }
            if t.rows.is_empty() {
                push("  (all ranks zero)".to_string());
            }
        }
        if !self.polynomials.is_empty() {
            push("polynomials:".to_string());
            for p in &self.polynomials {
                push(format!("  {}: {}", p.label, p.display));
            }
        }
        if !self.assumptions.is_empty() {
            push("assumptions:".to_string());
            for a in &self.assumptions {
                push(format!("  - {a}"));
            }
        }
        push(format!("overall:  {}", if self.overall { "pass" } else { "FAIL" }));
        out
    }

    /// Render in the requested style.
    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            self.render_pretty()
        } else {
            self.render_json()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("lch", 271828);
        r.stamp_input("fixtures/trefoil.dga", "abc123");
        r.option("degrees", "-1..2");
        r.verdict("square of the linearized differential is zero", true, "");
        r.verdict("rank comparison", true, "5 augmentations");
        r.table("linearized homology", vec![(0, 2), (1, 1)]);
        r.polynomial("augmentation {b1}", vec![(0, 2), (1, 1)]);
        r.assume("all ranks are over GF(2)");
        r
    }

    #[test]
    fn polynomial_strings_cover_the_degree_shapes() {
        assert_eq!(poly_string(&[]), "0");
        assert_eq!(poly_string(&[(0, 2), (1, 1)]), "2 + t");
        assert_eq!(poly_string(&[(-1, 1), (2, 3)]), "t^-1 + 3t^2");
        assert_eq!(poly_string(&[(1, 1)]), "t");
        assert_eq!(poly_string(&[(0, 1), (3, 0)]), "1");
    }

    #[test]
    fn rendering_is_deterministic() {
        assert_eq!(sample().render_json(), sample().render_json());
        assert_eq!(sample().render_pretty(), sample().render_pretty());
    }

    #[test]
    fn failures_flip_the_overall_flag_and_exit_code() {
        let mut r = sample();
        assert_eq!(r.exit_code(), 0);
        r.verdict("exactness", false, "broken at degree 2");
        assert!(!r.overall);
        assert_eq!(r.exit_code(), 1);
        assert!(r.render_pretty().contains("[FAIL] exactness — broken at degree 2"));
        assert!(r.render_pretty().ends_with("overall:  FAIL\n"));
    }

    #[test]
    fn json_contains_the_stamped_fields() {
        let json = sample().render_json();
        for needle in ["\"command\": \"lch\"", "\"seed\": 271828", "\"sha256\": \"abc123\"", "\"display\": \"2 + t\""] {
            assert!(json.contains(needle), "missing {needle} in {json}");
        }
        assert!(json.ends_with('\n'));
    }
}
