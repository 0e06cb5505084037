//! Text file format for codes.
//!
//! A code file is a JSON document:
//!
//! ```text
//! {
//!   "field": { "p": 2, "m": 2, "modulus": [1, 1, 1] },
//!   "n": 4,
//!   "k": 2,
//!   "generator": [[1, 1, 0, 0], [0, 0, 1, 1]],
//!   "groups": [[0, 1], [2, 3]],
//!   "zero_columns": [],
//!   "r": 1,
//!   "delta": 2
//! }
//! ```
//!
//! Generator entries are packed symbols: polynomial coefficients low-to-high
//! read as base-`p` digits. `groups`, `zero_columns`, `r` and `delta` are
//! optional. Output is canonical: one generator row per line, keys in the
//! order above, trailing newline.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code_core::{LinearCode, LocalityStructure};
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct FieldRecord {
    p: u32,
    m: u32,
    #[serde(default)]
    modulus: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeRecord {
    field: FieldRecord,
    n: usize,
    k: usize,
    generator: Vec<Vec<u64>>,
    #[serde(default)]
    groups: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    zero_columns: Option<Vec<usize>>,
    #[serde(default)]
    r: Option<usize>,
    #[serde(default)]
    delta: Option<usize>,
}

/// A code together with the optional locality metadata stored beside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeDocument {
    pub code: LinearCode,
    /// Repair groups; when present `r` and `delta` are too.
    pub structure: Option<LocalityStructure>,
    pub r: Option<usize>,
    pub delta: Option<usize>,
}

impl CodeDocument {
    pub fn new(code: LinearCode) -> Self {
        CodeDocument {
            code,
            structure: None,
            r: None,
            delta: None,
        }
    }

    pub fn with_structure(code: LinearCode, structure: LocalityStructure) -> Self {
        let (r, delta) = (Some(structure.r), Some(structure.delta));
        CodeDocument {
            code,
            structure: Some(structure),
            r,
            delta,
        }
    }

    pub fn to_text(&self) -> String {
        let f = self.code.field();
        let g = self.code.generator();
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");

        let mut out = String::new();
        let modulus = f.modulus().iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "{{");
        let _ = writeln!(
            out,
            "  \"field\": {{ \"p\": {}, \"m\": {}, \"modulus\": [{}] }},",
            f.characteristic(),
            f.degree(),
            modulus
        );
        let _ = writeln!(out, "  \"n\": {},", self.code.n());
        let _ = writeln!(out, "  \"k\": {},", self.code.k());
        let _ = writeln!(out, "  \"generator\": [");
        for i in 0..g.rows() {
            let row = g.row(i).iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
            let sep = if i + 1 < g.rows() { "," } else { "" };
            let _ = writeln!(out, "    [{row}]{sep}");
        }
        out.push_str("  ]");
        if let Some(s) = &self.structure {
            let groups = s
                .groups
                .iter()
                .map(|g| format!("[{}]", list(g)))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = write!(out, ",\n  \"groups\": [{groups}]");
            let _ = write!(out, ",\n  \"zero_columns\": [{}]", list(&s.zero_columns));
        }
        if let Some(r) = self.r {
            let _ = write!(out, ",\n  \"r\": {r}");
        }
        if let Some(delta) = self.delta {
            let _ = write!(out, ",\n  \"delta\": {delta}");
        }
        out.push_str("\n}\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rec: CodeRecord = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let modulus = (rec.field.m > 1).then_some(rec.field.modulus);
        let field = FieldSpec::new(rec.field.p, rec.field.m, modulus)?;
        if rec.generator.len() != rec.k {
            return Err(Error::Format(format!(
                "k = {} but generator has {} rows",
                rec.k,
                rec.generator.len()
            )));
        }
        if rec.generator.iter().any(|row| row.len() != rec.n) {
            return Err(Error::Format(format!("generator rows must have n = {} entries", rec.n)));
        }
        let code = LinearCode::new(Matrix::from_rows(&field, &rec.generator)?)?;
        let structure = match rec.groups {
            Some(groups) => {
                let (Some(r), Some(delta)) = (rec.r, rec.delta) else {
                    return Err(Error::Format("groups require r and delta".into()));
                };
                let s = LocalityStructure {
                    r,
                    delta,
                    groups,
                    zero_columns: rec.zero_columns.unwrap_or_default(),
                };
                s.validate(code.n())?;
                Some(s)
            }
            None if rec.zero_columns.as_ref().is_some_and(|z| !z.is_empty()) => {
                return Err(Error::Format("zero_columns without groups".into()));
            }
            None => None,
        };
        Ok(CodeDocument {
            code,
            structure,
            r: rec.r,
            delta: rec.delta,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }
}
