//! Built-in table of named knots.
//!
//! The table lives in `data/knot_table.txt`, one `name | crossings | code |
//! jones` record per line. Composite knots name their factors and splice
//! positions (`= a # b@p ...`) and are materialized with
//! [`SignedGaussCode::connect_sum`] on load. The Jones column is generated by
//! the bracket oracle through [`bake_table`], never typed in by hand.

use std::sync::OnceLock;

use thiserror::Error;

use crate::bracket_oracle::{jones_reference, OracleError};
use crate::gauss_code::{parse_gauss, SignedGaussCode};
use crate::laurent_poly::LaurentPoly;

pub const TABLE_TEXT: &str = include_str!("../data/knot_table.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnotTableError {
    #[error("unknown knot {0:?}")]
    UnknownName(String),
    #[error("knot table line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("knot table line {line}: {source}")]
    Oracle { line: usize, source: OracleError },
}

/// One factor of a composite entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splice {
    pub component: String,
    /// Word position in the running composite; `None` for the first factor.
    pub position: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotEntry {
    pub name: String,
    pub code: SignedGaussCode,
    pub expected_jones: LaurentPoly,
    pub crossing_number: usize,
    /// Factors for composite entries, empty for prime ones.
    pub components: Vec<Splice>,
}

impl KnotEntry {
    pub fn is_composite(&self) -> bool {
        !self.components.is_empty()
    }
}

struct Record {
    line: usize,
    name: String,
    crossings: usize,
    code_field: String,
    code: SignedGaussCode,
    components: Vec<Splice>,
    jones: Option<LaurentPoly>,
}

fn syntax(line: usize, message: impl Into<String>) -> KnotTableError {
    KnotTableError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_composite(
    line: usize,
    recipe: &str,
    earlier: &[Record],
) -> Result<(SignedGaussCode, Vec<Splice>), KnotTableError> {
    let find = |name: &str| {
        earlier
            .iter()
            .find(|r| r.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| syntax(line, format!("factor {name:?} is not defined above")))
    };
    let mut parts = recipe.split('#').map(str::trim);
    let first = parts
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| syntax(line, "empty composite"))?;
    let mut code = find(first)?.code.clone();
    let mut components = vec![Splice {
        component: first.to_string(),
        position: None,
    }];
    for part in parts {
        let (name, pos) = part
            .rsplit_once('@')
            .ok_or_else(|| syntax(line, format!("factor {part:?} lacks @position")))?;
        let pos: usize = pos
            .parse()
            .map_err(|_| syntax(line, format!("bad splice position {pos:?}")))?;
        code = code
            .connect_sum(&find(name)?.code, pos)
            .map_err(|e| syntax(line, e.to_string()))?;
        components.push(Splice {
            component: name.to_string(),
            position: Some(pos),
        });
    }
    Ok((code, components))
}

fn parse_records(text: &str) -> Result<Vec<Record>, KnotTableError> {
    let mut records: Vec<Record> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('|').map(str::trim).collect();
        let [name, crossings, code_field, jones] = fields[..] else {
            return Err(syntax(
                line,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        };
        if name.is_empty() {
            return Err(syntax(line, "empty name"));
        }
        if records.iter().any(|r| r.name.eq_ignore_ascii_case(name)) {
            return Err(syntax(line, format!("duplicate name {name:?}")));
        }
        let crossings: usize = crossings
            .parse()
            .map_err(|_| syntax(line, format!("bad crossing count {crossings:?}")))?;
        let (code, components) = match code_field.strip_prefix('=') {
            Some(recipe) => parse_composite(line, recipe, &records)?,
            None => (
                parse_gauss(code_field).map_err(|e| syntax(line, e.to_string()))?,
                Vec::new(),
            ),
        };
        if code.n() != crossings {
            return Err(syntax(
                line,
                format!("code has {} crossings, record says {crossings}", code.n()),
            ));
        }
        let jones = match jones {
            "?" => None,
            text => Some(LaurentPoly::from_json(text).map_err(|e| syntax(line, e.to_string()))?),
        };
        records.push(Record {
            line,
            name: name.to_string(),
            crossings,
            code_field: code_field.to_string(),
            code,
            components,
            jones,
        });
    }
    Ok(records)
}

/// Parses a complete table; every record must carry its Jones polynomial.
/// Entries come back ordered by `(crossing_number, name)`.
pub fn parse_table(text: &str) -> Result<Vec<KnotEntry>, KnotTableError> {
    let mut entries = parse_records(text)?
        .into_iter()
        .map(|r| {
            let expected_jones = r
                .jones
                .ok_or_else(|| syntax(r.line, "Jones polynomial not baked"))?;
            Ok(KnotEntry {
                name: r.name,
                code: r.code,
                expected_jones,
                crossing_number: r.crossings,
                components: r.components,
            })
        })
        .collect::<Result<Vec<_>, KnotTableError>>()?;
    entries.sort_by(|a, b| (a.crossing_number, &a.name).cmp(&(b.crossing_number, &b.name)));
    Ok(entries)
}

/// Rewrites the Jones column of every record with the bracket oracle's
/// output, keeping comments and record order.
pub fn bake_table(text: &str) -> Result<String, KnotTableError> {
    let records = parse_records(text)?;
    let mut by_line = records.iter().peekable();
    let mut out = String::with_capacity(text.len());
    for (idx, raw) in text.lines().enumerate() {
        match by_line.peek() {
            Some(r) if r.line == idx + 1 => {
                let jones = jones_reference(&r.code).map_err(|source| KnotTableError::Oracle {
                    line: r.line,
                    source,
                })?;
                let code_field = if r.code_field.is_empty() {
                    String::new()
                } else {
                    format!(" {}", r.code_field)
                };
                out.push_str(&format!(
                    "{} | {} |{} | {}\n",
                    r.name,
                    r.crossings,
                    code_field,
                    jones.to_json()
                ));
                by_line.next();
            }
            _ => {
                out.push_str(raw);
                out.push('\n');
            }
        }
    }
    Ok(out)
}

/// Every built-in entry, ordered by `(crossing_number, name)`.
pub fn all_entries() -> &'static [KnotEntry] {
    static TABLE: OnceLock<Vec<KnotEntry>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(TABLE_TEXT).expect("built-in knot table is valid"))
}

/// Exact, case-insensitive name lookup.
pub fn lookup(name: &str) -> Result<&'static KnotEntry, KnotTableError> {
    all_entries()
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| KnotTableError::UnknownName(name.to_string()))
}
