//! Line-oriented corpus files.
//!
//! ```text
//! # comment
//! [entry su3-cp2]
//! group = su 3                 # or `su 2 + su 2`
//! isotropy = su-block 2 1
//! k = first                    # first | second | trivial
//! s = 0.5, 0.7071067811865476, 1, 2
//! section = real-points        # optional, enables lift-section
//! control = corrupted-section  # optional, perturbs the lift-hyperpolar section
//! claims = pair, split         # optional, defaults to every applicable claim
//! expect.dim_h = 4
//! ```
//!
//! Entries marked `skip = <reason>` keep `group` and `isotropy` as free text
//! and are reported as skipped.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use polarlift_core::algebra::Family;
use polarlift_core::isotropy::{IsotropyKind, KChoice};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorpusError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, field `{field}`: {message}")]
    Parse { line: usize, field: String, message: String },
}

fn parse_err(line: usize, field: &str, message: impl Into<String>) -> CorpusError {
    CorpusError::Parse { line, field: field.to_string(), message: message.into() }
}

/// Verification claims, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    Pair,
    Split,
    Brackets,
    Reductive,
    Irreducible,
    Transvection,
    FixedSet,
    Center,
    LiftHyperpolar,
    LiftSection,
}

impl Claim {
    pub const ALL: [Claim; 10] = [
        Claim::Pair,
        Claim::Split,
        Claim::Brackets,
        Claim::Reductive,
        Claim::Irreducible,
        Claim::Transvection,
        Claim::FixedSet,
        Claim::Center,
        Claim::LiftHyperpolar,
        Claim::LiftSection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::Pair => "pair",
            Claim::Split => "split",
            Claim::Brackets => "brackets",
            Claim::Reductive => "reductive",
            Claim::Irreducible => "irreducible",
            Claim::Transvection => "transvection",
            Claim::FixedSet => "fixed-set",
            Claim::Center => "center",
            Claim::LiftHyperpolar => "lift-hyperpolar",
            Claim::LiftSection => "lift-section",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        Claim::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Claim::ALL.iter().map(|c| c.name()).collect();
            format!("unknown claim `{s}` (expected one of {})", names.join(", "))
        })
    }
}

pub fn parse_claims(list: &str) -> Result<Vec<Claim>, String> {
    let mut claims = list.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect::<Result<Vec<_>, _>>()?;
    claims.sort();
    claims.dedup();
    Ok(claims)
}

/// Positive, finite deformation parameters.
pub fn parse_s_values(list: &str) -> Result<Vec<f64>, String> {
    let values = list
        .split(',')
        .map(|t| {
            let t = t.trim();
            let v: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("s must be positive and finite, got {t}"));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("empty list".into());
    }
    Ok(values)
}

/// Optional alternative sections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionSpec {
    /// `p1` intersected with `so(n) ⊂ su(n)`, acted on by the diagonal torus.
    RealPoints,
}

/// Negative controls attached to an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ControlSpec {
    /// Rotate the maximal abelian section away from itself.
    CorruptedSection,
}

/// Expected values; absent keys are recorded but not checked.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expectations {
    pub dims: BTreeMap<String, usize>,
    pub irreducible: Option<bool>,
}

impl Expectations {
    pub const DIM_KEYS: [&'static str; 14] = [
        "dim_g",
        "dim_h",
        "dim_p1",
        "dim_k",
        "dim_p2",
        "dim_q",
        "rank",
        "tr_s1",
        "tr_generic",
        "fixed_dim",
        "center_dim",
        "section_dim",
        "section_alg_dim",
        "commutant_dim",
    ];

    pub fn dim(&self, key: &str) -> Option<usize> {
        self.dims.get(key).copied()
    }
}

/// A supported entry.
#[derive(Clone, Debug, PartialEq)]
pub struct EntrySpec {
    pub group: Vec<(Family, usize)>,
    pub isotropy: IsotropyKind,
    pub k: KChoice,
    pub section: Option<SectionSpec>,
    pub control: Option<ControlSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EntryKind {
    Supported(EntrySpec),
    Skipped { reason: String, group: String, isotropy: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub id: String,
    pub line: usize,
    pub kind: EntryKind,
    pub s_values: Vec<f64>,
    pub claims: Option<Vec<Claim>>,
    pub expected: Expectations,
}

impl CorpusEntry {
    pub fn spec(&self) -> Option<&EntrySpec> {
        match &self.kind {
            EntryKind::Supported(spec) => Some(spec),
            EntryKind::Skipped { .. } => None,
        }
    }

    /// Claims run when none are requested explicitly.
    pub fn default_claims(&self) -> Vec<Claim> {
        if let Some(c) = &self.claims {
            return c.clone();
        }
        Claim::ALL
            .into_iter()
            .filter(|c| *c != Claim::LiftSection || self.spec().is_some_and(|s| s.section.is_some()))
            .collect()
    }
}

pub fn parse_group(text: &str) -> Result<Vec<(Family, usize)>, String> {
    text.split('+')
        .map(|part| {
            let tokens: Vec<_> = part.split_whitespace().collect();
            let [family, n] = tokens[..] else {
                return Err(format!("expected `<family> <n>`, got `{}`", part.trim()));
            };
            let family: Family = family.parse().map_err(|e: polarlift_core::Error| e.to_string())?;
            let n: usize = n.parse().map_err(|_| format!("`{n}` is not a nonnegative integer"))?;
            if n < family.min_n() {
                return Err(format!("{family}({n}) is below the minimum rank {}", family.min_n()));
            }
            Ok((family, n))
        })
        .collect()
}

#[derive(Default)]
struct Pending {
    id: String,
    line: usize,
    fields: BTreeMap<String, (usize, String)>,
}

impl Pending {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.fields.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<(usize, String), CorpusError> {
        self.take(key).ok_or_else(|| parse_err(self.line, key, format!("missing in entry `{}`", self.id)))
    }

    fn finish(mut self) -> Result<CorpusEntry, CorpusError> {
        let s_values = match self.take("s") {
            Some((line, v)) => parse_s_values(&v).map_err(|m| parse_err(line, "s", m))?,
            None => vec![0.5, 1.0, 2.0],
        };
        let claims = match self.take("claims") {
            Some((line, v)) => Some(parse_claims(&v).map_err(|m| parse_err(line, "claims", m))?),
            None => None,
        };
        let mut expected = Expectations::default();
        let keys: Vec<_> = self.fields.keys().filter(|k| k.starts_with("expect.")).cloned().collect();
        for key in keys {
            let (line, v) = self.take(&key).expect("key listed");
            let name = &key["expect.".len()..];
            if name == "irreducible" {
                let b = v.parse().map_err(|_| parse_err(line, &key, format!("`{v}` is not true or false")))?;
                expected.irreducible = Some(b);
            } else if Expectations::DIM_KEYS.contains(&name) {
                let d = v.parse().map_err(|_| parse_err(line, &key, format!("`{v}` is not a nonnegative integer")))?;
                expected.dims.insert(name.to_string(), d);
            } else {
                return Err(parse_err(line, &key, "unknown expectation"));
            }
        }
        let kind = if let Some((_, reason)) = self.take("skip") {
            let group = self.take("group").map(|x| x.1).unwrap_or_default();
            let isotropy = self.take("isotropy").map(|x| x.1).unwrap_or_default();
            self.take("k");
            self.take("section");
            self.take("control");
            EntryKind::Skipped { reason, group, isotropy }
        } else {
            let (line, g) = self.require("group")?;
            let group = parse_group(&g).map_err(|m| parse_err(line, "group", m))?;
            let (line, iso) = self.require("isotropy")?;
            let isotropy: IsotropyKind = iso.parse().map_err(|m| parse_err(line, "isotropy", m))?;
            let (line, k) = self.require("k")?;
            let k: KChoice = k.parse().map_err(|m| parse_err(line, "k", m))?;
            let section = match self.take("section") {
                Some((_, v)) if v == "real-points" => Some(SectionSpec::RealPoints),
                Some((line, v)) => return Err(parse_err(line, "section", format!("unknown section `{v}`"))),
                None => None,
            };
            let control = match self.take("control") {
                Some((_, v)) if v == "corrupted-section" => Some(ControlSpec::CorruptedSection),
                Some((line, v)) => return Err(parse_err(line, "control", format!("unknown control `{v}`"))),
                None => None,
            };
            EntryKind::Supported(EntrySpec { group, isotropy, k, section, control })
        };
        if let Some((key, (line, _))) = self.fields.into_iter().next() {
            return Err(parse_err(line, &key, "unknown key"));
        }
        Ok(CorpusEntry { id: self.id, line: self.line, kind, s_values, claims, expected })
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut entries: Vec<CorpusEntry> = Vec::new();
    let mut current: Option<Pending> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let inner = header
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line, "header", "missing closing `]`"))?;
            let id = inner
                .trim()
                .strip_prefix("entry")
                .map(str::trim)
                .filter(|id| !id.is_empty() && !id.contains(char::is_whitespace))
                .ok_or_else(|| parse_err(line, "header", "expected `[entry <id>]`"))?;
            if let Some(p) = current.take() {
                entries.push(p.finish()?);
            }
            if entries.iter().any(|e| e.id == id) {
                return Err(parse_err(line, "header", format!("duplicate entry `{id}`")));
            }
            current = Some(Pending { id: id.to_string(), line, ..Default::default() });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| parse_err(line, content, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let pending = current.as_mut().ok_or_else(|| parse_err(line, key, "field outside an entry"))?;
        if pending.fields.insert(key.to_string(), (line, value.to_string())).is_some() {
            return Err(parse_err(line, key, "duplicate key"));
        }
    }
    if let Some(p) = current.take() {
        entries.push(p.finish()?);
    }
    Ok(entries)
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CorpusError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_corpus(&text)
}
