//! Constraint tables: parsing, the embedded builtin catalog, lookup with the
//! documented fallbacks, and the spin-adapted Pauli constraints.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use num_traits::Zero;

use crate::constraint::{normalize_inequality, ConstraintKind, LinearConstraint, Sense};
use crate::error::{Error, Result};
use crate::rational::{fraction_string, parse_rational, q, Q};
use crate::setting::{Setting, SettingKey};

/// Embedded builtin tables, in the same text format accepted by [`load_catalog`].
pub const BUILTIN_SOURCE: &str = include_str!("../data/builtin.gpc");

/// Largest `d` for which the `N = 3, S = 1/2` constraints are tabulated; beyond
/// it they are extended by stabilization and flagged as such.
pub const STABILIZATION_TABULATED_UP_TO: u32 = 9;

/// Key of a catalog block: a spin-adapted orbital setting or a spin-independent
/// spin-orbital setting of dimension `dim = 2d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogKey {
    Orbital(SettingKey),
    SpinOrbital { n_particles: u32, dim: u32 },
}

impl CatalogKey {
    pub fn dim(&self) -> usize {
        match self {
            CatalogKey::Orbital(k) => k.d(),
            CatalogKey::SpinOrbital { dim, .. } => *dim as usize,
        }
    }

    pub fn n_particles(&self) -> u32 {
        match self {
            CatalogKey::Orbital(k) => k.n_particles,
            CatalogKey::SpinOrbital { n_particles, .. } => *n_particles,
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKey::Orbital(k) => k.fmt(f),
            CatalogKey::SpinOrbital { n_particles, dim } => {
                write!(f, "(N={n_particles}, {dim} spin orbitals)")
            }
        }
    }
}

/// One block of constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub constraints: Vec<LinearConstraint>,
    pub provenance: String,
}

/// Immutable map from settings (without `M`) to ordered constraint lists.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstraintCatalog {
    pub entries: BTreeMap<CatalogKey, CatalogEntry>,
    pub warnings: Vec<String>,
}

/// Result of a catalog lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct Lookup {
    pub gpcs: Vec<LinearConstraint>,
    pub provenance: String,
    /// Constraints obtained by zero-padding beyond the tabulated range.
    pub extended_by_stabilization: bool,
}

impl Lookup {
    /// Inequality GPCs with their 1-based catalog index.
    pub fn inequalities(&self) -> impl Iterator<Item = (usize, &LinearConstraint)> {
        self.gpcs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_equality())
            .map(|(i, c)| (i + 1, c))
    }
}

/// The catalog embedded in the crate, with `N = 3, S = 1/2` blocks padded up to
/// `d = 9`.
pub fn builtin_catalog() -> ConstraintCatalog {
    let mut cat = parse_catalog(BUILTIN_SOURCE, "builtin").expect("embedded catalog parses");
    let base_key = CatalogKey::Orbital(SettingKey::new(3, 3, 1));
    let base = cat.entries[&base_key].clone();
    for d in 4..=STABILIZATION_TABULATED_UP_TO {
        cat.entries.insert(
            CatalogKey::Orbital(SettingKey::new(3, d, 1)),
            CatalogEntry {
                constraints: base.constraints.iter().map(|c| c.padded(d as usize)).collect(),
                provenance: format!("builtin (N=3, S=1/2, stabilized from d=3 to d={d})"),
            },
        );
    }
    cat.warnings.clear();
    cat
}

/// Parses catalog text from a reader.
pub fn load_catalog<R: BufRead>(source: R, origin: &str) -> Result<ConstraintCatalog> {
    let mut text = String::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.map_err(|e| Error::parse(i + 1, 1, e.to_string()))?;
        text.push_str(&line);
        text.push('\n');
    }
    parse_catalog(&text, origin)
}

/// Parses catalog text. A later block for the same setting replaces the earlier
/// one and records a warning.
pub fn parse_catalog(text: &str, origin: &str) -> Result<ConstraintCatalog> {
    let mut cat = ConstraintCatalog::default();
    let mut current: Option<(CatalogKey, CatalogEntry, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_fields(raw);
        match fields[0].1 {
            "setting" => {
                if let Some((key, entry, _)) = current.take() {
                    cat.insert(key, entry);
                }
                let key = parse_setting_header(&fields, line_no)?;
                current = Some((
                    key,
                    CatalogEntry {
                        constraints: Vec::new(),
                        provenance: format!("{origin}:{line_no}"),
                    },
                    line_no,
                ));
            }
            "gpc" => {
                let Some((key, entry, _)) = current.as_mut() else {
                    return Err(Error::parse(line_no, fields[0].0, "gpc row before any setting header"));
                };
                let dim = key.dim();
                if fields.len() != dim + 3 {
                    return Err(Error::parse(
                        line_no,
                        fields[0].0,
                        format!(
                            "expected bound, {dim} coefficients and a relation, found {} fields",
                            fields.len() - 1
                        ),
                    ));
                }
                let mut nums = Vec::with_capacity(dim + 1);
                for (col, tok) in &fields[1..dim + 2] {
                    nums.push(parse_rational(tok).map_err(|e| Error::from_number(line_no, col - 1, e))?);
                }
                let (col, rel) = fields[dim + 2];
                let sense = match rel {
                    "leq" => Sense::Leq,
                    "geq" => Sense::Geq,
                    "eq" => Sense::Eq,
                    _ => return Err(Error::parse(line_no, col, format!("unknown relation {rel:?}"))),
                };
                let bound = nums.remove(0);
                let c = normalize_inequality(&nums, &bound, sense);
                if c.has_zero_normal() {
                    return Err(Error::parse(line_no, fields[0].0, "all coefficients are zero"));
                }
                let label = format!("GPC {}", entry.constraints.len() + 1);
                entry.constraints.push(c.with_label(label));
            }
            other => {
                return Err(Error::parse(line_no, fields[0].0, format!("unknown keyword {other:?}")));
            }
        }
    }
    if let Some((key, entry, _)) = current.take() {
        cat.insert(key, entry);
    }
    Ok(cat)
}

/// Splits on whitespace, keeping 1-based start columns.
pub(crate) fn split_fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((line[..s].chars().count() + 1, &line[s..]));
    }
    out
}

fn parse_u32(tok: (usize, &str), line: usize) -> Result<u32> {
    tok.1
        .parse::<u32>()
        .map_err(|_| Error::parse(line, tok.0, format!("expected a non-negative integer, found {:?}", tok.1)))
}

fn parse_setting_header(fields: &[(usize, &str)], line: usize) -> Result<CatalogKey> {
    if fields.len() != 4 {
        return Err(Error::parse(line, fields[0].0, "expected `setting <N> <d> <2S>`"));
    }
    let n = parse_u32(fields[1], line)?;
    let d = parse_u32(fields[2], line)?;
    if n == 0 || d == 0 {
        return Err(Error::parse(line, fields[1].0, "N and d must be positive"));
    }
    if fields[3].1 == "spin-orbital" {
        return Ok(CatalogKey::SpinOrbital {
            n_particles: n,
            dim: d,
        });
    }
    let two_s = parse_u32(fields[3], line)?;
    Ok(CatalogKey::Orbital(SettingKey::new(n, d, two_s)))
}

impl ConstraintCatalog {
    fn insert(&mut self, key: CatalogKey, entry: CatalogEntry) {
        if let Some(old) = self.entries.insert(key, entry) {
            self.warnings.push(format!(
                "block {} for {key} replaces earlier block {}",
                self.entries[&key].provenance, old.provenance
            ));
        }
    }

    /// Adds every entry of `other`, replacing existing blocks with a warning.
    pub fn extend(&mut self, other: ConstraintCatalog) {
        self.warnings.extend(other.warnings);
        for (k, e) in other.entries {
            self.insert(k, e);
        }
    }

    /// GPCs of an orbital setting, applying the documented fallbacks:
    /// `S = 0` and `N ≤ 2` have no GPCs, and `N = 3, S = 1/2` beyond the tabulated
    /// range is extended by zero-padding.
    pub fn lookup(&self, key: SettingKey) -> Result<Lookup> {
        if let Some(e) = self.entries.get(&CatalogKey::Orbital(key)) {
            return Ok(Lookup {
                gpcs: e.constraints.clone(),
                provenance: e.provenance.clone(),
                extended_by_stabilization: false,
            });
        }
        if key.two_s == 0 || key.n_particles <= 2 {
            return Ok(Lookup {
                gpcs: Vec::new(),
                provenance: "no GPCs beyond the Pauli constraints".to_string(),
                extended_by_stabilization: false,
            });
        }
        if key.n_particles == 3 && key.two_s == 1 && key.n_orbitals > STABILIZATION_TABULATED_UP_TO {
            if let Some(e) = self.entries.get(&CatalogKey::Orbital(SettingKey::new(3, 3, 1))) {
                return Ok(Lookup {
                    gpcs: e.constraints.iter().map(|c| c.padded(key.d())).collect(),
                    provenance: format!("extended by stabilization to d={}", key.n_orbitals),
                    extended_by_stabilization: true,
                });
            }
        }
        Err(Error::NotCovered(format!("no GPC table for {key}")))
    }

    /// Constraints of a spin-independent block.
    pub fn lookup_spin_orbital(&self, n_particles: u32, dim: u32) -> Result<&CatalogEntry> {
        self.entries
            .get(&CatalogKey::SpinOrbital { n_particles, dim })
            .ok_or_else(|| Error::NotCovered(format!("no spin-orbital table for N={n_particles}, dim={dim}")))
    }

    /// Orbital settings with explicit tables and their inequality GPC counts.
    pub fn settings(&self) -> Vec<(CatalogKey, usize)> {
        self.entries
            .iter()
            .map(|(k, e)| (*k, e.constraints.iter().filter(|c| !c.is_equality()).count()))
            .collect()
    }

    /// Renders the catalog in the text format read by [`parse_catalog`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (key, entry) in &self.entries {
            match key {
                CatalogKey::Orbital(k) => {
                    out.push_str(&format!("setting {} {} {}\n", k.n_particles, k.n_orbitals, k.two_s))
                }
                CatalogKey::SpinOrbital { n_particles, dim } => {
                    out.push_str(&format!("setting {n_particles} {dim} spin-orbital\n"))
                }
            }
            for c in &entry.constraints {
                let (a, b, sense) = c.as_table_row();
                out.push_str("gpc ");
                out.push_str(&fraction_string(&b));
                for x in &a {
                    out.push(' ');
                    out.push_str(&fraction_string(x));
                }
                out.push(' ');
                out.push_str(sense.keyword());
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

/// The spin-adapted Pauli description of `Σ^(e)_{S,M}`: ordering, the box,
/// normalization, and `Σ_{m≤K+j} λ_m ≤ N − 2S + j` for `j = 1..2S−1`.
pub fn pauli_constraints(setting: &Setting) -> Vec<LinearConstraint> {
    let mut out = plain_pauli_constraints(setting.d(), setting.n_particles, 2);
    let d = setting.d();
    let (n, two_s, k) = (setting.n_particles as i64, setting.two_s as i64, setting.k() as usize);
    for j in 1..two_s.max(1) {
        let upto = (k + j as usize).min(d);
        let mut kappa = vec![Q::zero(); d];
        for x in kappa.iter_mut().take(upto) {
            *x = q(-1);
        }
        out.push(
            LinearConstraint::geq(q(n - two_s + j), kappa, ConstraintKind::SpinPauli)
                .with_label(format!("spin Pauli j={j}")),
        );
    }
    out
}

/// Ordering `λ_i ≥ λ_{i+1}`, `λ_d ≥ 0`, the box `λ_1 ≤ cap` and `Σλ = N`.
pub fn plain_pauli_constraints(d: usize, n_particles: u32, cap: i64) -> Vec<LinearConstraint> {
    let mut out = Vec::new();
    for i in 0..d {
        let mut kappa = vec![Q::zero(); d];
        kappa[i] = q(1);
        if i + 1 < d {
            kappa[i + 1] = q(-1);
            out.push(
                LinearConstraint::geq(Q::zero(), kappa, ConstraintKind::Ordering)
                    .with_label(format!("λ{} ≥ λ{}", i + 1, i + 2)),
            );
        } else {
            out.push(
                LinearConstraint::geq(Q::zero(), kappa, ConstraintKind::Ordering)
                    .with_label(format!("λ{} ≥ 0", i + 1)),
            );
        }
    }
    let mut kappa = vec![Q::zero(); d];
    kappa[0] = q(-1);
    out.push(LinearConstraint::geq(q(cap), kappa, ConstraintKind::Box).with_label(format!("λ1 ≤ {cap}")));
    out.push(
        LinearConstraint::eq(q(-(n_particles as i64)), vec![q(1); d], ConstraintKind::Normalization)
            .with_label(format!("Σλ = {n_particles}")),
    );
    out
}
