//! Algebra definitions by structure constants.
//!
//! `gamma[i][j][k]` is the coefficient of `e_k` in the product `e_i * e_j`
//! (0-based in code, 1-based in every rendered text). The three nested
//! levels are rows of the Cayley table, cells of a row, and the structure
//! constants of one cell.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcnumber::{parse_natural, HNumber, NaturalForm};
use crate::scalar::{is_identifier, Scalar, Symbol};

pub type Gamma = Vec<Vec<Vec<Scalar>>>;

/// A hypercomplex number system.
#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraDef {
    name: String,
    params: Vec<Symbol>,
    gamma: Gamma,
    comment: String,
    kind: String,
}

/// One cell of a Cayley table.
#[derive(Clone, PartialEq, Debug)]
pub struct CayleyCell {
    /// 1-based row (left factor).
    pub row: usize,
    /// 1-based column (right factor).
    pub col: usize,
    pub value: Vec<Scalar>,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Finding {
    InvalidName(String),
    Shape(String),
    NonExact { i: usize, j: usize, k: usize },
    UndeclaredSymbol { i: usize, j: usize, k: usize, symbol: String },
    /// Whether `e1` is a two-sided identity.
    FirstBasisIdentity(bool),
    Commutative(bool),
    Associative(bool),
}

impl Finding {
    pub fn is_fatal(&self) -> bool {
        !matches!(
            self,
            Finding::FirstBasisIdentity(_) | Finding::Commutative(_) | Finding::Associative(_)
        )
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::InvalidName(n) => write!(f, "invalid algebra name `{n}`"),
            Finding::Shape(m) => write!(f, "shape: {m}"),
            Finding::NonExact { i, j, k } => {
                write!(f, "gamma[{}][{}][{}] is not exact", i + 1, j + 1, k + 1)
            }
            Finding::UndeclaredSymbol { i, j, k, symbol } => write!(
                f,
                "gamma[{}][{}][{}] uses undeclared symbol `{symbol}`",
                i + 1,
                j + 1,
                k + 1
            ),
            Finding::FirstBasisIdentity(b) => write!(f, "e1 two-sided identity: {b}"),
            Finding::Commutative(b) => write!(f, "commutative: {b}"),
            Finding::Associative(b) => write!(f, "associative: {b}"),
        }
    }
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct Validation {
    pub findings: Vec<Finding>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        !self.findings.iter().any(Finding::is_fatal)
    }

    pub fn fatal(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.is_fatal())
    }

    fn flag(&self, pick: impl Fn(&Finding) -> Option<bool>) -> Option<bool> {
        self.findings.iter().find_map(pick)
    }

    pub fn first_basis_identity(&self) -> Option<bool> {
        self.flag(|f| match f {
            Finding::FirstBasisIdentity(b) => Some(*b),
            _ => None,
        })
    }

    pub fn commutative(&self) -> Option<bool> {
        self.flag(|f| match f {
            Finding::Commutative(b) => Some(*b),
            _ => None,
        })
    }

    pub fn associative(&self) -> Option<bool> {
        self.flag(|f| match f {
            Finding::Associative(b) => Some(*b),
            _ => None,
        })
    }
}

/// Structural checks on raw parts; only fatal findings.
pub fn check_parts(name: &str, params: &[Symbol], gamma: &Gamma) -> Vec<Finding> {
    let mut out = Vec::new();
    if !is_identifier(name) {
        out.push(Finding::InvalidName(name.to_string()));
    }
    let n = gamma.len();
    if n == 0 {
        out.push(Finding::Shape("dimension must be at least 1".into()));
        return out;
    }
    for (i, row) in gamma.iter().enumerate() {
        if row.len() != n {
            out.push(Finding::Shape(format!("row {} has {} cells, expected {n}", i + 1, row.len())));
            continue;
        }
        for (j, cell) in row.iter().enumerate() {
            if cell.len() != n {
                out.push(Finding::Shape(format!(
                    "cell ({},{}) has {} constants, expected {n}",
                    i + 1,
                    j + 1,
                    cell.len()
                )));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    let declared: BTreeSet<&Symbol> = params.iter().collect();
    for (i, row) in gamma.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            for (k, c) in cell.iter().enumerate() {
                if c.is_float() {
                    out.push(Finding::NonExact { i, j, k });
                }
                for s in c.variables() {
                    if !declared.contains(&s) {
                        out.push(Finding::UndeclaredSymbol {
                            i,
                            j,
                            k,
                            symbol: s.to_string(),
                        });
                    }
                }
            }
        }
    }
    out
}

impl AlgebraDef {
    /// Builds a definition; fails with `ValidationFailed` on any fatal
    /// finding (shape, non-exact entry, undeclared symbol, bad name).
    pub fn new(name: &str, params: Vec<Symbol>, gamma: Gamma) -> Result<Self> {
        let fatal = check_parts(name, &params, &gamma);
        if !fatal.is_empty() {
            let msg: Vec<String> = fatal.iter().map(ToString::to_string).collect();
            return Err(Error::ValidationFailed(msg.join("; ")));
        }
        Ok(AlgebraDef {
            name: name.to_string(),
            params,
            gamma,
            comment: String::new(),
            kind: String::new(),
        })
    }

    /// Builds a definition from string constants in the scalar grammar.
    pub fn from_strs(name: &str, params: &[&str], gamma: &[Vec<Vec<&str>>]) -> Result<Self> {
        let params = params.iter().map(|p| Symbol::new(p)).collect::<Result<_>>()?;
        let gamma = gamma
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| cell.iter().map(|s| s.parse()).collect::<Result<Vec<Scalar>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        AlgebraDef::new(name, params, gamma)
    }

    pub fn with_meta(mut self, comment: &str, kind: &str) -> Self {
        self.comment = comment.to_string();
        self.kind = kind.to_string();
        self
    }

    pub fn renamed(mut self, name: &str) -> Result<Self> {
        if !is_identifier(name) {
            return Err(Error::ValidationFailed(Finding::InvalidName(name.into()).to_string()));
        }
        self.name = name.to_string();
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn comment(&self) -> &str {
        &self.comment
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn gamma(&self) -> &Gamma {
        &self.gamma
    }

    /// `gamma[i][j][k]`, 0-based.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.gamma[i][j][k]
    }

    /// Cell `(row, col)`, 1-based.
    pub fn cell(&self, row: usize, col: usize) -> Result<CayleyCell> {
        let n = self.dim();
        for index in [row, col] {
            if index == 0 || index > n {
                return Err(Error::IndexOutOfRange { index, dim: n });
            }
        }
        Ok(CayleyCell {
            row,
            col,
            value: self.gamma[row - 1][col - 1].clone(),
        })
    }

    /// The product `e_i * e_j` (0-based) as a list-form number.
    pub fn basis_product(&self, i: usize, j: usize) -> HNumber {
        HNumber::new(self.gamma[i][j].clone()).expect("exact constants")
    }

    /// Structure constants promoted to `f64`; fails if any is symbolic.
    pub fn float_gamma(&self) -> Result<Vec<Vec<Vec<f64>>>> {
        self.gamma
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.iter()
                            .map(|c| c.as_f64().ok_or(Error::ExactnessMismatch))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_first_basis_identity(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| {
            (0..n).all(|k| {
                let d = if j == k { Scalar::one() } else { Scalar::zero() };
                self.gamma[0][j][k] == d && self.gamma[j][0][k] == d
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.gamma[i][j] == self.gamma[j][i]))
    }

    /// Basis triples `(i, j, k)` (1-based) with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub fn non_associative_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for k in 0..self.dim() {
                    if !self.associates(i, j, k) {
                        out.push((i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        out
    }

    fn associates(&self, i: usize, j: usize, k: usize) -> bool {
        let n = self.dim();
        let g = &self.gamma;
        (0..n).all(|l| {
            let mut left = Scalar::zero();
            let mut right = Scalar::zero();
            for m in 0..n {
                if !g[i][j][m].is_zero() && !g[m][k][l].is_zero() {
                    left = &left + &(&g[i][j][m] * &g[m][k][l]);
                }
                if !g[j][k][m].is_zero() && !g[i][m][l].is_zero() {
                    right = &right + &(&g[j][k][m] * &g[i][m][l]);
                }
            }
            left == right
        })
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.associates(i, j, k))))
    }
}

/// Fatal structure findings plus informational identity, commutativity and
/// associativity verdicts (associativity checked symbolically over all
/// basis triples).
pub fn validate(def: &AlgebraDef) -> Validation {
    let mut findings = check_parts(&def.name, &def.params, &def.gamma);
    if findings.is_empty() {
        findings.push(Finding::FirstBasisIdentity(def.is_first_basis_identity()));
        findings.push(Finding::Commutative(def.is_commutative()));
        findings.push(Finding::Associative(def.is_associative()));
    }
    Validation { findings }
}

/// Natural-form Cayley table to structure constants. Parameters are the
/// symbols found in the cells, in name order.
pub fn in_convert_hns(table: &[Vec<NaturalForm>], name: &str) -> Result<AlgebraDef> {
    let n = table.len();
    let mut basis: Option<&str> = None;
    let mut gamma = Vec::with_capacity(n);
    let mut params = BTreeSet::new();
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed(format!(
                "row {} has {} cells, expected {n}",
                i + 1,
                row.len()
            )));
        }
        let mut cells = Vec::with_capacity(n);
        for (j, cell) in row.iter().enumerate() {
            if let Some(b) = cell.basis() {
                match basis {
                    None => basis = Some(b),
                    Some(expected) if expected != b => {
                        return Err(Error::BasisMismatch {
                            row: i + 1,
                            col: j + 1,
                            expected: expected.to_string(),
                            found: b.to_string(),
                        })
                    }
                    _ => {}
                }
            }
            let list = crate::hcnumber::convert_a(cell, n)?;
            for c in list.coeffs() {
                params.extend(c.variables());
            }
            cells.push(list.into_coeffs());
        }
        gamma.push(cells);
    }
    AlgebraDef::new(name, params.into_iter().collect(), gamma)
}

/// [`in_convert_hns`] on unparsed cell text.
pub fn in_convert_hns_text(table: &[Vec<&str>], name: &str) -> Result<AlgebraDef> {
    let parsed = table
        .iter()
        .map(|row| row.iter().map(|c| parse_natural(c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    in_convert_hns(&parsed, name)
}

/// Parses a three-level list literal `[[[c, ...], ...], ...]` of structure
/// constants in the scalar grammar.
pub fn parse_gamma_list(text: &str) -> Result<Gamma> {
    fn split_top(inner: &str, at: usize) -> Result<Vec<(usize, &str)>> {
        let mut parts = Vec::new();
        let (mut depth, mut start) = (0i32, 0);
        for (i, c) in inner.char_indices() {
            match c {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push((at + start, &inner[start..i]));
                    start = i + 1;
                }
                _ => {}
            }
            if depth < 0 {
                return Err(Error::parse(at + i, "unbalanced brackets"));
            }
        }
        parts.push((at + start, &inner[start..]));
        Ok(parts)
    }
    fn list(text: &str, at: usize) -> Result<Vec<(usize, &str)>> {
        let lead = text.len() - text.trim_start().len();
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse(at + lead, "expected `[...]`"))?;
        split_top(inner, at + lead + 1)
    }
    list(text, 0)?
        .into_iter()
        .map(|(p, row)| {
            list(row, p)?
                .into_iter()
                .map(|(q, cell)| {
                    list(cell, q)?
                        .into_iter()
                        .map(|(_, c)| c.trim().parse())
                        .collect::<Result<Vec<Scalar>>>()
                })
                .collect()
        })
        .collect()
}

/// A rendered Cayley table.
#[derive(Clone, PartialEq, Debug)]
pub struct CayleyTable {
    pub name: String,
    pub basis: String,
    pub cells: Vec<Vec<NaturalForm>>,
}

/// Renders every cell as a natural form in `basis`.
pub fn viz_hns(def: &AlgebraDef, basis: &str) -> Result<CayleyTable> {
    let cells = def
        .gamma
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| {
                    crate::hcnumber::viz_in_a(&HNumber::new(cell.clone())?, basis)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CayleyTable {
        name: def.name.clone(),
        basis: basis.to_string(),
        cells,
    })
}

impl fmt::Display for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.cells.len();
        let mut grid: Vec<Vec<String>> = Vec::with_capacity(n + 1);
        let mut header = vec![self.name.clone()];
        header.extend((1..=n).map(|j| format!("{}{j}", self.basis)));
        grid.push(header);
        for (i, row) in self.cells.iter().enumerate() {
            let mut line = vec![format!("{}{}", self.basis, i + 1)];
            line.extend(row.iter().map(|c| {
                if c.is_zero() {
                    "0".to_string()
                } else {
                    c.to_string()
                }
            }));
            grid.push(line);
        }
        let widths: Vec<usize> = (0..=n)
            .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        for row in &grid {
            let cols: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect();
            writeln!(f, "{}", cols.join(" | ").trim_end())?;
        }
        Ok(())
    }
}

/// On-disk representation: a TOML document.
#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    name: String,
    dim: usize,
    params: Vec<String>,
    #[serde(default)]
    comment: String,
    #[serde(default)]
    kind: String,
    gamma: Vec<Vec<Vec<String>>>,
}

impl AlgebraDef {
    /// Serializes to the algebra file format.
    pub fn to_file_string(&self) -> String {
        let file = AlgebraFile {
            name: self.name.clone(),
            dim: self.dim(),
            params: self.params.iter().map(ToString::to_string).collect(),
            comment: self.comment.clone(),
            kind: self.kind.clone(),
            gamma: self
                .gamma
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| cell.iter().map(ToString::to_string).collect())
                        .collect()
                })
                .collect(),
        };
        toml::to_string(&file).expect("algebra file serializes")
    }

    /// Parses the algebra file format; any problem is reported as `Malformed`.
    pub fn from_file_str(text: &str) -> Result<Self> {
        let file: AlgebraFile =
            toml::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        if file.gamma.len() != file.dim {
            return Err(Error::Malformed(format!(
                "dim = {} but gamma has {} rows",
                file.dim,
                file.gamma.len()
            )));
        }
        let params: Vec<&str> = file.params.iter().map(String::as_str).collect();
        let gamma: Vec<Vec<Vec<&str>>> = file
            .gamma
            .iter()
            .map(|row| row.iter().map(|c| c.iter().map(String::as_str).collect()).collect())
            .collect();
        Ok(AlgebraDef::from_strs(&file.name, &params, &gamma)?.with_meta(&file.comment, &file.kind))
    }
}
