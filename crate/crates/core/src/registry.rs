//! Named storage of algebras: immutable built-ins plus user entries kept
//! one `<name>.hns` file per algebra in a library directory.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::algebra::{in_convert_hns_text, viz_hns, AlgebraDef};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Symbol};

pub const LIB_ENV: &str = "HCNS_LIB";
const EXTENSION: &str = "hns";

// Golden table.
const HAB: [[&str; 4]; 4] = [
    ["e1", "e2", "e3", "e4"],
    ["e2", "-alpha*e1", "e4", "-alpha*e3"],
    ["e3", "-e4", "-beta*e1", "beta*e2"],
    ["e4", "alpha*e3", "-beta*e2", "-alpha*beta*e1"],
];

// Golden table.
const Q4N: [[&str; 4]; 4] = [
    ["E1", "E2", "E3", "E4"],
    ["E2", "p*E1 + q*E2", "E4", "p*E3 + q*E4"],
    ["E3", "-E4", "p*E1 + q*E3", "-p*E2 - q*E4"],
    ["E4", "-p*E3 - q*E4", "p*E2 + q*E4", "-p^2*E1 - p*q*E2 - p*q*E3 - q^2*E4"],
];

// Golden table.
const TRIPLEX: [[&str; 3]; 3] = [
    ["e1", "e2", "e3"],
    ["e2", "(e3 - e1)/2", "-e2"],
    ["e3", "-e2", "e1"],
];

// Golden table.
const R_PLUS_C: [[&str; 3]; 3] = [
    ["e1", "0", "0"],
    ["0", "e2", "e3"],
    ["0", "e3", "-e2"],
];

/// Two-dimensional algebra with identity `e1` and `e2^2 = p*e1 + q*e2`
/// for the given constant strings. Defining relation, not a table.
fn two_dim(name: &str, params: &[&str], p: &str, q: &str) -> Result<AlgebraDef> {
    AlgebraDef::from_strs(
        name,
        params,
        &[vec![vec!["1", "0"], vec!["0", "1"]], vec![vec!["0", "1"], vec![p, q]]],
    )
}

fn table<const N: usize>(rows: &[[&str; N]; N], name: &str) -> Result<AlgebraDef> {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    in_convert_hns_text(&rows, name)
}

/// Every built-in, in a fixed order.
pub fn builtins() -> Vec<AlgebraDef> {
    let build = || -> Result<Vec<AlgebraDef>> {
        let hab = table(&HAB, "Hab")?.with_meta("generalized quaternions H(alpha, beta)", "associative noncommutative");
        let ones: BTreeMap<Symbol, Scalar> = ["alpha", "beta"]
            .iter()
            .map(|s| (Symbol::new(s).unwrap(), Scalar::one()))
            .collect();
        let h_gamma = hab
            .gamma()
            .iter()
            .map(|row| row.iter().map(|c| c.iter().map(|x| x.substitute(&ones)).collect()).collect())
            .collect::<Result<_>>()?;
        let h = AlgebraDef::new("H", vec![], h_gamma)?.with_meta("Hamilton quaternions, Hab at alpha = beta = 1", "associative noncommutative");
        Ok(vec![
            AlgebraDef::from_strs("R", &[], &[vec![vec!["1"]]])?.with_meta("real numbers", "field"),
            two_dim("C", &[], "-1", "0")?.with_meta("complex numbers, e2^2 = -e1", "field"),
            two_dim("D", &[], "1", "0")?.with_meta("double numbers, e2^2 = e1", "commutative"),
            two_dim("Dual", &[], "0", "0")?.with_meta("dual numbers, e2^2 = 0", "commutative"),
            two_dim("W", &["p", "q"], "p", "q")?.with_meta("generalized complex numbers, e2^2 = p*e1 + q*e2", "commutative"),
            h,
            hab,
            table(&Q4N, "Q4N")?.with_meta("noncommutative doubling of W(p, q)", "noncommutative"),
            table(&TRIPLEX, "T")?.with_meta("triplex numbers", "commutative"),
            table(&R_PLUS_C, "RplusC")?.with_meta("direct sum of R and C; identity e1 + e2", "commutative"),
        ])
    };
    build().expect("built-in tables are well formed")
}

/// Library directory from `HCNS_LIB`, else `$HOME/.hcns/lib`.
pub fn default_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(LIB_ENV).filter(|p| !p.is_empty()) {
        return Some(PathBuf::from(p));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".hcns").join("lib"))
}

#[derive(Debug, Clone)]
pub struct Registry {
    entries: BTreeMap<String, AlgebraDef>,
    builtin: BTreeSet<String>,
    storage: Option<PathBuf>,
    skipped: Vec<String>,
}

impl Registry {
    /// Built-ins only, nothing persisted.
    pub fn in_memory() -> Self {
        let defs = builtins();
        Registry {
            builtin: defs.iter().map(|d| d.name().to_string()).collect(),
            entries: defs.into_iter().map(|d| (d.name().to_string(), d)).collect(),
            storage: None,
            skipped: Vec::new(),
        }
    }

    /// Built-ins plus every readable `.hns` file in `dir` (a missing
    /// directory is treated as empty). Unreadable files are skipped with a
    /// warning and listed in [`Registry::skipped`].
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        let mut reg = Registry::in_memory();
        if dir.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(&dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == EXTENSION))
                .collect();
            files.sort();
            for path in files {
                match load_file(&path) {
                    Ok(def) if reg.entries.contains_key(def.name()) => {
                        log::warn!("{}: `{}` is already defined, skipped", path.display(), def.name());
                        reg.skipped.push(path.display().to_string());
                    }
                    Ok(def) => {
                        reg.entries.insert(def.name().to_string(), def);
                    }
                    Err(e) => {
                        log::warn!("{e}; skipped");
                        reg.skipped.push(path.display().to_string());
                    }
                }
            }
        }
        reg.storage = Some(dir);
        Ok(reg)
    }

    /// The registry at [`default_path`], or in memory if there is none.
    pub fn lib_hns() -> Result<Self> {
        match default_path() {
            Some(p) => Registry::open(p),
            None => Ok(Registry::in_memory()),
        }
    }

    pub fn storage_path(&self) -> Option<&Path> {
        self.storage.as_deref()
    }

    pub fn skipped(&self) -> &[String] {
        &self.skipped
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AlgebraDef> {
        self.entries.values()
    }

    pub fn is_builtin(&self, name: &str) -> bool {
        self.builtin.contains(name)
    }

    pub fn search_hns(&self, name: &str) -> Result<&AlgebraDef> {
        self.entries.get(name).ok_or_else(|| Error::NotFound {
            name: name.to_string(),
            suggestions: self.suggestions(name),
        })
    }

    fn suggestions(&self, name: &str) -> Vec<String> {
        let lower = name.to_lowercase();
        let mut scored: Vec<(usize, &String)> = self
            .entries
            .keys()
            .map(|k| (strsim::levenshtein(&lower, &k.to_lowercase()), k))
            .filter(|(d, k)| *d <= 2.max(k.len() / 3))
            .collect();
        scored.sort();
        scored.into_iter().take(3).map(|(_, k)| k.clone()).collect()
    }

    /// Stores `table` under `name`, persisting it when a library directory
    /// is set.
    pub fn add_hns(&mut self, name: &str, table: AlgebraDef, comment: &str, kind: &str) -> Result<()> {
        if self.entries.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let def = table.renamed(name)?.with_meta(comment, kind);
        if let Some(dir) = &self.storage {
            save_file(dir, &def)?;
        }
        self.entries.insert(name.to_string(), def);
        Ok(())
    }

    /// Removes a user entry and its file.
    pub fn refill_hns(&mut self, name: &str) -> Result<AlgebraDef> {
        if self.is_builtin(name) {
            return Err(Error::BuiltinProtected(name.to_string()));
        }
        let def = self.entries.remove(name).ok_or_else(|| Error::NotFound {
            name: name.to_string(),
            suggestions: self.suggestions(name),
        })?;
        if let Some(dir) = &self.storage {
            let path = file_path(dir, name);
            if path.exists() {
                fs::remove_file(path)?;
            }
        }
        Ok(def)
    }

    /// Every entry with its metadata and Cayley table, built-ins first,
    /// each section in name order.
    pub fn viz_lib_hns(&self) -> String {
        let mut out = String::new();
        for (title, builtin) in [("built-in", true), ("custom", false)] {
            let _ = writeln!(out, "== {title} ==");
            for def in self.entries.values().filter(|d| self.is_builtin(d.name()) == builtin) {
                let _ = writeln!(out, "{}", describe(def));
                if let Ok(t) = viz_hns(def, "e") {
                    let _ = writeln!(out, "{t}");
                }
            }
        }
        out
    }
}

/// One-line summary: name, dimension, parameters, comment.
pub fn describe(def: &AlgebraDef) -> String {
    let params: Vec<&str> = def.params().iter().map(Symbol::as_str).collect();
    let mut s = format!("{} (dim {})", def.name(), def.dim());
    if !params.is_empty() {
        let _ = write!(s, " params: {}", params.join(", "));
    }
    if !def.comment().is_empty() {
        let _ = write!(s, "; {}", def.comment());
    }
    s
}

fn file_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.{EXTENSION}"))
}

pub fn load_file(path: &Path) -> Result<AlgebraDef> {
    let corrupt = |msg: String| Error::CorruptFile {
        path: path.to_path_buf(),
        msg,
    };
    let text = fs::read_to_string(path).map_err(|e| corrupt(e.to_string()))?;
    AlgebraDef::from_file_str(&text).map_err(|e| corrupt(e.to_string()))
}

/// Writes `<dir>/<name>.hns` through a temporary file and rename.
pub fn save_file(dir: &Path, def: &AlgebraDef) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(def.to_file_string().as_bytes())?;
    tmp.flush()?;
    let path = file_path(dir, def.name());
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate;

    #[test]
    fn builtins_validate() {
        let reg = Registry::in_memory();
        assert_eq!(reg.len(), 10);
        for def in reg.iter() {
            assert!(validate(def).is_valid(), "{}", def.name());
        }
        let h = reg.search_hns("H").unwrap();
        assert_eq!(h.cell(4, 4).unwrap().value, vec![Scalar::int(-1), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
    }

    #[test]
    fn not_found_suggests() {
        let reg = Registry::in_memory();
        match reg.search_hns("q4n") {
            Err(Error::NotFound { suggestions, .. }) => assert_eq!(suggestions[0], "Q4N"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn persistence_and_protection() {
        let dir = tempfile::tempdir().unwrap();
        let mut reg = Registry::open(dir.path()).unwrap();
        let c = reg.search_hns("C").unwrap().clone();
        reg.add_hns("C2", c, "copy", "field").unwrap();
        assert!(matches!(reg.add_hns("C2", reg.search_hns("R").unwrap().clone(), "", ""), Err(Error::DuplicateName(_))));
        let again = Registry::open(dir.path()).unwrap();
        assert_eq!(again.search_hns("C2").unwrap().comment(), "copy");
        assert!(matches!(reg.refill_hns("H"), Err(Error::BuiltinProtected(_))));
        reg.refill_hns("C2").unwrap();
        assert!(matches!(reg.refill_hns("C2"), Err(Error::NotFound { .. })));
        assert!(Registry::open(dir.path()).unwrap().search_hns("C2").is_err());
    }

    #[test]
    fn corrupt_files_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("bad.hns"), "name = ").unwrap();
        let reg = Registry::open(dir.path()).unwrap();
        assert_eq!(reg.skipped().len(), 1);
        assert_eq!(reg.len(), 10);
    }
}
