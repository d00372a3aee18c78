//! Operations on algebras: basis changes, direct sums, dimension
//! products and isomorphism equation systems.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::algebra::{AlgebraDef, Gamma};
use crate::error::{Error, Result};
use crate::hcnumber::HNumber;
use crate::linalg::{self, Matrix};
use crate::ops::in_multi;
use crate::scalar::{Scalar, Symbol};

/// An invertible change of basis `f_r = sum_s L[r][s] e_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisTransform {
    l: Matrix,
    inv: Matrix,
}

impl BasisTransform {
    pub fn new(l: Matrix) -> Result<Self> {
        let n = l.len();
        if n == 0 || l.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("basis transform must be a nonempty square matrix".into()));
        }
        if l.iter().flatten().any(Scalar::is_float) {
            return Err(Error::ExactnessMismatch);
        }
        let inv = linalg::inverse(&l)?.ok_or(Error::SingularTransform)?;
        Ok(BasisTransform { l, inv })
    }

    pub fn identity(n: usize) -> Self {
        let l: Matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        BasisTransform { inv: l.clone(), l }
    }

    /// The transform swapping `e_s` and `e_t` (1-based).
    pub fn swap(n: usize, s: usize, t: usize) -> Result<Self> {
        for index in [s, t] {
            if index == 0 || index > n {
                return Err(Error::IndexOutOfRange { index, dim: n });
            }
        }
        let mut m = BasisTransform::identity(n);
        m.l.swap(s - 1, t - 1);
        m.inv = m.l.clone();
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.l
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inv
    }
}

/// Swaps `e_s` and `e_t` (1-based): rows, columns and component index.
pub fn trans(alg: &AlgebraDef, s: usize, t: usize) -> Result<AlgebraDef> {
    let n = alg.dim();
    for index in [s, t] {
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, dim: n });
        }
    }
    let pi = |i: usize| {
        if i == s - 1 {
            t - 1
        } else if i == t - 1 {
            s - 1
        } else {
            i
        }
    };
    let g = alg.gamma();
    let gamma = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| g[pi(i)][pi(j)][pi(k)].clone()).collect()).collect())
        .collect();
    Ok(AlgebraDef::new(alg.name(), alg.params().to_vec(), gamma)?.with_meta(alg.comment(), alg.kind()))
}

/// The algebra in the basis `f_r = sum_s L[r][s] e_s`, named `name`.
pub fn gen_iso(l: &BasisTransform, alg: &AlgebraDef, name: &str) -> Result<AlgebraDef> {
    let n = alg.dim();
    if l.dim() != n {
        return Err(Error::DimMismatch(l.dim(), n));
    }
    let g = alg.gamma();
    let (lm, inv) = (&l.l, &l.inv);
    let mut gamma: Gamma = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            // f_i f_j in the e basis
            let mut prod = vec![Scalar::zero(); n];
            for s in 0..n {
                if lm[i][s].is_zero() {
                    continue;
                }
                for t in 0..n {
                    if lm[j][t].is_zero() {
                        continue;
                    }
                    let w = lm[i][s].mul(&lm[j][t])?;
                    for u in 0..n {
                        if !g[s][t][u].is_zero() {
                            prod[u] = prod[u].add(&w.mul(&g[s][t][u])?)?;
                        }
                    }
                }
            }
            for (u, pu) in prod.iter().enumerate() {
                if pu.is_zero() {
                    continue;
                }
                for k in 0..n {
                    if !inv[u][k].is_zero() {
                        gamma[i][j][k] = gamma[i][j][k].add(&pu.mul(&inv[u][k])?)?;
                    }
                }
            }
        }
    }
    AlgebraDef::new(name, alg.params().to_vec(), gamma)
}

fn rename_symbols(alg: &AlgebraDef, map: &BTreeMap<Symbol, Symbol>) -> Result<(Vec<Symbol>, Gamma)> {
    if map.is_empty() {
        return Ok((alg.params().to_vec(), alg.gamma().clone()));
    }
    let bindings: BTreeMap<Symbol, Scalar> = map
        .iter()
        .map(|(from, to)| Ok((from.clone(), Scalar::symbol(to.as_str())?)))
        .collect::<Result<_>>()?;
    let gamma = alg
        .gamma()
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| cell.iter().map(|c| c.substitute(&bindings)).collect())
                .collect()
        })
        .collect::<Result<_>>()?;
    let params = alg.params().iter().map(|p| map.get(p).unwrap_or(p).clone()).collect();
    Ok((params, gamma))
}

/// Parameter lists and constants of two algebras about to be combined.
/// Same-named algebras share their parameters; otherwise a symbol declared
/// by both is prefixed with each algebra's name (`W_p`).
fn merge_params(a: &AlgebraDef, b: &AlgebraDef) -> Result<(Vec<Symbol>, Gamma, Gamma)> {
    let shared: Vec<Symbol> = if a.name() == b.name() {
        Vec::new()
    } else {
        a.params().iter().filter(|p| b.params().contains(p)).cloned().collect()
    };
    let prefix = |alg: &AlgebraDef| -> Result<BTreeMap<Symbol, Symbol>> {
        shared
            .iter()
            .map(|p| Ok((p.clone(), Symbol::new(&format!("{}_{}", alg.name(), p))?)))
            .collect()
    };
    let (pa, ga) = rename_symbols(a, &prefix(a)?)?;
    let (pb, gb) = rename_symbols(b, &prefix(b)?)?;
    let mut params: Vec<Symbol> = pa.clone();
    for p in pb {
        if params.contains(&p) {
            if a.name() != b.name() {
                return Err(Error::ParamClash(format!(
                    "`{p}` is declared by both `{}` and `{}` after prefixing",
                    a.name(),
                    b.name()
                )));
            }
        } else {
            params.push(p);
        }
    }
    params.sort();
    Ok((params, ga, gb))
}

/// Block-diagonal direct sum, `a` first.
pub fn dir_sum2(a: &AlgebraDef, b: &AlgebraDef, name: &str) -> Result<AlgebraDef> {
    let (params, ga, gb) = merge_params(a, b)?;
    let (na, nb) = (a.dim(), b.dim());
    let n = na + nb;
    let mut gamma: Gamma = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for i in 0..na {
        for j in 0..na {
            for k in 0..na {
                gamma[i][j][k] = ga[i][j][k].clone();
            }
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            for k in 0..nb {
                gamma[na + i][na + j][na + k] = gb[i][j][k].clone();
            }
        }
    }
    AlgebraDef::new(name, params, gamma)
}

/// Left fold of [`dir_sum2`].
pub fn dir_sum_n(algs: &[AlgebraDef], name: &str) -> Result<AlgebraDef> {
    let (first, rest) = algs
        .split_first()
        .ok_or_else(|| Error::Malformed("direct sum of an empty list".into()))?;
    let mut acc = first.clone();
    for b in rest {
        acc = dir_sum2(&acc, b, name)?;
    }
    acc.renamed(name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    /// Tensor product of the structure constants.
    Commutative,
    /// Doubling of `a` by a two-dimensional `b` with `e2^2 = p*e1 + q*e2`.
    NonCommutative,
}

/// Multiplies the dimension of `a` by that of `b`.
///
/// `Commutative` pairs `(e_i, f_u)` into index `(i-1)*dim(b) + u`.
/// `NonCommutative` takes pairs `(x, y)` of elements of `a` with
/// `(x1,y1)(x2,y2) = (x1 x2 + p conj(y2) y1, y2 x1 + y1 conj(x2) + q conj(y2) y1)`,
/// basis `(e_1,0), ..., (e_n,0), (0,e_1), ..., (0,e_n)`.
pub fn multi_dim(a: &AlgebraDef, b: &AlgebraDef, mode: ProductMode, name: &str) -> Result<AlgebraDef> {
    let (params, ga, gb) = merge_params(a, b)?;
    match mode {
        ProductMode::Commutative => {
            let (na, nb) = (a.dim(), b.dim());
            let n = na * nb;
            let mut gamma: Gamma = vec![vec![vec![Scalar::zero(); n]; n]; n];
            for i in 0..na {
                for j in 0..na {
                    for k in 0..na {
                        if ga[i][j][k].is_zero() {
                            continue;
                        }
                        for u in 0..nb {
                            for v in 0..nb {
                                for w in 0..nb {
                                    if !gb[u][v][w].is_zero() {
                                        gamma[i * nb + u][j * nb + v][k * nb + w] = ga[i][j][k].mul(&gb[u][v][w])?;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            AlgebraDef::new(name, params, gamma)
        }
        ProductMode::NonCommutative => {
            let a2 = AlgebraDef::new(a.name(), params.clone(), ga)?;
            let b2 = AlgebraDef::new(b.name(), params.clone(), gb)?;
            double(&a2, &b2, params, name)
        }
    }
}

fn double(a: &AlgebraDef, b: &AlgebraDef, params: Vec<Symbol>, name: &str) -> Result<AlgebraDef> {
    if b.dim() != 2 || !b.is_first_basis_identity() {
        return Err(Error::UnsupportedDoubling(format!(
            "`{}` must be two-dimensional with e1 as identity",
            b.name()
        )));
    }
    if !a.is_first_basis_identity() {
        return Err(Error::UnsupportedDoubling(format!("`{}` has no conjugation (e1 is not the identity)", a.name())));
    }
    let p = b.constant(1, 1, 0).clone();
    let q = b.constant(1, 1, 1).clone();
    let n = a.dim();
    let conj = |x: &HNumber| {
        let mut c = x.coeffs().to_vec();
        c.iter_mut().skip(1).for_each(|v| *v = v.neg());
        HNumber::new(c)
    };
    let mul = |x: &HNumber, y: &HNumber| in_multi(x, y, a);
    let add = crate::ops::in_add;
    let scale = crate::ops::scalar_mul;
    let zero = HNumber::zeros(n);
    let elem = |s: usize| -> Result<(HNumber, HNumber)> {
        let e = |i| HNumber::basis(n, i + 1);
        Ok(if s < n { (e(s)?, zero.clone()) } else { (zero.clone(), e(s - n)?) })
    };
    let mut gamma: Gamma = Vec::with_capacity(2 * n);
    for s in 0..2 * n {
        let (x1, y1) = elem(s)?;
        let mut row = Vec::with_capacity(2 * n);
        for t in 0..2 * n {
            let (x2, y2) = elem(t)?;
            let y2c_y1 = mul(&conj(&y2)?, &y1)?;
            let first = add(&mul(&x1, &x2)?, &scale(&p, &y2c_y1)?)?;
            let second = add(&add(&mul(&y2, &x1)?, &mul(&y1, &conj(&x2)?)?)?, &scale(&q, &y2c_y1)?)?;
            let mut cell = first.into_coeffs();
            cell.extend(second.into_coeffs());
            row.push(cell);
        }
        gamma.push(row);
    }
    AlgebraDef::new(name, params, gamma)
}

/// Polynomial conditions on `L` for `f_r = sum_s L_rs e_s` to carry the
/// multiplication of `source` onto that of `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoSystem {
    pub dim: usize,
    /// `L_r_s`, row-major.
    pub unknowns: Vec<Symbol>,
    /// `((i, j, m), sum_k gamma_ij^k L_km - sum_pq L_ip L_jq delta_pq^m)`, 1-based.
    pub equations: Vec<((usize, usize, usize), Scalar)>,
    /// `det L`, required nonzero.
    pub nondegeneracy: Scalar,
}

pub fn unknown_symbol(r: usize, s: usize) -> Symbol {
    Symbol::new(&format!("L_{r}_{s}")).expect("valid identifier")
}

pub fn sys_izo(source: &AlgebraDef, target: &AlgebraDef) -> Result<IsoSystem> {
    let n = source.dim();
    if target.dim() != n {
        return Err(Error::DimMismatch(n, target.dim()));
    }
    let unknowns: Vec<Symbol> = (1..=n).flat_map(|r| (1..=n).map(move |s| unknown_symbol(r, s))).collect();
    let l: Matrix = (0..n)
        .map(|r| (0..n).map(|s| Scalar::symbol(unknowns[r * n + s].as_str())).collect())
        .collect::<Result<_>>()?;
    let (g, d) = (source.gamma(), target.gamma());
    let mut equations = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                let mut e = Scalar::zero();
                for k in 0..n {
                    if !g[i][j][k].is_zero() {
                        e = e.add(&g[i][j][k].mul(&l[k][m])?)?;
                    }
                }
                for p in 0..n {
                    for q in 0..n {
                        if !d[p][q][m].is_zero() {
                            e = e.sub(&l[i][p].mul(&l[j][q])?.mul(&d[p][q][m])?)?;
                        }
                    }
                }
                equations.push(((i + 1, j + 1, m + 1), e));
            }
        }
    }
    Ok(IsoSystem {
        dim: n,
        unknowns,
        equations,
        nondegeneracy: linalg::determinant(&l)?,
    })
}

impl IsoSystem {
    /// Equation values and determinant after substituting `L`.
    pub fn substitute(&self, l: &Matrix) -> Result<(Vec<Scalar>, Scalar)> {
        let n = self.dim;
        if l.len() != n || l.iter().any(|r| r.len() != n) {
            return Err(Error::DimMismatch(l.len(), n));
        }
        let bindings: BTreeMap<Symbol, Scalar> = (0..n)
            .flat_map(|r| (0..n).map(move |s| (r, s)))
            .map(|(r, s)| (self.unknowns[r * n + s].clone(), l[r][s].clone()))
            .collect();
        let values = self
            .equations
            .iter()
            .map(|(_, e)| e.substitute(&bindings))
            .collect::<Result<_>>()?;
        Ok((values, self.nondegeneracy.substitute(&bindings)?))
    }

    /// True when `L` zeroes every equation and has nonzero determinant.
    pub fn admits(&self, l: &Matrix) -> Result<bool> {
        let (values, det) = self.substitute(l)?;
        Ok(values.iter().all(|v| v.equals(&v.zero_like())) && !det.equals(&det.zero_like()))
    }
}

/// Plain-text listing for external solvers.
pub fn export_iso_system(sys: &IsoSystem) -> String {
    let mut out = String::new();
    for u in &sys.unknowns {
        let _ = writeln!(out, "unknown {u}");
    }
    for ((i, j, m), e) in &sys.equations {
        let _ = writeln!(out, "eq {i} {j} {m}: {e}");
    }
    let _ = writeln!(out, "nondegeneracy: {}", sys.nondegeneracy);
    out
}

/// Reads back the output of [`export_iso_system`].
pub fn parse_iso_system(text: &str) -> Result<IsoSystem> {
    let mut unknowns = Vec::new();
    let mut equations = Vec::new();
    let mut nondegeneracy = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        let bad = |msg: &str| Error::Malformed(format!("line {}: {msg}", lineno + 1));
        if line.is_empty() {
            continue;
        } else if let Some(u) = line.strip_prefix("unknown ") {
            unknowns.push(Symbol::new(u.trim())?);
        } else if let Some(rest) = line.strip_prefix("eq ") {
            let (idx, poly) = rest.split_once(':').ok_or_else(|| bad("missing `:`"))?;
            let idx: Vec<usize> = idx
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("bad index")))
                .collect::<Result<_>>()?;
            let [i, j, m] = idx[..] else {
                return Err(bad("expected three indices"));
            };
            equations.push(((i, j, m), poly.trim().parse()?));
        } else if let Some(det) = line.strip_prefix("nondegeneracy:") {
            nondegeneracy = Some(det.trim().parse()?);
        } else {
            return Err(bad("unrecognized line"));
        }
    }
    let dim = (unknowns.len() as f64).sqrt() as usize;
    if dim * dim != unknowns.len() {
        return Err(Error::Malformed("unknown count is not a square".into()));
    }
    Ok(IsoSystem {
        dim,
        unknowns,
        equations,
        nondegeneracy: nondegeneracy.ok_or_else(|| Error::Malformed("missing nondegeneracy line".into()))?,
    })
}
