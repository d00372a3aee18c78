//! Arithmetic on hypercomplex numbers inside a given algebra.
//!
//! The product is the bilinear map `(A*B)_k = sum_i sum_j a_i b_j gamma_ij^k`.
//! Everything else is built on it: units and division solve linear systems
//! in the multiplication matrix, roots run a damped Newton iteration on the
//! float image of the product.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraDef;
use crate::error::{Error, Result};
use crate::hcnumber::{convert_a, viz_in_a, HNumber, NaturalForm};
use crate::linalg::{self, Matrix, Solution};
use crate::scalar::Scalar;

/// Which side of the unknown the known factor sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Side {
    /// `A * X`
    #[default]
    Left,
    /// `X * A`
    Right,
}

/// Multiplication by a fixed number as a linear map.
/// For `Left`, `(A*X)_k = sum_j m[k][j] X_j`; for `Right`, `(X*A)_k = sum_i m[k][i] X_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct MulMatrix {
    pub side: Side,
    pub m: Matrix,
}

fn check_dim(a: &HNumber, n: usize) -> Result<()> {
    if a.dim() != n {
        return Err(Error::DimMismatch(a.dim(), n));
    }
    Ok(())
}

fn same_class(a: &HNumber, b: &HNumber) -> Result<()> {
    if a.is_float() != b.is_float() {
        return Err(Error::ExactnessMismatch);
    }
    Ok(())
}

fn zip(a: &HNumber, b: &HNumber, f: impl Fn(&Scalar, &Scalar) -> Result<Scalar>) -> Result<HNumber> {
    check_dim(b, a.dim())?;
    same_class(a, b)?;
    HNumber::new(
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| f(x, y))
            .collect::<Result<_>>()?,
    )
}

pub fn in_add(a: &HNumber, b: &HNumber) -> Result<HNumber> {
    zip(a, b, Scalar::add)
}

pub fn in_sub(a: &HNumber, b: &HNumber) -> Result<HNumber> {
    zip(a, b, Scalar::sub)
}

pub fn neg(a: &HNumber) -> HNumber {
    a.map(|c| Ok(c.neg())).expect("negation is total")
}

pub fn scalar_mul(lambda: &Scalar, a: &HNumber) -> Result<HNumber> {
    a.map(|c| lambda.mul(c))
}

fn natural_basis<'a>(a: &'a NaturalForm, b: &'a NaturalForm) -> Result<&'a str> {
    match (a.basis(), b.basis()) {
        (Some(x), Some(y)) if x != y => Err(Error::MixedBasis(x.into(), y.into())),
        (x, y) => Ok(x.or(y).unwrap_or("e")),
    }
}

/// Sum of two natural forms of dimension `dim`, collected.
pub fn add_natural(a: &NaturalForm, b: &NaturalForm, dim: usize) -> Result<NaturalForm> {
    let basis = natural_basis(a, b)?;
    viz_in_a(&in_add(&convert_a(a, dim)?, &convert_a(b, dim)?)?, basis)
}

pub fn subtr(a: &NaturalForm, b: &NaturalForm, dim: usize) -> Result<NaturalForm> {
    let basis = natural_basis(a, b)?;
    viz_in_a(&in_sub(&convert_a(a, dim)?, &convert_a(b, dim)?)?, basis)
}

/// The algebra product.
pub fn in_multi(a: &HNumber, b: &HNumber, alg: &AlgebraDef) -> Result<HNumber> {
    let n = alg.dim();
    check_dim(a, n)?;
    check_dim(b, n)?;
    same_class(a, b)?;
    if a.is_float() {
        let fa = FloatAlg::new(alg)?;
        return Ok(HNumber::from_f64(&fa.mul(&a.to_f64().unwrap(), &b.to_f64().unwrap())));
    }
    let g = alg.gamma();
    let mut out = vec![Scalar::zero(); n];
    for (i, ai) in a.coeffs().iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs().iter().enumerate() {
            if bj.is_zero() || g[i][j].iter().all(Scalar::is_zero) {
                continue;
            }
            let ab = ai.mul(bj)?;
            for (k, c) in g[i][j].iter().enumerate() {
                if !c.is_zero() {
                    out[k] = out[k].add(&ab.mul(c)?)?;
                }
            }
        }
    }
    HNumber::new(out)
}

/// Product of natural forms, rendered in `out_basis`.
pub fn nat_multi(a: &NaturalForm, b: &NaturalForm, alg: &AlgebraDef, out_basis: &str) -> Result<NaturalForm> {
    let n = alg.dim();
    viz_in_a(&in_multi(&convert_a(a, n)?, &convert_a(b, n)?, alg)?, out_basis)
}

/// Matrix of `X -> A*X` (`Left`) or `X -> X*A` (`Right`).
pub fn mul_matrix(a: &HNumber, alg: &AlgebraDef, side: Side) -> Result<MulMatrix> {
    let n = alg.dim();
    check_dim(a, n)?;
    let g = alg.gamma();
    let zero = a[0].zero_like();
    let mut m = vec![vec![zero; n]; n];
    for (t, at) in a.coeffs().iter().enumerate() {
        if at.is_zero() {
            continue;
        }
        for u in 0..n {
            let cell = match side {
                Side::Left => &g[t][u],
                Side::Right => &g[u][t],
            };
            for (k, c) in cell.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = if at.is_float() { c.promote_to_float()? } else { c.clone() };
                m[k][u] = m[k][u].add(&at.mul(&c)?)?;
            }
        }
    }
    Ok(MulMatrix { side, m })
}

/// The two-sided identity, found by exact elimination over the
/// coefficient field.
pub fn unit(alg: &AlgebraDef) -> Result<HNumber> {
    let n = alg.dim();
    let g = alg.gamma();
    let delta = |a: usize, b: usize| if a == b { Scalar::one() } else { Scalar::zero() };
    let mut rows = Vec::with_capacity(2 * n * n);
    let mut rhs = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| g[i][j][k].clone()).collect());
            rhs.push(delta(j, k));
        }
    }
    for i in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|j| g[i][j][k].clone()).collect());
            rhs.push(delta(i, k));
        }
    }
    match linalg::solve(&rows, &rhs)? {
        Solution::Unique(mut x) => HNumber::new(x.remove(0)),
        Solution::Inconsistent => Err(Error::NoUnit),
        Solution::Underdetermined => Err(Error::NotUnique),
    }
}

/// `[a_1, -a_2, ..., -a_n]`; defined only when `e1` is the identity.
pub fn conjug(a: &HNumber, alg: &AlgebraDef) -> Result<HNumber> {
    check_dim(a, alg.dim())?;
    if !alg.is_first_basis_identity() {
        return Err(Error::UnitNotFirstBasis);
    }
    let mut c = a.coeffs().to_vec();
    for x in c.iter_mut().skip(1) {
        *x = x.neg();
    }
    HNumber::new(c)
}

/// The scalar `A * conj(A)`.
pub fn norma(a: &HNumber, alg: &AlgebraDef) -> Result<Scalar> {
    let p = in_multi(a, &conjug(a, alg)?, alg)?;
    if p.coeffs()[1..].iter().all(|c| c.equals(&c.zero_like())) {
        Ok(p.coeffs()[0].clone())
    } else {
        Err(Error::NonScalarConjProduct(p))
    }
}

/// Divides `b` by `a`: `Left` solves `A*X = B`, `Right` solves `X*A = B`.
pub fn divis(b: &HNumber, a: &HNumber, alg: &AlgebraDef, side: Side) -> Result<HNumber> {
    check_dim(b, alg.dim())?;
    same_class(a, b)?;
    let mm = mul_matrix(a, alg, side)?;
    match linalg::solve(&mm.m, b.coeffs())? {
        Solution::Unique(mut x) => HNumber::new(x.remove(0)),
        _ => Err(Error::SingularDivisor),
    }
}

pub const ROOT_RESIDUAL: f64 = 1e-10;
const STEP_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;
const DEDUP_TOL: f64 = 1e-8;
const SEED: u64 = 0x4843_4e53;

/// Float image of an algebra: the nonzero structure constants.
struct FloatAlg {
    n: usize,
    entries: Vec<(usize, usize, usize, f64)>,
}

impl FloatAlg {
    fn new(alg: &AlgebraDef) -> Result<Self> {
        let g = alg.float_gamma()?;
        let n = alg.dim();
        let mut entries = Vec::new();
        for (i, row) in g.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                for (k, &c) in cell.iter().enumerate() {
                    if c != 0.0 {
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        Ok(FloatAlg { n, entries })
    }

    fn mul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for &(i, j, k, c) in &self.entries {
            out[k] += a[i] * b[j] * c;
        }
        out
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `F(X) = lead(X*X) + B*X + C`, where `lead` is left multiplication by
/// `A` or the identity map.
struct Quadratic<'a> {
    alg: &'a FloatAlg,
    a: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
    c: Vec<f64>,
}

impl Quadratic<'_> {
    fn lead(&self, v: Vec<f64>) -> Vec<f64> {
        match &self.a {
            Some(a) => self.alg.mul(a, &v),
            None => v,
        }
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = self.lead(self.alg.mul(x, x));
        if let Some(b) = &self.b {
            for (ri, bi) in r.iter_mut().zip(self.alg.mul(b, x)) {
                *ri += bi;
            }
        }
        for (ri, ci) in r.iter_mut().zip(&self.c) {
            *ri += ci;
        }
        r
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.alg.n;
        let mut j = DMatrix::zeros(n, n);
        let mut h = vec![0.0; n];
        for col in 0..n {
            h.iter_mut().for_each(|v| *v = 0.0);
            h[col] = 1.0;
            let mut sym = self.alg.mul(&h, x);
            for (s, t) in sym.iter_mut().zip(self.alg.mul(x, &h)) {
                *s += t;
            }
            let mut d = self.lead(sym);
            if let Some(b) = &self.b {
                for (di, bi) in d.iter_mut().zip(self.alg.mul(b, &h)) {
                    *di += bi;
                }
            }
            for (row, v) in d.into_iter().enumerate() {
                j[(row, col)] = v;
            }
        }
        j
    }

    /// Damped (Levenberg-Marquardt) Newton from `x`; the damping vanishes
    /// near a regular root, leaving plain Newton steps.
    fn newton(&self, mut x: Vec<f64>) -> Option<Vec<f64>> {
        let n = self.alg.n;
        let mut r = self.residual(&x);
        let mut cost = r.iter().map(|v| v * v).sum::<f64>();
        let mut mu = 1e-3;
        for _ in 0..MAX_ITER {
            if inf_norm(&r) <= 1e-14 {
                break;
            }
            let j = self.jacobian(&x);
            let jt = j.transpose();
            let g = &jt * DVector::from_column_slice(&r);
            let jtj = &jt * &j;
            let mut accepted = false;
            for _ in 0..30 {
                let damped = &jtj + DMatrix::identity(n, n) * (mu * (1.0 + jtj.diagonal().amax()));
                let Some(step) = damped.lu().solve(&(-&g)) else {
                    mu *= 10.0;
                    continue;
                };
                let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + d).collect();
                let tr = self.residual(&trial);
                let tc = tr.iter().map(|v| v * v).sum::<f64>();
                if tc.is_finite() && tc < cost {
                    let small = step.amax() <= STEP_TOL * (1.0 + inf_norm(&x));
                    x = trial;
                    r = tr;
                    cost = tc;
                    mu = (mu / 3.0).max(1e-15);
                    accepted = true;
                    if small {
                        return (inf_norm(&r) <= ROOT_RESIDUAL).then_some(x);
                    }
                    break;
                }
                mu *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        (inf_norm(&r) <= ROOT_RESIDUAL).then_some(x)
    }
}

/// Sorts lexicographically and drops near-duplicates.
fn dedup_roots(mut roots: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    roots.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in roots {
        let dup = out.iter().any(|s| {
            let d: Vec<f64> = r.iter().zip(s).map(|(a, b)| a - b).collect();
            inf_norm(&d) <= DEDUP_TOL * (1.0 + inf_norm(s))
        });
        if !dup {
            out.push(r);
        }
    }
    out
}

/// Multi-start solve; rounds of random starts continue while they keep
/// finding new roots.
fn multistart(q: &Quadratic, scale: f64, structured: Vec<Vec<f64>>, symmetric: bool) -> Vec<Vec<f64>> {
    let n = q.alg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut found = Vec::new();
    let push = |found: &mut Vec<Vec<f64>>, x: Vec<f64>| {
        if symmetric {
            let m: Vec<f64> = x.iter().map(|v| -v).collect();
            if inf_norm(&q.residual(&m)) <= ROOT_RESIDUAL {
                found.push(m);
            }
        }
        found.push(x);
    };
    for s in structured {
        if let Some(x) = q.newton(s) {
            push(&mut found, x);
        }
    }
    let mut known = 0;
    for round in 0..8 {
        for _ in 0..2 * n + 4 {
            let start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0) * scale).collect();
            if let Some(x) = q.newton(start) {
                push(&mut found, x);
            }
        }
        found = dedup_roots(found);
        if round > 0 && found.len() == known {
            break;
        }
        known = found.len();
    }
    found
}

fn to_numbers(roots: Vec<Vec<f64>>) -> Vec<HNumber> {
    roots.iter().map(|r| HNumber::from_f64(r)).collect()
}

/// Square roots of `a`. Float input: every root found by multi-start
/// Newton, each with residual at most `1e-10`. Exact input: only rational
/// commutative algebras of dimension at most 2, with roots that verify
/// exactly.
pub fn rad2(a: &HNumber, alg: &AlgebraDef) -> Result<Vec<HNumber>> {
    let n = alg.dim();
    check_dim(a, n)?;
    if !a.is_float() {
        return rad2_exact(a, alg);
    }
    let fa = FloatAlg::new(alg)?;
    let av = a.to_f64().unwrap();
    let q = Quadratic {
        alg: &fa,
        a: None,
        b: None,
        c: av.iter().map(|v| -v).collect(),
    };
    let scale = inf_norm(&av).sqrt().max(1e-3);
    let mut structured = Vec::new();
    if alg.is_first_basis_identity() {
        for sign in [1.0, -1.0] {
            let mut s = vec![0.0; n];
            s[0] = sign * av[0].abs().sqrt().max(1e-3);
            structured.push(s);
        }
    }
    let roots = multistart(&q, scale, structured, true);
    if roots.is_empty() {
        return Err(Error::NoRootFound);
    }
    Ok(to_numbers(roots))
}

/// Nearest fraction with denominator at most `1e6`, if within `1e-9`.
fn reconstruct(x: f64) -> Option<BigRational> {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(1_000_000) {
            break;
        }
        let approx = BigRational::new(h2.clone(), k2.clone());
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let err = (num::ToPrimitive::to_f64(&approx).unwrap() - x).abs();
        if err <= 1e-9 * x.abs().max(1.0) {
            return Some(approx);
        }
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    None
}

fn rad2_exact(a: &HNumber, alg: &AlgebraDef) -> Result<Vec<HNumber>> {
    if alg.dim() > 2 || !alg.is_commutative() || a.coeffs().iter().any(|c| c.as_rational().is_none()) {
        return Err(Error::UnsupportedExactRoot);
    }
    let fa = a.promote_to_float()?;
    let numeric = rad2(&fa, alg).map_err(|e| match e {
        Error::ExactnessMismatch => Error::UnsupportedExactRoot,
        e => e,
    })?;
    let mut roots = Vec::new();
    for r in numeric {
        let Some(coeffs) = r
            .to_f64()
            .unwrap()
            .into_iter()
            .map(|v| reconstruct(v).map(Scalar::Rational))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let x = HNumber::new(coeffs)?;
        if in_multi(&x, &x, alg)? == *a && !roots.contains(&x) {
            roots.push(x);
        }
    }
    if roots.is_empty() {
        return Err(Error::NoRootFound);
    }
    Ok(roots)
}

/// Roots of `A*(X*X) + B*X + C = 0` (Float coefficients).
pub fn sqrt_eq(a: &HNumber, b: &HNumber, c: &HNumber, alg: &AlgebraDef) -> Result<Vec<HNumber>> {
    let n = alg.dim();
    for x in [a, b, c] {
        check_dim(x, n)?;
        if !x.is_float() {
            return Err(Error::ExactnessMismatch);
        }
    }
    let fa = FloatAlg::new(alg)?;
    let (av, bv, cv) = (a.to_f64().unwrap(), b.to_f64().unwrap(), c.to_f64().unwrap());
    let q = Quadratic {
        alg: &fa,
        a: Some(av.clone()),
        b: Some(bv.clone()),
        c: cv.clone(),
    };
    let na = inf_norm(&av).max(1e-12);
    let scale = ((inf_norm(&cv) / na).sqrt() + inf_norm(&bv) / na).clamp(1e-3, 1e6);
    let mut roots = multistart(&q, scale, Vec::new(), false);

    if alg.is_commutative() {
        let disc = (|| {
            let bb = in_multi(b, b, alg)?;
            let ac = in_multi(a, c, alg)?;
            in_sub(&bb, &scalar_mul(&Scalar::Float(4.0), &ac)?)
        })()?;
        if let Ok(rs) = rad2(&disc, alg) {
            let two_a = scalar_mul(&Scalar::Float(2.0), a)?;
            for r in rs {
                for num in [in_sub(&r, b)?, in_sub(&neg(&r), b)?] {
                    match divis(&num, &two_a, alg, Side::Left) {
                        Ok(x) => {
                            let xv = x.to_f64().unwrap();
                            if let Some(p) = q.newton(xv) {
                                roots.push(p);
                            }
                        }
                        Err(Error::SingularDivisor) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        roots = dedup_roots(roots);
    }
    if roots.is_empty() {
        return Err(Error::NoRootFound);
    }
    Ok(to_numbers(roots))
}

/// `‖A*(X*X) + B*X + C‖_inf` for Float inputs; `a = None` means the identity.
pub fn quadratic_residual(a: Option<&HNumber>, b: &HNumber, c: &HNumber, x: &HNumber, alg: &AlgebraDef) -> Result<f64> {
    let xx = in_multi(x, x, alg)?;
    let lead = match a {
        Some(a) => in_multi(a, &xx, alg)?,
        None => xx,
    };
    let r = in_add(&in_add(&lead, &in_multi(b, x, alg)?)?, c)?;
    Ok(r.to_f64().map(|v| inf_norm(&v)).unwrap_or(f64::INFINITY))
}

/// Substitutes values for the symbols of every coefficient.
pub fn substitute(a: &HNumber, bindings: &BTreeMap<crate::scalar::Symbol, Scalar>) -> Result<HNumber> {
    a.map(|c| c.substitute(bindings))
}
