//! List form and natural form of hypercomplex numbers.
//!
//! The list form `[a_1, ..., a_n]` ([`HNumber`]) is what every operation
//! works on. The natural form `a_1*e1 + ... + a_n*en` ([`NaturalForm`]) is
//! what users read and type. Conversions between the two are total: a
//! natural form with missing terms converts to a full-length list with
//! zeros in the missing slots.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{is_identifier, Scalar, Symbol};
use crate::syntax::{self, split_basis, Expr, ExprKind};

/// A hypercomplex number in list form. All coefficients share one
/// exactness class.
#[derive(Clone, PartialEq)]
pub struct HNumber {
    coeffs: Vec<Scalar>,
}

impl HNumber {
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Malformed("hypercomplex number of dimension 0".into()));
        }
        let float = coeffs[0].is_float();
        if coeffs.iter().any(|c| c.is_float() != float) {
            return Err(Error::ExactnessMismatch);
        }
        Ok(HNumber { coeffs })
    }

    pub fn zeros(dim: usize) -> Self {
        HNumber {
            coeffs: vec![Scalar::zero(); dim],
        }
    }

    pub fn float_zeros(dim: usize) -> Self {
        HNumber {
            coeffs: vec![Scalar::Float(0.0); dim],
        }
    }

    /// The basis vector `e_index` (1-based).
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index == 0 || index > dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut h = HNumber::zeros(dim);
        h.coeffs[index - 1] = Scalar::one();
        Ok(h)
    }

    pub fn from_f64(xs: &[f64]) -> Self {
        HNumber {
            coeffs: xs.iter().map(|&x| Scalar::Float(x)).collect(),
        }
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        HNumber {
            coeffs: xs.iter().map(|&x| Scalar::int(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_float(&self) -> bool {
        self.coeffs[0].is_float()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Componentwise [`Scalar::equals`].
    pub fn equals(&self, other: &HNumber) -> bool {
        self.dim() == other.dim()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.equals(b))
    }

    pub fn to_f64(&self) -> Option<Vec<f64>> {
        self.coeffs.iter().map(Scalar::as_f64).collect()
    }

    pub fn promote_to_float(&self) -> Result<HNumber> {
        Ok(HNumber {
            coeffs: self
                .coeffs
                .iter()
                .map(Scalar::promote_to_float)
                .collect::<Result<_>>()?,
        })
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<HNumber> {
        HNumber::new(self.coeffs.iter().map(f).collect::<Result<_>>()?)
    }
}

impl std::ops::Index<usize> for HNumber {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }
}

impl fmt::Display for HNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for HNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `a_1*e1 + ... + a_n*en`: a basis identifier plus `(index, coefficient)`
/// pairs with nonzero coefficients. The zero number may have no basis.
#[derive(Clone, PartialEq, Debug)]
pub struct NaturalForm {
    basis: Option<String>,
    terms: BTreeMap<usize, Scalar>,
}

fn is_structural_zero(s: &Scalar) -> bool {
    match s {
        Scalar::Float(x) => *x == 0.0,
        other => other.is_zero(),
    }
}

impl NaturalForm {
    pub fn zero() -> Self {
        NaturalForm {
            basis: None,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a normalized form; zero coefficients are dropped.
    pub fn new(basis: &str, terms: impl IntoIterator<Item = (usize, Scalar)>) -> Result<Self> {
        check_basis_name(basis)?;
        let mut out = BTreeMap::new();
        for (i, c) in terms {
            if i == 0 {
                return Err(Error::IndexOutOfRange { index: 0, dim: 0 });
            }
            let acc = match out.remove(&i) {
                Some(prev) => Scalar::add(&prev, &c)?,
                None => c,
            };
            if !is_structural_zero(&acc) {
                out.insert(i, acc);
            }
        }
        Ok(NaturalForm {
            basis: Some(basis.to_string()),
            terms: out,
        })
    }

    /// The basis identifier (`nameBas`); `None` only for a bare `0`.
    pub fn basis(&self) -> Option<&str> {
        self.basis.as_deref()
    }

    pub fn terms(&self) -> &BTreeMap<usize, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn coefficient(&self, index: usize) -> Option<&Scalar> {
        self.terms.get(&index)
    }
}

fn check_basis_name(b: &str) -> Result<()> {
    if !b.is_empty() && b.chars().all(|c| c.is_ascii_alphabetic()) {
        Ok(())
    } else {
        Err(Error::InvalidSymbol(format!("basis identifier `{b}` must be letters only")))
    }
}

impl fmt::Display for NaturalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let basis = self.basis.as_deref().unwrap_or("e");
        for (n, (i, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_monomial();
            let shown = if neg && n > 0 { c.neg() } else { c.clone() };
            if n > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match &shown {
                Scalar::Float(_) => write!(f, "{shown}*{basis}{i}")?,
                s if s.is_one() => write!(f, "{basis}{i}")?,
                s if s.neg().is_one() => write!(f, "-{basis}{i}")?,
                s if s.is_compound() => write!(f, "({s})*{basis}{i}")?,
                s => write!(f, "{s}*{basis}{i}")?,
            }
        }
        Ok(())
    }
}

/// Value of a sub-expression while reading a natural form: either a plain
/// coefficient or a linear combination of basis elements.
enum Lin {
    Coef(Scalar),
    Vector(String, BTreeMap<usize, Scalar>),
}

fn combine(a: BTreeMap<usize, Scalar>, b: BTreeMap<usize, Scalar>) -> Result<BTreeMap<usize, Scalar>> {
    let mut out = a;
    for (i, c) in b {
        let v = match out.remove(&i) {
            Some(prev) => prev.add(&c)?,
            None => c,
        };
        out.insert(i, v);
    }
    Ok(out)
}

fn scale(v: BTreeMap<usize, Scalar>, s: &Scalar) -> Result<BTreeMap<usize, Scalar>> {
    v.into_iter()
        .map(|(i, c)| Ok((i, c.mul(s)?)))
        .collect()
}

fn lin_from_expr(e: &Expr, float_mode: bool) -> Result<Lin> {
    let r = |x: &Expr| lin_from_expr(x, float_mode);
    Ok(match &e.kind {
        ExprKind::Int(_) | ExprKind::Float(_) => Lin::Coef(scalar_leaf(e, float_mode)?),
        ExprKind::Ident(name) => match split_basis(name) {
            Some((_, 0)) => {
                return Err(Error::parse(e.pos, format!("basis indices start at 1: `{name}`")))
            }
            Some((stem, idx)) => {
                let one = if float_mode {
                    Scalar::Float(1.0)
                } else {
                    Scalar::one()
                };
                Lin::Vector(stem.to_string(), BTreeMap::from([(idx, one)]))
            }
            None => Lin::Coef(scalar_leaf(e, float_mode)?),
        },
        ExprKind::Neg(x) => negate(r(x)?),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
            let la = r(a)?;
            let mut lb = r(b)?;
            if matches!(e.kind, ExprKind::Sub(..)) {
                lb = negate(lb);
            }
            match (la, lb) {
                (Lin::Coef(x), Lin::Coef(y)) => Lin::Coef(x.add(&y)?),
                (Lin::Vector(ba, va), Lin::Vector(bb, vb)) => {
                    if ba != bb {
                        return Err(Error::MixedBasis(ba, bb));
                    }
                    Lin::Vector(ba, combine(va, vb)?)
                }
                (Lin::Vector(bv, v), Lin::Coef(c)) | (Lin::Coef(c), Lin::Vector(bv, v)) => {
                    if !c.is_zero() {
                        return Err(Error::parse(
                            e.pos,
                            "every term must name a basis element (bare coefficient)",
                        ));
                    }
                    Lin::Vector(bv, v)
                }
            }
        }
        ExprKind::Mul(a, b) => match (r(a)?, r(b)?) {
            (Lin::Coef(x), Lin::Coef(y)) => Lin::Coef(x.mul(&y)?),
            (Lin::Coef(c), Lin::Vector(bv, v)) | (Lin::Vector(bv, v), Lin::Coef(c)) => {
                Lin::Vector(bv, scale(v, &c)?)
            }
            (Lin::Vector(..), Lin::Vector(..)) => {
                return Err(Error::parse(
                    e.pos,
                    "product of basis elements (or a basis-like identifier inside a coefficient)",
                ))
            }
        },
        ExprKind::Div(a, b) => match (r(a)?, r(b)?) {
            (Lin::Coef(x), Lin::Coef(y)) => Lin::Coef(x.div(&y)?),
            (Lin::Vector(bv, v), Lin::Coef(c)) => Lin::Vector(bv, scale(v, &c.recip()?)?),
            (_, Lin::Vector(..)) => {
                return Err(Error::parse(e.pos, "division by a basis element"))
            }
        },
        ExprKind::Pow(a, k) => match r(a)? {
            Lin::Coef(c) => Lin::Coef(c.pow(*k)),
            Lin::Vector(..) => return Err(Error::parse(e.pos, "power of a basis element")),
        },
        ExprKind::Call(name, _) => {
            return Err(Error::parse(e.pos, format!("function `{name}` not allowed here")))
        }
    })
}

fn negate(l: Lin) -> Lin {
    match l {
        Lin::Coef(c) => Lin::Coef(c.neg()),
        Lin::Vector(b, v) => Lin::Vector(b, v.into_iter().map(|(i, c)| (i, c.neg())).collect()),
    }
}

fn scalar_leaf(e: &Expr, float_mode: bool) -> Result<Scalar> {
    Ok(match &e.kind {
        ExprKind::Int(n) if float_mode => {
            Scalar::Float(num::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY))
        }
        ExprKind::Ident(_) if float_mode => return Err(Error::ExactnessMismatch),
        _ => Scalar::from_expr(e)?,
    })
}

/// Parses `coeff*<basis><index> + ...`. Every term must contain exactly one
/// basis element; coefficients use the scalar grammar and may be
/// parenthesized. A bare `0` is the zero number.
pub fn parse_natural(text: &str) -> Result<NaturalForm> {
    let e = syntax::parse(text)?;
    natural_from_expr(&e)
}

pub fn natural_from_expr(e: &Expr) -> Result<NaturalForm> {
    match lin_from_expr(e, e.has_float_literal())? {
        Lin::Coef(c) if c.is_zero() => Ok(NaturalForm::zero()),
        Lin::Coef(_) => Err(Error::parse(
            e.pos,
            "every term must name a basis element (bare coefficient)",
        )),
        Lin::Vector(b, v) => NaturalForm::new(&b, v),
    }
}

impl FromStr for NaturalForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_natural(s)
    }
}

/// `nameBas`: the basis identifier of a natural form.
pub fn name_bas(a: &NaturalForm) -> Option<&str> {
    a.basis()
}

/// Generates `[name_1, ..., name_n]` together with
/// `name_1*basis1 + ... + name_n*basisn`.
pub fn hns_number(n: usize, name: &str, basis: &str) -> Result<(HNumber, NaturalForm)> {
    if n == 0 {
        return Err(Error::Malformed("dimension must be at least 1".into()));
    }
    if !is_identifier(name) || split_basis(name).is_some() {
        return Err(Error::InvalidSymbol(name.to_string()));
    }
    let coeffs: Vec<Scalar> = (1..=n)
        .map(|i| Scalar::symbol(&format!("{name}_{i}")))
        .collect::<Result<_>>()?;
    let natural = NaturalForm::new(basis, coeffs.iter().cloned().enumerate().map(|(i, c)| (i + 1, c)))?;
    Ok((HNumber { coeffs }, natural))
}

/// Natural form to list form. Missing terms become zeros, so the result
/// always has exactly `dim` components.
pub fn convert_a(a: &NaturalForm, dim: usize) -> Result<HNumber> {
    if let Some(&index) = a.terms.keys().find(|&&i| i > dim) {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    if dim == 0 {
        return Err(Error::Malformed("dimension must be at least 1".into()));
    }
    let zero = if a.terms.values().any(Scalar::is_float) {
        Scalar::Float(0.0)
    } else {
        Scalar::zero()
    };
    let coeffs = (1..=dim)
        .map(|i| a.terms.get(&i).cloned().unwrap_or_else(|| zero.clone()))
        .collect();
    HNumber::new(coeffs)
}

/// List form to natural form in the given basis.
pub fn viz_in_a(a: &HNumber, basis: &str) -> Result<NaturalForm> {
    NaturalForm::new(
        basis,
        a.coeffs.iter().cloned().enumerate().map(|(i, c)| (i + 1, c)),
    )
}

/// Replaces the basis identifier.
pub fn renam_a(a: &NaturalForm, new_basis: &str) -> Result<NaturalForm> {
    check_basis_name(new_basis)?;
    Ok(NaturalForm {
        basis: Some(new_basis.to_string()),
        terms: a.terms.clone(),
    })
}

/// Zero template of the given dimension.
pub fn list_hns(dim: usize) -> HNumber {
    HNumber::zeros(dim)
}

/// Appends one element.
pub fn refill<T: Clone>(list: &[T], element: T) -> Vec<T> {
    let mut out = list.to_vec();
    out.push(element);
    out
}

/// Symbols `name_1..name_n` as used by [`hns_number`].
pub fn coefficient_symbols(n: usize, name: &str) -> Result<Vec<Symbol>> {
    (1..=n).map(|i| Symbol::new(&format!("{name}_{i}"))).collect()
}
