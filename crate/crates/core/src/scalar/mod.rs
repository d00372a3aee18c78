//! Exact symbolic coefficients.
//!
//! A [`Scalar`] is kept in canonical form at all times: rationals in lowest
//! terms, polynomials without zero terms, and ratios of polynomials with
//! `gcd(num, den) = 1` and a monic denominator (its graded-lex leading
//! coefficient is 1). Canonical form makes structural equality coincide with
//! mathematical equality, so `==` on exact scalars is exact.
//!
//! `Float` is a separate exactness class; arithmetic between a `Float` and an
//! exact scalar fails with [`Error::ExactnessMismatch`]. Use
//! [`Scalar::promote_to_float`] to convert explicitly.

mod poly;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub use poly::{is_identifier, Monomial, Poly, Symbol};

use crate::error::{Error, Result};
use crate::syntax::{self, Expr};

/// Relative tolerance for comparing `Float` scalars.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    /// Non-constant polynomial.
    Poly(Poly),
    /// Ratio with a non-constant monic denominator.
    Ratio(RatFun),
    Float(f64),
}

/// Reduced quotient of polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n/d`; panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn symbol(name: &str) -> Result<Self> {
        Ok(Scalar::Poly(Poly::var(Symbol::new(name)?)))
    }

    pub fn float(x: f64) -> Self {
        Scalar::Float(x)
    }

    /// Zero in the same exactness class as `self`.
    pub fn zero_like(&self) -> Self {
        if self.is_float() {
            Scalar::Float(0.0)
        } else {
            Scalar::zero()
        }
    }

    pub fn one_like(&self) -> Self {
        if self.is_float() {
            Scalar::Float(1.0)
        } else {
            Scalar::one()
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        match p.constant_value() {
            Some(c) => Scalar::Rational(c),
            None => Scalar::Poly(p),
        }
    }

    /// Builds `num/den` in canonical form.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = den.constant_value() {
            return Ok(Scalar::from_poly(num.scale(&c.recip())));
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if let Some(c) = den.constant_value() {
            return Ok(Scalar::from_poly(num.scale(&c.recip())));
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Scalar::Ratio(RatFun { num, den }))
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Scalar::Float(_))
    }

    pub fn is_exact(&self) -> bool {
        !self.is_float()
    }

    /// Exact zero test for exact scalars; `|x| <= 1e-12` for floats.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Poly(_) | Scalar::Ratio(_) => false,
            Scalar::Float(x) => x.abs() <= FLOAT_TOLERANCE,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Float(x) => (x - 1.0).abs() <= FLOAT_TOLERANCE,
            _ => false,
        }
    }

    /// Canonical-form equality; floats compare with
    /// `|x - y| <= 1e-12 * max(1, |x|, |y|)`. Scalars of different
    /// exactness classes are never equal.
    pub fn equals(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Float(x), Scalar::Float(y)) => {
                (x - y).abs() <= FLOAT_TOLERANCE * 1f64.max(x.abs()).max(y.abs())
            }
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => false,
            _ => self == other,
        }
    }

    /// The constant value of an exact scalar without symbols.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Scalar::Rational(r) => r.to_f64(),
            Scalar::Float(x) => Some(*x),
            _ => None,
        }
    }

    /// Explicit promotion of a symbol-free exact scalar to `Float`.
    pub fn promote_to_float(&self) -> Result<Scalar> {
        self.as_f64().map(Scalar::Float).ok_or(Error::ExactnessMismatch)
    }

    fn fraction(&self) -> Option<(Poly, Poly)> {
        match self {
            Scalar::Rational(r) => Some((Poly::constant(r.clone()), Poly::one())),
            Scalar::Poly(p) => Some((p.clone(), Poly::one())),
            Scalar::Ratio(f) => Some((f.num.clone(), f.den.clone())),
            Scalar::Float(_) => None,
        }
    }

    fn as_poly(&self) -> Option<Poly> {
        match self {
            Scalar::Rational(r) => Some(Poly::constant(r.clone())),
            Scalar::Poly(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => Err(Error::ExactnessMismatch),
            _ => {
                if let (Some(a), Some(b)) = (self.as_poly(), other.as_poly()) {
                    return Ok(Scalar::from_poly(a.add(&b)));
                }
                let (n1, d1) = self.fraction().unwrap();
                let (n2, d2) = other.fraction().unwrap();
                if d1 == d2 {
                    return Scalar::from_fraction(n1.add(&n2), d1);
                }
                let g = d1.gcd(&d2);
                let (e1, e2) = (exact(&d1, &g), exact(&d2, &g));
                Scalar::from_fraction(n1.mul(&e2).add(&n2.mul(&e1)), e1.mul(&d2))
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            Scalar::Poly(p) => Scalar::Poly(p.neg()),
            Scalar::Ratio(f) => Scalar::Ratio(RatFun {
                num: f.num.neg(),
                den: f.den.clone(),
            }),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => Err(Error::ExactnessMismatch),
            (Scalar::Rational(c), x) | (x, Scalar::Rational(c)) => Ok(match x {
                _ if c.is_zero() => Scalar::zero(),
                Scalar::Poly(p) => Scalar::from_poly(p.scale(c)),
                Scalar::Ratio(f) => Scalar::Ratio(RatFun {
                    num: f.num.scale(c),
                    den: f.den.clone(),
                }),
                _ => unreachable!(),
            }),
            _ => {
                if let (Some(a), Some(b)) = (self.as_poly(), other.as_poly()) {
                    return Ok(Scalar::from_poly(a.mul(&b)));
                }
                let (n1, d1) = self.fraction().unwrap();
                let (n2, d2) = other.fraction().unwrap();
                product(n1, d1, n2, d2)
            }
        }
    }

    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one_like(self).div(self)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Float(a), Scalar::Float(b)) => {
                if *b == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Float(a / b))
                }
            }
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => Err(Error::ExactnessMismatch),
            (_, Scalar::Rational(b)) if b.is_zero() => Err(Error::DivisionByZero),
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a / b)),
            _ => {
                let (n1, d1) = self.fraction().unwrap();
                let (n2, d2) = other.fraction().unwrap();
                if n2.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                product(n1, d1, d2, n2)
            }
        }
    }

    pub fn pow(&self, k: u32) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(num::pow::pow(r.clone(), k as usize)),
            Scalar::Poly(p) => Scalar::from_poly(p.pow(k)),
            // gcd(num, den) = 1 implies gcd(num^k, den^k) = 1
            Scalar::Ratio(f) => Scalar::Ratio(RatFun {
                num: f.num.pow(k),
                den: f.den.pow(k),
            }),
            Scalar::Float(x) => Scalar::Float(x.powi(k as i32)),
        }
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        match self {
            Scalar::Poly(p) => p.variables(),
            Scalar::Ratio(f) => {
                let mut v = f.num.variables();
                v.extend(f.den.variables());
                v
            }
            _ => BTreeSet::new(),
        }
    }

    /// Simultaneous substitution. Unbound symbols survive. Binding a symbol
    /// of an exact expression to a `Float` fails; use [`Scalar::eval_f64`]
    /// for numeric evaluation.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Scalar>) -> Result<Scalar> {
        match self {
            Scalar::Rational(_) | Scalar::Float(_) => Ok(self.clone()),
            Scalar::Poly(p) => subst_poly(p, bindings),
            Scalar::Ratio(f) => subst_poly(&f.num, bindings)?.div(&subst_poly(&f.den, bindings)?),
        }
    }

    /// Numeric value with every symbol bound.
    pub fn eval_f64(&self, bindings: &BTreeMap<Symbol, f64>) -> Result<f64> {
        let eval = |p: &Poly| -> Result<f64> {
            let mut acc = 0.0;
            for (m, c) in p.terms() {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (s, e) in m.factors() {
                    let v = bindings
                        .get(s)
                        .ok_or_else(|| Error::InvalidSymbol(format!("unbound symbol {s}")))?;
                    t *= v.powi(*e as i32);
                }
                acc += t;
            }
            Ok(acc)
        };
        match self {
            Scalar::Rational(r) => Ok(r.to_f64().unwrap_or(f64::NAN)),
            Scalar::Float(x) => Ok(*x),
            Scalar::Poly(p) => eval(p),
            Scalar::Ratio(f) => Ok(eval(&f.num)? / eval(&f.den)?),
        }
    }

    /// Evaluates a parsed expression in the scalar grammar.
    pub fn from_expr(e: &Expr) -> Result<Scalar> {
        let float_mode = e.has_float_literal();
        scalar_from_expr(e, float_mode)
    }

    /// Whether printing needs parentheses when used as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        match self {
            Scalar::Poly(p) => p.num_terms() > 1,
            Scalar::Ratio(_) => true,
            _ => false,
        }
    }

    /// Negative leading sign (used by renderers to emit ` - `).
    pub(crate) fn is_negative_monomial(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Poly(p) => p.num_terms() == 1 && p.leading().unwrap().1.is_negative(),
            Scalar::Float(x) => *x < 0.0,
            Scalar::Ratio(_) => false,
        }
    }
}

fn subst_poly(p: &Poly, bindings: &BTreeMap<Symbol, Scalar>) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::Rational(c.clone());
        let mut rest = Monomial::one();
        for (s, e) in m.factors() {
            match bindings.get(s) {
                Some(v) => t = t.mul(&v.pow(*e))?,
                None => rest = rest.mul(&Monomial::var(s.clone()).pow(*e)),
            }
        }
        let t = t.mul(&Scalar::from_poly(Poly::term(BigRational::one(), rest)))?;
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

fn scalar_from_expr(e: &Expr, float_mode: bool) -> Result<Scalar> {
    use syntax::ExprKind as K;
    let r = |x: &Expr| scalar_from_expr(x, float_mode);
    Ok(match &e.kind {
        K::Int(n) => {
            if float_mode {
                Scalar::Float(n.to_f64().unwrap_or(f64::INFINITY))
            } else {
                Scalar::Rational(BigRational::from_integer(n.clone()))
            }
        }
        K::Float(x) => Scalar::Float(*x),
        K::Ident(name) => {
            if float_mode {
                return Err(Error::ExactnessMismatch);
            }
            Scalar::Poly(Poly::var(Symbol::new(name)?))
        }
        K::Neg(x) => r(x)?.neg(),
        K::Add(a, b) => r(a)?.add(&r(b)?)?,
        K::Sub(a, b) => r(a)?.sub(&r(b)?)?,
        K::Mul(a, b) => r(a)?.mul(&r(b)?)?,
        K::Div(a, b) => r(a)?.div(&r(b)?)?,
        K::Pow(a, k) => r(a)?.pow(*k),
        K::Call(name, _) => {
            return Err(Error::parse(e.pos, format!("function `{name}` not allowed in a scalar")))
        }
    })
}

fn exact(a: &Poly, d: &Poly) -> Poly {
    a.div_exact(d).expect("gcd divides")
}

/// `(n1/d1) * (n2/d2)` for reduced inputs, cancelling crosswise first.
fn product(n1: Poly, d1: Poly, n2: Poly, d2: Poly) -> Result<Scalar> {
    let (g1, g2) = (n1.gcd(&d2), n2.gcd(&d1));
    let (n1, d2) = (exact(&n1, &g1), exact(&d2, &g1));
    let (n2, d1) = (exact(&n2, &g2), exact(&d1, &g2));
    Scalar::from_fraction(n1.mul(&n2), d1.mul(&d2))
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scalar::from_expr(&syntax::parse(s)?)
    }
}

fn write_poly_factor(f: &mut fmt::Formatter<'_>, p: &Poly) -> fmt::Result {
    let bare = p.num_terms() == 1 && {
        let (m, c) = p.leading().unwrap();
        c.is_one() && m.factors().len() == 1
    };
    if bare {
        write!(f, "{p}")
    } else {
        write!(f, "({p})")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Poly(p) => write!(f, "{p}"),
            Scalar::Ratio(r) => {
                let num = r.num.to_string();
                if r.num.num_terms() > 1 || num.contains('/') {
                    write!(f, "({num})")?;
                } else {
                    f.write_str(&num)?;
                }
                f.write_str("/")?;
                write_poly_factor(f, &r.den)
            }
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

/// Arithmetic helpers that panic on exactness mismatch or division by zero;
/// convenient where operands are known to share a class.
macro_rules! forward_op {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                Scalar::$m(self, rhs).expect(concat!("Scalar::", stringify!($m)))
            }
        }
        impl std::ops::$tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar::$m(&self, &rhs).expect(concat!("Scalar::", stringify!($m)))
            }
        }
    };
}
forward_op!(Add, add);
forward_op!(Sub, sub);
forward_op!(Mul, mul);
forward_op!(Div, div);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(s("1/2") + s("1/3"), s("5/6"));
        assert_eq!((s("1/2") + s("1/3")).to_string(), "5/6");
    }

    #[test]
    fn additive_identity() {
        assert_eq!(s("p") + Scalar::zero(), s("p"));
    }

    #[test]
    fn ratio_reduces_to_poly() {
        let x = s("(p^2 - q^2)/(p - q)") + s("q");
        assert_eq!(x, s("p + 2*q"));
        let y = s("(p^2 - q^2)/(p - q)");
        assert_eq!(y, s("p + q"));
        assert!(matches!(y, Scalar::Poly(_)));
    }

    #[test]
    fn sign_rule_and_expansion() {
        assert_eq!(s("-alpha") * s("-beta"), s("alpha*beta"));
        assert_eq!(s("(p + q)*(p - q)"), s("p^2 - q^2"));
        assert!(s("(p+q)^2").equals(&s("p^2 + 2*p*q + q^2")));
        assert!((s("p") - s("p")).is_zero());
    }

    #[test]
    fn division_cases() {
        assert_eq!(s("p^2") / s("p"), s("p"));
        assert_eq!(s("a_1*b_1") / s("a_1"), s("b_1"));
        let r = s("1") / s("p - q");
        match &r {
            Scalar::Ratio(f) => {
                assert_eq!(f.numer(), &Poly::one());
                assert_eq!(Scalar::from_poly(f.denom().clone()), s("p - q"));
            }
            other => panic!("expected ratio, got {other}"),
        }
        assert!(matches!(s("p").div(&Scalar::zero()), Err(Error::DivisionByZero)));
        assert!(matches!(s("p").div(&s("p - p")), Err(Error::DivisionByZero)));
    }

    #[test]
    fn ratio_normalization_is_monic() {
        let r = s("2/(2*q - 4*p)");
        assert_eq!(r.to_string(), "(-1/2)/(p - 1/2*q)");
        assert_eq!(r, s(&r.to_string()));
    }

    #[test]
    fn float_class() {
        assert!(s("0.1 + 0.2").equals(&s("0.3")));
        assert!(matches!(s("0.5").add(&s("p")), Err(Error::ExactnessMismatch)));
        assert!(matches!("0.5 + p".parse::<Scalar>(), Err(Error::ExactnessMismatch)));
        assert_eq!(s("2*0.25"), Scalar::Float(0.5));
        assert_eq!(s("1/3").promote_to_float().unwrap(), Scalar::Float(1.0 / 3.0));
        assert!(s("p").promote_to_float().is_err());
    }

    #[test]
    fn substitution() {
        let mut b = BTreeMap::new();
        b.insert(Symbol::new("alpha").unwrap(), Scalar::one());
        b.insert(Symbol::new("beta").unwrap(), Scalar::one());
        assert_eq!(s("alpha*beta").substitute(&b).unwrap(), Scalar::one());
        assert_eq!(s("alpha*q + 1").substitute(&b).unwrap(), s("q + 1"));
        assert_eq!(s("x^2 + y").substitute(&BTreeMap::new()).unwrap(), s("x^2 + y"));
        let mut f = BTreeMap::new();
        f.insert(Symbol::new("x").unwrap(), Scalar::Float(0.5));
        assert!(matches!(s("x + 1").substitute(&f), Err(Error::ExactnessMismatch)));
        let mut q = BTreeMap::new();
        q.insert(Symbol::new("p").unwrap(), s("q + 1"));
        assert_eq!(s("1/(p - q)").substitute(&q).unwrap(), Scalar::one());
    }

    #[test]
    fn printing() {
        assert_eq!(s("a_1*b_1 - 1/2*a_2*b_2 + a_3*b_3").to_string(), "a_1*b_1 - 1/2*a_2*b_2 + a_3*b_3");
        assert_eq!(s("-p^2").to_string(), "-p^2");
        assert_eq!(s("(p+q)/(p*q)").to_string(), "(p + q)/(p*q)");
        assert_eq!(s("3/q").to_string(), "3/q");
        assert_eq!(s("2.5").to_string(), "2.5");
    }

    #[test]
    fn grammar_errors() {
        assert!("2p".parse::<Scalar>().is_err());
        assert!("p^-1".parse::<Scalar>().is_err());
        assert!("(p".parse::<Scalar>().is_err());
        assert!("f(p)".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }
}
