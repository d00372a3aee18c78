//! Sparse multivariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// A named indeterminate. Symbols are ordered by name; an alphabetically
/// earlier symbol is the larger variable in the lexicographic tie-break.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Self> {
        if is_identifier(name) {
            Ok(Symbol(Arc::from(name)))
        } else {
            Err(Error::InvalidSymbol(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A power product, stored as `(symbol, exponent)` pairs sorted by symbol
/// with strictly positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, s: &Symbol) -> u32 {
        self.0
            .binary_search_by(|(t, _)| t.cmp(s))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (s, e) in &self.0 {
            let d = if j < other.0.len() && &other.0[j].0 == s {
                j += 1;
                other.0[j - 1].1
            } else {
                0
            };
            match e.cmp(&d) {
                Ordering::Less => return None,
                Ordering::Equal => {}
                Ordering::Greater => out.push((s.clone(), e - d)),
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn without(&self, s: &Symbol) -> Monomial {
        Monomial(self.0.iter().filter(|(t, _)| t != s).cloned().collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(s, e)| (s.clone(), e * k)).collect())
    }
}

/// Graded lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((s, e)), Some((t, f))) => match s.cmp(t) {
                        Ordering::Equal => {
                            if e != f {
                                return e.cmp(f);
                            }
                            i += 1;
                            j += 1;
                        }
                        // `other` has exponent 0 in `s`
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, (s, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial over the rationals. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(s: Symbol) -> Self {
        Poly::term(BigRational::one(), Monomial::var(s))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(s, _)| s.clone()))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), d * c))
                .collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (n.mul(m), d * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return Poly::term(num::pow::pow(c.clone(), k as usize), m.pow(k));
        }
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (ld, lc) = d.leading()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((lm, lcoef)) = rem.leading() {
            let m = lm.div(ld)?;
            let c = lcoef / lc;
            rem = rem.sub(&d.mul_term(&m, &c));
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Divides by the leading coefficient so the leading term is monic.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn degree_in(&self, s: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    /// Coefficient of `s^k`, a polynomial free of `s`.
    pub fn coeff_in(&self, s: &Symbol, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exponent(s) == k {
                out.add_term(m.without(s), c.clone());
            }
        }
        out
    }

    fn contains(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(s) > 0)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        if self == other {
            return self.monic();
        }
        // monomial shortcut: gcd with a single term is a monomial
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let common = monomial_gcd(self.terms.keys().chain(other.terms.keys()));
            return Poly::term(BigRational::one(), common);
        }
        // gcd(ma*a, mb*b) = gcd(ma, mb) * gcd(a, b) once a, b have no monomial factor
        let (ma, mb) = (monomial_gcd(self.terms.keys()), monomial_gcd(other.terms.keys()));
        if !ma.is_one() || !mb.is_one() {
            let m = monomial_gcd([&ma, &mb].into_iter());
            let a = self.div_exact(&Poly::term(BigRational::one(), ma)).expect("monomial divides");
            let b = other.div_exact(&Poly::term(BigRational::one(), mb)).expect("monomial divides");
            return a.gcd(&b).mul(&Poly::term(BigRational::one(), m));
        }
        if self.coprime_by_images(other) {
            return Poly::one();
        }
        if self.total_degree() <= other.total_degree() && other.div_exact(self).is_some() {
            return self.monic();
        }
        if other.total_degree() <= self.total_degree() && self.div_exact(other).is_some() {
            return other.monic();
        }
        self.gcd_dense(other)
    }

    /// True when, for every variable, specializing the others at a point
    /// that keeps both leading coefficients gives coprime univariate images.
    /// That bounds the gcd's degree in each variable by zero.
    fn coprime_by_images(&self, other: &Poly) -> bool {
        let vars: Vec<Symbol> = self.variables().union(&other.variables()).cloned().collect();
        if vars.len() < 2 {
            return false;
        }
        const POINTS: [i64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];
        vars.iter().all(|x| {
            if !self.contains(x) || !other.contains(x) {
                return true;
            }
            (0..3).any(|attempt| {
                let value = |s: &Symbol| {
                    let i = vars.iter().position(|v| v == s).unwrap_or(0);
                    BigRational::from_integer(POINTS[(i + attempt) % POINTS.len()].into()) / BigRational::from_integer((attempt as i64 + 1).into())
                };
                let (a, b) = (self.specialize_except(x, &value), other.specialize_except(x, &value));
                a.degree_in(x) == self.degree_in(x) && b.degree_in(x) == other.degree_in(x) && a.gcd_dense(&b).is_constant()
            })
        })
    }

    /// Every variable other than `x` replaced by `value(var)`.
    fn specialize_except(&self, x: &Symbol, value: &impl Fn(&Symbol) -> BigRational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            for (s, e) in &m.0 {
                if s != x {
                    c *= num::pow::pow(value(s), *e as usize);
                }
            }
            let k = m.exponent(x);
            out.add_term(if k == 0 { Monomial::one() } else { Monomial(vec![(x.clone(), k)]) }, c);
        }
        out
    }

    fn gcd_dense(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        let vars_a = self.variables();
        let vars_b = other.variables();
        let x = vars_a
            .union(&vars_b)
            .next()
            .cloned()
            .expect("non-constant polynomial has a variable");
        if !self.contains(&x) {
            return self.gcd(&other.content_in(&x));
        }
        if !other.contains(&x) {
            return other.gcd(&self.content_in(&x));
        }
        let ca = self.content_in(&x);
        let cb = other.content_in(&x);
        let content = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).expect("content divides").integral();
        let mut b = other.div_exact(&cb).expect("content divides").integral();
        if a.degree_in(&x) < b.degree_in(&x) {
            std::mem::swap(&mut a, &mut b);
        }
        // subresultant pseudo-remainder sequence
        let (mut g, mut h) = (Poly::one(), Poly::one());
        loop {
            let delta = a.degree_in(&x) - b.degree_in(&x);
            let r = a.prem_in(&b, &x);
            if r.is_zero() {
                break;
            }
            if r.degree_in(&x) == 0 {
                b = Poly::one();
                break;
            }
            let scale = g.mul(&h.pow(delta));
            a = std::mem::replace(&mut b, r.div_exact(&scale).expect("subresultant division").integral());
            g = a.coeff_in(&x, a.degree_in(&x));
            h = if delta == 0 {
                h
            } else {
                g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division")
            };
        }
        let g = b.primitive_in(&x);
        content.mul(&g).monic()
    }

    /// Scaled to integer coefficients with no common factor.
    fn integral(&self) -> Poly {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        if num.is_zero() {
            return self.clone();
        }
        self.scale(&BigRational::new(den, num))
    }

    fn content_in(&self, x: &Symbol) -> Poly {
        let d = self.degree_in(x);
        let mut g = Poly::zero();
        for k in (0..=d).rev() {
            let c = self.coeff_in(x, k);
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }

    fn primitive_in(&self, x: &Symbol) -> Poly {
        let c = self.content_in(x);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `d` viewed as polynomials in `x`:
    /// the remainder of `lc(d)^(deg self - deg d + 1) * self`.
    fn prem_in(&self, d: &Poly, x: &Symbol) -> Poly {
        let n = d.degree_in(x);
        let lc = d.coeff_in(x, n);
        let mut r = self.clone();
        let mut e = (self.degree_in(x) + 1).saturating_sub(n);
        while !r.is_zero() {
            let m = r.degree_in(x);
            if m < n {
                break;
            }
            let lr = r.coeff_in(x, m);
            let shift = Poly::term(
                BigRational::one(),
                if m == n {
                    Monomial::one()
                } else {
                    Monomial(vec![(x.clone(), m - n)])
                },
            );
            r = r.mul(&lc).sub(&lr.mul(&shift).mul(d));
            e -= 1;
        }
        r.mul(&lc.pow(e))
    }

    /// Content-free integer rescaling is not applied; coefficients stay rational.
    pub fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl From<BigInt> for Poly {
    fn from(n: BigInt) -> Self {
        Poly::constant(BigRational::from_integer(n))
    }
}

/// `-3/2*a^2*b` style coefficient/monomial rendering shared with `Scalar`.
/// Componentwise minimum exponent.
fn monomial_gcd<'a>(ms: impl Iterator<Item = &'a Monomial>) -> Monomial {
    let mut common: Option<Monomial> = None;
    for m in ms {
        common = Some(match common {
            None => m.clone(),
            Some(c) => Monomial(
                c.0.iter()
                    .filter_map(|(s, e)| {
                        let f = m.exponent(s);
                        (f > 0).then(|| (s.clone(), (*e).min(f)))
                    })
                    .collect(),
            ),
        });
    }
    common.unwrap_or_default()
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigRational,
    m: &Monomial,
) -> fmt::Result {
    let neg = c.is_negative();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    let a = c.abs();
    if m.is_one() {
        write!(f, "{a}")
    } else if a.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{a}*{m}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            write_term(f, n == 0, c, m)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
