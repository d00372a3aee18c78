//! Expression evaluation inside an algebra.
//!
//! Operands are scalars and basis elements (`e1`, `e2`, ...); `*` is the
//! algebra product, `/` is left division (`x / y` is the `X` with
//! `y*X = x`), `^k` repeats the product. `conj(x)`, `norm(x)` and `unit()`
//! are available. A scalar meeting a hypercomplex operand in `+`, `-` or
//! `/` stands for that multiple of the unit. A float literal anywhere makes
//! the whole expression numeric.

use std::fmt;

use crate::algebra::AlgebraDef;
use crate::error::{Error, Result};
use crate::hcnumber::{viz_in_a, HNumber, NaturalForm};
use crate::ops::{self, Side};
use crate::scalar::Scalar;
use crate::syntax::{self, split_basis, Expr, ExprKind};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    Number(HNumber),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => write!(f, "{s}"),
            Value::Number(h) => write!(f, "{h}"),
        }
    }
}

/// Evaluation result with the basis name the input used (`e` if none).
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    pub value: Value,
    pub basis: String,
}

impl Evaluated {
    pub fn natural(&self) -> Result<Option<NaturalForm>> {
        match &self.value {
            Value::Number(h) => viz_in_a(h, &self.basis).map(Some),
            Value::Scalar(_) => Ok(None),
        }
    }
}

struct Ctx<'a> {
    alg: &'a AlgebraDef,
    float: bool,
    basis: Option<String>,
}

pub fn eval(src: &str, alg: &AlgebraDef) -> Result<Evaluated> {
    let expr = syntax::parse(src)?;
    let mut ctx = Ctx {
        alg,
        float: expr.has_float_literal(),
        basis: None,
    };
    let value = ctx.eval(&expr)?;
    Ok(Evaluated {
        value,
        basis: ctx.basis.unwrap_or_else(|| "e".to_string()),
    })
}

impl Ctx<'_> {
    fn unit(&self) -> Result<HNumber> {
        let u = ops::unit(self.alg)?;
        if self.float {
            u.promote_to_float()
        } else {
            Ok(u)
        }
    }

    fn lift(&self, v: Value) -> Result<HNumber> {
        match v {
            Value::Number(h) => Ok(h),
            Value::Scalar(s) => ops::scalar_mul(&s, &self.unit()?),
        }
    }

    fn eval(&mut self, e: &Expr) -> Result<Value> {
        use ExprKind::*;
        Ok(match &e.kind {
            Int(n) => {
                let s = Scalar::from(num::BigRational::from_integer(n.clone()));
                Value::Scalar(if self.float { s.promote_to_float()? } else { s })
            }
            Float(x) => Value::Scalar(Scalar::Float(*x)),
            Ident(name) => self.ident(name)?,
            Neg(a) => match self.eval(a)? {
                Value::Scalar(s) => Value::Scalar(s.neg()),
                Value::Number(h) => Value::Number(ops::neg(&h)),
            },
            Add(a, b) | Sub(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let sub = matches!(e.kind, Sub(..));
                match (x, y) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if sub { x.sub(&y)? } else { x.add(&y)? }),
                    (x, y) => {
                        let (x, y) = (self.lift(x)?, self.lift(y)?);
                        Value::Number(if sub { ops::in_sub(&x, &y)? } else { ops::in_add(&x, &y)? })
                    }
                }
            }
            Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.mul(&y)?),
                (Value::Scalar(s), Value::Number(h)) | (Value::Number(h), Value::Scalar(s)) => {
                    Value::Number(ops::scalar_mul(&s, &h)?)
                }
                (Value::Number(x), Value::Number(y)) => Value::Number(ops::in_multi(&x, &y, self.alg)?),
            },
            Div(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x.div(&y)?),
                (Value::Number(h), Value::Scalar(s)) => Value::Number(ops::scalar_mul(&s.recip()?, &h)?),
                (x, y) => {
                    let (x, y) = (self.lift(x)?, self.lift(y)?);
                    Value::Number(ops::divis(&x, &y, self.alg, Side::Left)?)
                }
            },
            Pow(a, k) => match self.eval(a)? {
                Value::Scalar(s) => Value::Scalar(s.pow(*k)),
                Value::Number(h) => {
                    let mut acc = self.unit()?;
                    for _ in 0..*k {
                        acc = ops::in_multi(&acc, &h, self.alg)?;
                    }
                    Value::Number(acc)
                }
            },
            Call(name, args) => self.call(e.pos, name, args)?,
        })
    }

    fn ident(&mut self, name: &str) -> Result<Value> {
        if let Some((stem, index)) = split_basis(name) {
            match &self.basis {
                Some(b) if b != stem => return Err(Error::MixedBasis(b.clone(), stem.to_string())),
                _ => self.basis = Some(stem.to_string()),
            }
            let h = HNumber::basis(self.alg.dim(), index)?;
            return Ok(Value::Number(if self.float { h.promote_to_float()? } else { h }));
        }
        if self.float {
            return Err(Error::ExactnessMismatch);
        }
        Ok(Value::Scalar(Scalar::symbol(name)?))
    }

    fn call(&mut self, pos: usize, name: &str, args: &[Expr]) -> Result<Value> {
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::parse(pos, format!("`{name}` takes {n} argument(s), got {}", args.len())))
            }
        };
        match name {
            "unit" => {
                arity(0)?;
                Ok(Value::Number(self.unit()?))
            }
            "conj" => {
                arity(1)?;
                let x = self.eval(&args[0])?;
                Ok(Value::Number(ops::conjug(&self.lift(x)?, self.alg)?))
            }
            "norm" => {
                arity(1)?;
                let x = self.eval(&args[0])?;
                Ok(Value::Scalar(ops::norma(&self.lift(x)?, self.alg)?))
            }
            _ => Err(Error::parse(pos, format!("unknown function `{name}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::Registry;

    fn run(alg: &str, src: &str) -> Result<Evaluated> {
        let reg = Registry::in_memory();
        eval(src, reg.search_hns(alg).unwrap())
    }

    #[test]
    fn quaternion_expressions() {
        let r = run("H", "e2*e3").unwrap();
        assert_eq!(r.natural().unwrap().unwrap().to_string(), "e4");
        let n = run("H", "norm(a_1*e1 + a_2*e2 + a_3*e3 + a_4*e4)").unwrap();
        assert_eq!(n.value, Value::Scalar("a_1^2 + a_2^2 + a_3^2 + a_4^2".parse().unwrap()));
        assert_eq!(run("H", "unit()").unwrap().natural().unwrap().unwrap().to_string(), "e1");
        assert_eq!(run("H", "(e2*e3)/e2").unwrap().value, Value::Number(HNumber::basis(4, 3).unwrap()));
        assert_eq!(run("H", "e2^2 + 1").unwrap().value, Value::Number(HNumber::zeros(4)));
    }

    #[test]
    fn float_mode_and_errors() {
        let r = run("C", "(1.5*e1 + 2*e2)*e2").unwrap();
        assert!(matches!(r.value, Value::Number(ref h) if h.equals(&HNumber::from_f64(&[-2.0, 1.5]))));
        assert!(matches!(run("C", "0.5*p*e1"), Err(Error::ExactnessMismatch)));
        assert!(matches!(run("C", "e1 + f2"), Err(Error::MixedBasis(..))));
        assert!(matches!(run("C", "e3"), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(run("C", "frob(e1)"), Err(Error::Parse { .. })));
        assert!(matches!(run("RplusC", "e2/e1"), Err(Error::SingularDivisor)));
    }
}
