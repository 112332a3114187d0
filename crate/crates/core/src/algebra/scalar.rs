//! Elements of ℚ(t₁,…,t_m) as reduced fractions of [`MPoly`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mpoly::{gcd, MPoly};
use crate::error::{Error, Result};

/// A parameter-field scalar `num / den`.
///
/// Invariants: `gcd(num, den) = 1` and the leading coefficient of `den`
/// (graded-lex) is 1, so equal values have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamScalar {
    num: MPoly,
    den: MPoly,
}

impl ParamScalar {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: MPoly, den: MPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            ParamScalar { num, den }
        } else {
            let inv = lc.recip();
            ParamScalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Self {
        ParamScalar { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> Self {
        ParamScalar { num: MPoly::one(), den: MPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        ParamScalar { num: MPoly::from_int(n), den: MPoly::one() }
    }

    pub fn from_rational(q: BigRational) -> Self {
        ParamScalar { num: MPoly::constant(q), den: MPoly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_poly(p: MPoly) -> Self {
        ParamScalar { num: p, den: MPoly::one() }
    }

    /// The parameter `t_j` (zero-based index).
    pub fn param(j: usize) -> Self {
        Self::from_poly(MPoly::var(j))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value in ℚ if this scalar does not depend on the parameters.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.den.is_one() {
            return None;
        }
        self.num.constant_value()
    }

    /// The value if this scalar is a literal integer constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars().max(self.den.nvars())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    /// Partial derivative with respect to `t_j`.
    pub fn derive(&self, j: usize) -> Self {
        let dn = self.num.derivative(j);
        let dd = self.den.derivative(j);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(num, &self.den * &self.den)
    }

    pub fn pow(&self, e: u32) -> Self {
        ParamScalar { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// `r` with `r² = self`, choosing the root whose numerator has a positive
    /// leading coefficient.
    pub fn perfect_square_root(&self) -> Option<Self> {
        let n = self.num.sqrt()?;
        let d = self.den.sqrt()?;
        Some(Self::normalize_lc(n, d))
    }

    pub fn to_expr(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.to_expr(names);
        }
        let num = self.num.to_expr(names);
        let num = if self.num.num_terms() > 1 { format!("({num})") } else { num };
        let den = self.den.to_expr(names);
        let den = if self.den.num_terms() > 1 || !self.den.leading_coeff().is_one() {
            format!("({den})")
        } else {
            den
        };
        format!("{num}/{den}")
    }
}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("t{i}")).collect();
        write!(f, "{}", self.to_expr(&names))
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return ParamScalar::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        ParamScalar::reduce(num, &self.den * &rhs.den)
    }
}

impl Sub for &ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        self + &(-rhs)
    }
}

impl Mul for &ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() || rhs.is_zero() {
            return ParamScalar::zero();
        }
        if self.is_constant() && rhs.is_constant() {
            return ParamScalar::from_poly(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        ParamScalar::normalize_lc(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &ParamScalar {
    type Output = ParamScalar;
    /// Panics on division by zero; use [`ParamScalar::inv`] to handle it.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &ParamScalar) -> ParamScalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar { num: -self.num, den: self.den }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: ParamScalar) -> ParamScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: &ParamScalar) -> ParamScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Zero for ParamScalar {
    fn zero() -> Self {
        ParamScalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for ParamScalar {
    fn one() -> Self {
        ParamScalar::one()
    }
}
