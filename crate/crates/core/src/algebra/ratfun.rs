//! Rational functions in `x` over ℚ(t₁,…,t_m), with the derivations
//! δ_x and ∂/∂t_j.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::One;

use super::mpoly::{self, MPoly};
use super::scalar::ParamScalar;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: UPoly,
    den: UPoly,
}

impl RatFun {
    /// Canonical form of `num / den`.
    pub fn new(num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: UPoly, den: UPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let inv = den.lc().inv().expect("nonzero");
            return RatFun { num: num.scale(&inv), den: UPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let inv = den.lc().inv().expect("nonzero");
        if inv.is_one() {
            RatFun { num, den }
        } else {
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Self {
        RatFun { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_scalar(ParamScalar::one())
    }

    pub fn x() -> Self {
        Self::from_poly(UPoly::x())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_scalar(ParamScalar::from_int(n))
    }

    pub fn from_scalar(c: ParamScalar) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFun { num: p, den: UPoly::one() }
    }

    /// The parameter `t_j` as a rational function.
    pub fn param(j: usize) -> Self {
        Self::from_scalar(ParamScalar::param(j))
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value if `self` does not depend on `x`.
    pub fn as_scalar(&self) -> Option<ParamScalar> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// `deg num − deg den`; `None` for zero.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.deg() - self.den.deg())
    }

    /// Ratio of leading coefficients (the coefficient of `x^d` at infinity).
    pub fn leading_ratio(&self) -> ParamScalar {
        &self.num.lc() / &self.den.lc()
    }

    pub fn scale(&self, c: &ParamScalar) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> RatFun {
        RatFun { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// δ_x by the quotient rule; parameters are constants.
    pub fn derive_x(&self) -> RatFun {
        if self.den.is_one() {
            return RatFun::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(num, &self.den * &self.den)
    }

    /// ∂/∂t_j, coefficient-wise; `x` is a constant.
    pub fn derive_param(&self, j: usize) -> RatFun {
        let dn = self.num.derive_param(j);
        let dd = self.den.derive_param(j);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(num, &self.den * &self.den)
    }

    /// Splits into polynomial part and proper part.
    pub fn split_polynomial_part(&self) -> (UPoly, RatFun) {
        let (q, r) = self.num.divrem(&self.den).expect("nonzero");
        (q, RatFun { num: r, den: self.den.clone() }.renormalized())
    }

    fn renormalized(self) -> RatFun {
        if self.num.is_zero() {
            RatFun::zero()
        } else {
            self
        }
    }

    /// Partial fractions over the squarefree factors of the denominator,
    /// with linear factors split off where they have rational roots.
    pub fn partial_fractions(&self) -> PartialFractions {
        let (poly, proper) = self.split_polynomial_part();
        let mut parts = Vec::new();
        if proper.is_zero() {
            return PartialFractions { poly, parts };
        }
        let (_, sqf) = proper.den.squarefree_factor().expect("nonzero");
        let mut factors: Vec<(UPoly, usize)> = Vec::new();
        for (f, e) in sqf {
            for piece in f.split_rational_linear() {
                factors.push((piece, e));
            }
        }
        for (f, e) in &factors {
            let fe = f.pow(*e as u32);
            let others = proper.den.div_exact(&fe);
            // numerator of the f^e component: r · others⁻¹ mod f^e
            let (_, s, _) = others.ext_gcd(&fe);
            let mut a = (&proper.num * &s).rem(&fe);
            // f-adic expansion a = Σ c_k f^k gives Σ c_k / f^{e−k}
            let mut k = 0;
            while !a.is_zero() {
                let (q, c) = a.divrem(f).expect("nonzero");
                if !c.is_zero() {
                    parts.push(PartialFractionTerm { factor: f.clone(), power: e - k, numerator: c });
                }
                a = q;
                k += 1;
            }
        }
        parts.sort_by(|p, q| {
            (p.factor.deg(), p.power).cmp(&(q.factor.deg(), q.power))
        });
        PartialFractions { poly, parts }
    }

    /// Renders as `N` or `(N)/(D)` over `x` and the given parameter names,
    /// with integer coefficients.
    pub fn to_expr(&self, params: &[String]) -> String {
        let mut names = vec!["x".to_string()];
        names.extend(params.iter().cloned());
        let (n, ln) = self.num.to_mpoly_cleared();
        let (d, ld) = self.den.to_mpoly_cleared();
        // f = (n / ln) / (d / ld) = (n·ld) / (d·ln), lifted to ℚ[x, t]
        let ln = shift_vars(&ln);
        let ld = shift_vars(&ld);
        let mut top = &n * &ld;
        let mut bot = &d * &ln;
        let g = mpoly::gcd(&top, &bot);
        if !g.is_one() {
            top = top.div_exact(&g).expect("gcd divides");
            bot = bot.div_exact(&g).expect("gcd divides");
        }
        // integer coefficients, positive leading denominator coefficient
        let scale = BigRational::from_integer(top.denominator_lcm() * bot.denominator_lcm());
        top = top.scale(&scale);
        bot = bot.scale(&scale);
        let g = BigRational::from_integer(num_integer::Integer::gcd(&top.integer_content(), &bot.integer_content()));
        top = top.scale(&g.recip());
        bot = bot.scale(&g.recip());
        if num_traits::Signed::is_negative(&bot.leading_coeff()) {
            top = -top;
            bot = -bot;
        }
        let ts = top.to_expr(&names);
        if bot.is_one() {
            return ts;
        }
        let ts = if top.num_terms() > 1 { format!("({ts})") } else { ts };
        let bs = bot.to_expr(&names);
        let single = bot.num_terms() == 1
            && (bot.is_constant()
                || (bot.leading_coeff().is_one()
                    && bot.leading().is_some_and(|(m, _)| m.exponents().iter().filter(|&&e| e > 0).count() == 1)));
        if single {
            format!("{ts}/{bs}")
        } else {
            format!("{ts}/({bs})")
        }
    }
}

/// Moves parameter variable `j` to index `j + 1` (making room for `x`).
fn shift_vars(p: &MPoly) -> MPoly {
    MPoly::from_terms(p.terms().map(|(m, c)| {
        let mut e = vec![0];
        e.extend_from_slice(m.exponents());
        (mpoly::Monomial::new(e), c.clone())
    }))
}

/// `poly + Σ numerator / factor^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub poly: UPoly,
    pub parts: Vec<PartialFractionTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionTerm {
    pub factor: UPoly,
    pub power: usize,
    pub numerator: UPoly,
}

impl PartialFractions {
    pub fn reassemble(&self) -> RatFun {
        self.parts.iter().fold(RatFun::from_poly(self.poly.clone()), |acc, p| {
            let term = RatFun::new(p.numerator.clone(), p.factor.pow(p.power as u32)).expect("nonzero");
            &acc + &term
        })
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.num.coeffs().iter().chain(self.den.coeffs()).map(ParamScalar::nvars).max().unwrap_or(0);
        let names: Vec<String> = (1..=m).map(|i| format!("t{i}")).collect();
        write!(f, "{}", self.to_expr(&names))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a = self.den.div_exact(&g);
        let b = rhs.den.div_exact(&g);
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFun::reduce(num, &(&a * &b) * &g)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n = &self.num.div_exact(&g1) * &rhs.num.div_exact(&g2);
        let d = &self.den.div_exact(&g2) * &rhs.den.div_exact(&g1);
        RatFun::reduce(n, d)
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    /// Panics on division by zero; use [`RatFun::inv`] to handle it.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RatFun) -> RatFun {
        self * &rhs.inv().expect("division by zero rational function")
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
