//! Univariate polynomials in `x` over the parameter field ℚ(t₁,…,t_m).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::mpoly::{MPoly, Monomial};
use super::scalar::ParamScalar;
use crate::error::{Error, Result};

/// Dense coefficient vector, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<ParamScalar>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ParamScalar::one())
    }

    pub fn x() -> Self {
        Self::monomial(ParamScalar::one(), 1)
    }

    pub fn constant(c: ParamScalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: ParamScalar, k: usize) -> Self {
        let mut v = vec![ParamScalar::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<ParamScalar>) -> Self {
        while coeffs.last().is_some_and(ParamScalar::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&k| ParamScalar::from_int(k)).collect())
    }

    pub fn coeffs(&self) -> &[ParamScalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> ParamScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ParamScalar::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial at `-1`.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> ParamScalar {
        self.coeffs.last().cloned().unwrap_or_else(ParamScalar::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(ParamScalar::is_one)
    }

    /// True when every coefficient is a rational constant.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(ParamScalar::is_constant)
    }

    pub fn scale(&self, c: &ParamScalar) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(&self.lc().inv().expect("nonzero"))
    }

    pub fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![ParamScalar::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ParamScalar::from_int(k as i64))
                .collect(),
        )
    }

    /// Coefficient-wise partial derivative in `t_j`.
    pub fn derive_param(&self, j: usize) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|c| c.derive(j)).collect())
    }

    pub fn map_coeffs<F: FnMut(&ParamScalar) -> ParamScalar>(&self, f: F) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, at: &ParamScalar) -> ParamScalar {
        self.coeffs.iter().rev().fold(ParamScalar::zero(), |acc, c| &(&acc * at) + c)
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> UPoly {
        let mut v = vec![ParamScalar::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            v.push(c / &ParamScalar::from_int(k as i64 + 1));
        }
        UPoly::from_coeffs(v)
    }

    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.lc().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut q = vec![ParamScalar::zero(); r.len() - dd];
        while r.len() > dd {
            let k = r.len() - 1;
            let c = &r[k] * &inv;
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    r[idx] = &r[idx] - &(&c * di);
                }
                q[k - dd] = c;
            }
            r.pop();
            while r.last().is_some_and(ParamScalar::is_zero) {
                r.pop();
            }
        }
        Ok((UPoly::from_coeffs(q), UPoly::from_coeffs(r)))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero when both are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() || (self.is_rational() && other.is_rational()) {
            return self.euclid_gcd(other);
        }
        if self.is_constant() || other.is_constant() || specialized_coprime(self, other) {
            return UPoly::one();
        }
        // Euclid over ℚ(t) swells coefficients; go through ℚ[x, t] instead.
        let (a, _) = self.to_mpoly_cleared();
        let (b, _) = other.to_mpoly_cleared();
        UPoly::from_mpoly_in_x(&super::mpoly::gcd(&a, &b)).monic()
    }

    /// Inverse of [`UPoly::to_mpoly_cleared`] up to the scalar factor.
    fn from_mpoly_in_x(p: &MPoly) -> UPoly {
        let coeffs = p
            .coeffs_in(0)
            .iter()
            .map(|c| {
                let shifted = MPoly::from_terms(c.terms().map(|(m, q)| {
                    let e = m.exponents();
                    (Monomial::new(e.get(1..).map(<[u32]>::to_vec).unwrap_or_default()), q.clone())
                }));
                ParamScalar::from_poly(shifted)
            })
            .collect();
        UPoly::from_coeffs(coeffs)
    }

    fn euclid_gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Solves `s·a + t·b = c` with `deg s < deg b`, given `gcd(a, b) | c`.
    pub fn solve_bezout(a: &UPoly, b: &UPoly, c: &UPoly) -> Result<(UPoly, UPoly)> {
        let (g, s, t) = a.ext_gcd(b);
        let (cq, cr) = c.divrem(&g)?;
        if !cr.is_zero() {
            return Err(Error::InvalidInput("gcd does not divide right-hand side".into()));
        }
        let s = &s * &cq;
        let t = &t * &cq;
        let (q, s_red) = s.divrem(b)?;
        let t_red = &t + &(&q * a);
        Ok((s_red, t_red))
    }

    /// Yun's squarefree decomposition: `self = lc · Π fᵢ^{eᵢ}` with monic,
    /// squarefree, pairwise coprime `fᵢ` listed by increasing multiplicity.
    pub fn squarefree_factor(&self) -> Result<(ParamScalar, Vec<(UPoly, usize)>)> {
        if self.is_zero() {
            return Err(Error::InvalidInput("squarefree factorization of zero".into()));
        }
        let lc = self.lc();
        let f = self.monic();
        if f.is_constant() {
            return Ok((lc, Vec::new()));
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0);
        let mut c = fp.div_exact(&a0);
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            d = &c - &b.derivative();
            i += 1;
        }
        Ok((lc, out))
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.is_constant() {
            return UPoly::one();
        }
        let f = self.monic();
        f.div_exact(&f.gcd(&f.derivative()))
    }

    /// Multiplicity of `f` (nonconstant) as a factor of `self` (nonzero).
    pub fn multiplicity_of(&self, f: &UPoly) -> usize {
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.divrem(f).expect("nonzero");
            if !r.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    /// Converts a polynomial with rational coefficients to integer
    /// coefficients (cleared of denominators, content removed).
    fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        let rats: Vec<BigRational> = self.coeffs.iter().map(|c| c.as_rational()).collect::<Option<_>>()?;
        let l = rats.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = rats.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        Some(ints.into_iter().map(|n| n / &g).collect())
    }

    /// Rational roots (distinct, ascending) of a polynomial with rational
    /// coefficients; `None` if a coefficient depends on the parameters.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        if self.is_zero() {
            return Some(Vec::new());
        }
        let ints = self.integer_coeffs()?;
        let mut roots = Vec::new();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            roots.push(BigRational::zero());
        }
        let ints = &ints[low..];
        if ints.len() > 1 {
            let a0 = ints[0].magnitude().clone();
            let an = ints[ints.len() - 1].magnitude().clone();
            for p in divisors(&a0) {
                for q in divisors(&an) {
                    for sign in [1i32, -1] {
                        let r = BigRational::new(BigInt::from(p.clone()) * sign, BigInt::from(q.clone()));
                        if roots.contains(&r) {
                            continue;
                        }
                        if eval_int_poly(ints, &r).is_zero() {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }

    /// Literal integer roots of a polynomial over ℚ(t): integers `n` with
    /// `self(n) = 0` identically in the parameters.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        // Clear parameter denominators and pick one parameter monomial whose
        // ℚ[z]-slice is nonzero; integer roots must be roots of that slice.
        let l = self.coeffs.iter().fold(MPoly::one(), |acc, c| {
            let g = super::mpoly::gcd(&acc, c.den());
            &acc * &c.den().div_exact(&g).expect("gcd divides")
        });
        let cleared: Vec<MPoly> = self
            .coeffs
            .iter()
            .map(|c| (c.num() * &l).div_exact(c.den()).expect("lcm divisible"))
            .collect();
        let lead = cleared.last().expect("nonzero");
        let (mono, _) = lead.leading().expect("nonzero");
        let slice = UPoly::from_coeffs(
            cleared
                .iter()
                .map(|p| {
                    let c = p.terms().find(|(m, _)| *m == mono).map(|(_, c)| c.clone());
                    ParamScalar::from_rational(c.unwrap_or_else(BigRational::zero))
                })
                .collect(),
        );
        let candidates = slice.rational_roots().expect("rational slice");
        candidates
            .into_iter()
            .filter(|r| r.is_integer())
            .filter(|r| self.eval(&ParamScalar::from_rational(r.clone())).is_zero())
            .map(|r| r.to_integer())
            .collect()
    }

    /// Splits off linear factors with rational roots when all coefficients
    /// are rational; the product of the returned monic factors is `self.monic()`.
    pub fn split_rational_linear(&self) -> Vec<UPoly> {
        if self.degree().unwrap_or(0) <= 1 || !self.is_rational() {
            return vec![self.monic()];
        }
        let roots = self.rational_roots().unwrap_or_default();
        if roots.is_empty() {
            return vec![self.monic()];
        }
        let mut rest = self.monic();
        let mut out = Vec::new();
        for r in roots {
            let lin = UPoly::from_coeffs(vec![ParamScalar::from_rational(-r), ParamScalar::one()]);
            while lin.divides(&rest) {
                rest = rest.div_exact(&lin);
                out.push(lin.clone());
            }
        }
        if !rest.is_constant() {
            out.push(rest);
        }
        out
    }

    /// Embeds into ℚ[x, t₁, …] with `x` as variable 0 and `t_j` as `j + 1`,
    /// after multiplying by the lcm of the coefficient denominators.
    /// Returns the cleared polynomial and that lcm.
    pub fn to_mpoly_cleared(&self) -> (MPoly, MPoly) {
        let l = self.coeffs.iter().fold(MPoly::one(), |acc, c| {
            let g = super::mpoly::gcd(&acc, c.den());
            &acc * &c.den().div_exact(&g).expect("gcd divides")
        });
        let mut out = MPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let p = (c.num() * &l).div_exact(c.den()).expect("lcm divisible");
            for (m, q) in p.terms() {
                let mut e = vec![k as u32];
                e.extend_from_slice(m.exponents());
                out.add_term(Monomial::new(e), q.clone());
            }
        }
        (out, l)
    }
}

/// Image under `t_j ↦ point[j]`, or `None` if a denominator vanishes.
fn specialize(p: &UPoly, point: &[MPoly]) -> Option<UPoly> {
    let mut out = Vec::with_capacity(p.coeffs.len());
    for c in &p.coeffs {
        let d = c.den().substitute(point).constant_value().expect("all parameters substituted");
        if d.is_zero() {
            return None;
        }
        let n = c.num().substitute(point).constant_value().expect("all parameters substituted");
        out.push(ParamScalar::from_rational(n / d));
    }
    Some(UPoly::from_coeffs(out))
}

/// Sufficient test for `gcd(a, b) = 1` over ℚ(t): a specialization that
/// keeps both degrees and has coprime images. A common factor of positive
/// degree would survive in both images.
fn specialized_coprime(a: &UPoly, b: &UPoly) -> bool {
    let nv = a.coeffs.iter().chain(&b.coeffs).map(ParamScalar::nvars).max().unwrap_or(0);
    const PRIMES: [i64; 8] = [101, 103, 107, 109, 113, 127, 131, 137];
    for attempt in 0..2 {
        let point: Vec<MPoly> = (0..nv).map(|j| MPoly::from_int(PRIMES[(j + 3 * attempt) % PRIMES.len()] + j as i64)).collect();
        let (Some(sa), Some(sb)) = (specialize(a, &point), specialize(b, &point)) else { continue };
        if sa.degree() != a.degree() || sb.degree() != b.degree() {
            continue;
        }
        return sa.euclid_gcd(&sb).is_constant();
    }
    false
}

fn eval_int_poly(c: &[BigInt], r: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, k| acc * r + BigRational::from_integer(k.clone()))
}

/// Positive divisors by trial division.
pub(crate) fn divisors(n: &BigUint) -> Vec<BigUint> {
    if n.is_zero() {
        return vec![BigUint::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigUint::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let q = n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1u32;
        // Guard against pathological inputs; integer data here is small.
        if d.to_u64().is_none_or(|v| v > 50_000_000) {
            break;
        }
    }
    small.extend(large.into_iter().rev());
    small
}

/// A coprime base: pairwise coprime, squarefree, monic, nonconstant
/// polynomials such that every input's squarefree factors are products of them.
pub fn coprime_base(polys: &[UPoly]) -> Vec<UPoly> {
    let mut base: Vec<UPoly> = Vec::new();
    for p in polys {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let (_, sqf) = p.squarefree_factor().expect("nonzero");
        for (f, _) in sqf {
            insert_coprime(&mut base, f);
        }
    }
    base
}

fn insert_coprime(base: &mut Vec<UPoly>, p: UPoly) {
    let mut rest = p;
    let mut next = Vec::with_capacity(base.len() + 1);
    for b in base.drain(..) {
        if rest.is_constant() {
            next.push(b);
            continue;
        }
        let g = rest.gcd(&b);
        if g.is_constant() {
            next.push(b);
            continue;
        }
        let cof = b.div_exact(&g);
        rest = rest.div_exact(&g);
        next.push(g);
        if !cof.is_constant() {
            next.push(cof);
        }
    }
    if !rest.is_constant() {
        next.push(rest.monic());
    }
    *base = next;
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c:?})*x^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![ParamScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        UPoly::from_coeffs(v)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
