//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are addressed by index. Exponent vectors are stored with
//! trailing zeros trimmed, so a polynomial never needs to know how many
//! variables the surrounding context declares. Terms are kept in a
//! `BTreeMap` ordered by graded-lexicographic order (variable 0 is the most
//! significant), which makes the last entry the leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a monomial, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        for (i, &e) in self.0.iter().enumerate() {
            out.push(e.checked_sub(other.exp(i))?);
        }
        Some(Monomial::new(out))
    }

    fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Monomial::new(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in ℚ[v₀, v₁, …].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_int(c: i64) -> Self {
        MPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(i: usize) -> Self {
        MPoly::term(BigRational::one(), Monomial::var(i))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = MPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(iter: I) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// One past the largest variable index that occurs.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Scales so that the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => MPoly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                out.add_term(m.with_exp(v, e - 1), c * BigRational::from_integer(e.into()));
            }
        }
        out
    }

    /// Coefficients with respect to variable `v`; entry `k` is the
    /// coefficient of `v^k` and no longer involves `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, q) in &c.terms {
                out.add_term(m.with_exp(v, m.exp(v) + k as u32), q.clone());
            }
        }
        out
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (lm_d, lc_d) = d.leading()?;
        if d.num_terms() == 1 {
            let inv = lc_d.recip();
            let mut out = MPoly::zero();
            for (m, c) in &self.terms {
                out.add_term(m.div(lm_d)?, c * &inv);
            }
            return Some(out);
        }
        let (lm_d, lc_d) = (lm_d.clone(), lc_d.clone());
        let mut q = MPoly::zero();
        let mut r = self.clone();
        while let Some((lm_r, lc_r)) = r.leading() {
            let m = lm_r.div(&lm_d)?;
            let c = lc_r / &lc_d;
            r = &r - &d.mul_term(&m, &c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Replaces variable `i` by `images[i]`; variables without an image are kept.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = images.get(i).cloned().unwrap_or_else(|| MPoly::var(i));
                t = &t * &base.pow(e);
            }
            out = &out + &t;
        }
        out
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators after clearing denominators; positive.
    pub fn integer_content(&self) -> BigInt {
        let l = self.denominator_lcm();
        self.terms
            .values()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n))
    }

    /// Rescales to integer coefficients with content 1 and a positive leading coefficient.
    pub fn primitive_integer(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let l = BigRational::from_integer(self.denominator_lcm());
        let scaled = self.scale(&l);
        let g = BigRational::from_integer(scaled.integer_content());
        let mut out = scaled.scale(&g.recip());
        if out.leading_coeff().is_negative() {
            out = -out;
        }
        out
    }

    /// Square root with positive leading coefficient, if `self` is a perfect square.
    pub fn sqrt(&self) -> Option<MPoly> {
        let Some((lm, lc)) = self.leading() else {
            return Some(MPoly::zero());
        };
        let c0 = rational_sqrt(lc)?;
        if lm.exponents().iter().any(|e| e % 2 != 0) {
            return None;
        }
        let m0 = Monomial::new(lm.exponents().iter().map(|e| e / 2).collect());
        let two_c0 = &c0 * BigRational::from_integer(2.into());
        let mut root = MPoly::term(c0, m0.clone());
        let mut rem = self - &(&root * &root);
        let mut last = m0.clone();
        while let Some((m, c)) = rem.leading() {
            let next = m.div(&m0)?;
            if next >= last {
                return None;
            }
            let t = MPoly::term(c / &two_c0, next.clone());
            let twice_root = root.scale(&BigRational::from_integer(2.into()));
            rem = &rem - &(&(&twice_root * &t) + &(&t * &t));
            root = &root + &t;
            last = next;
        }
        Some(root)
    }

    /// Renders using the grammar accepted by the expression parser.
    /// `names[i]` names variable `i`.
    pub fn to_expr(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_expr(m, names);
            match (a.is_one(), mono.is_empty()) {
                (true, true) => s.push('1'),
                (true, false) => s.push_str(&mono),
                (false, true) => s.push_str(&rational_expr(&a)),
                (false, false) => {
                    let _ = write!(s, "{}*{}", rational_expr(&a), mono);
                }
            }
        }
        s
    }
}

fn monomial_expr(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        let name = names.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
        match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Non-negative rational in parser syntax.
pub(crate) fn rational_expr(a: &BigRational) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// Square root in ℚ, sign chosen positive.
pub fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Gcd in ℚ[v₀, v₁, …], normalized to leading coefficient 1
/// (zero only when both inputs are zero).
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    let nv = a.nvars().max(b.nvars());
    let v = (0..nv).find(|&v| a.involves(v) && b.involves(v));
    let Some(v) = v else {
        // No shared variable: gcd divides the content of each with respect to
        // any variable only one of them involves.
        let v = (0..nv).find(|&v| a.involves(v) || b.involves(v)).expect("nonconstant");
        let (p, other) = if a.involves(v) { (a, b) } else { (b, a) };
        return gcd(&content_in(p, v), other);
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs_gcd(pa, pb, v);
    (&c * &g).monic()
}

fn monomial_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    // gcd with a monomial is the monomial of minimal common exponents.
    let (mono, other) = if a.num_terms() == 1 { (a, b) } else { (b, a) };
    let (m, _) = mono.leading().unwrap();
    let mut exps: Vec<u32> = m.exponents().to_vec();
    for (k, _) in other.terms() {
        for (i, e) in exps.iter_mut().enumerate() {
            *e = (*e).min(k.exp(i));
        }
    }
    MPoly::term(BigRational::one(), Monomial::new(exps))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part_in(p: &MPoly, v: usize) -> MPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

fn primitive_prs_gcd(a: MPoly, b: MPoly, v: usize) -> MPoly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            return g;
        }
        if !r.involves(v) {
            return MPoly::one();
        }
        f = g;
        g = primitive_part_in(&r, v);
    }
}

/// A pseudo-remainder of `f` by `g` in `v`, up to a factor free of `v`.
fn pseudo_rem(f: &MPoly, g: &MPoly, v: usize) -> MPoly {
    let gc = g.coeffs_in(v);
    let dg = gc.len() - 1;
    let lc_g = &gc[dg];
    let mut r = f.coeffs_in(v);
    while r.len() > dg && !r.is_empty() {
        let dr = r.len() - 1;
        let lc_r = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lc_g;
        }
        for (i, gi) in gc.iter().enumerate() {
            let idx = i + dr - dg;
            r[idx] = &r[idx] - &(&lc_r * gi);
        }
        while r.last().is_some_and(MPoly::is_zero) {
            r.pop();
        }
    }
    MPoly::from_coeffs_in(v, &r)
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -self.clone()
    }
}
