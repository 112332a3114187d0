//! Parametric derivations `Σ c_j ∂/∂t_j` and linear differential operators
//! built from a commuting basis of them.

use std::collections::BTreeMap;

use super::linalg;
use super::ratfun::RatFun;
use super::scalar::ParamScalar;
use crate::error::{Error, Result};

/// An element of ℚ(t)·{∂₁,…,∂_m}; `coeffs[j]` multiplies ∂/∂t_j.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    coeffs: Vec<ParamScalar>,
}

impl Derivation {
    pub fn new(coeffs: Vec<ParamScalar>) -> Self {
        Derivation { coeffs }
    }

    pub fn zero(m: usize) -> Self {
        Derivation { coeffs: vec![ParamScalar::zero(); m] }
    }

    /// ∂/∂t_j among `m` parameters.
    pub fn coordinate(j: usize, m: usize) -> Self {
        let mut d = Self::zero(m);
        d.coeffs[j] = ParamScalar::one();
        d
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Derivation { coeffs: c.iter().map(|&k| ParamScalar::from_int(k)).collect() }
    }

    pub fn coeffs(&self) -> &[ParamScalar] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ParamScalar::is_zero)
    }

    pub fn has_constant_coeffs(&self) -> bool {
        self.coeffs.iter().all(ParamScalar::is_constant)
    }

    pub fn apply(&self, f: &RatFun) -> RatFun {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(RatFun::zero(), |acc, (j, c)| &acc + &f.derive_param(j).scale(c))
    }

    pub fn apply_scalar(&self, f: &ParamScalar) -> ParamScalar {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(ParamScalar::zero(), |acc, (j, c)| &acc + &(c * &f.derive(j)))
    }

    pub fn scale(&self, c: &ParamScalar) -> Derivation {
        Derivation { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        assert_eq!(self.len(), other.len());
        Derivation { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    /// Denominators cleared and content removed: coefficients in ℚ[t] with
    /// integer content 1 and the first nonzero coefficient positive.
    pub fn cleared(&self) -> Derivation {
        Derivation { coeffs: clear_denominators(&self.coeffs) }
    }
}

/// Lie bracket `[d1, d2]`; the `j`-th coordinate is
/// `Σ_i (c_i ∂_i(d_j) − d_i ∂_i(c_j))`.
pub fn commutator(d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
    if d1.len() != d2.len() {
        return Err(Error::InvalidInput("derivations over different parameter counts".into()));
    }
    let coeffs = (0..d1.len()).map(|j| &d1.apply_scalar(&d2.coeffs[j]) - &d2.apply_scalar(&d1.coeffs[j])).collect();
    Ok(Derivation { coeffs })
}

/// Multiplies a scalar vector by a common factor so that all entries are
/// polynomials with coprime integer coefficients, first nonzero entry positive.
pub fn clear_denominators(v: &[ParamScalar]) -> Vec<ParamScalar> {
    use super::mpoly::{gcd, MPoly};
    let Some(first) = v.iter().find(|c| !c.is_zero()) else {
        return v.to_vec();
    };
    let l = v.iter().fold(MPoly::one(), |acc, c| {
        let g = gcd(&acc, c.den());
        &acc * &c.den().div_exact(&g).expect("gcd divides")
    });
    let nums: Vec<MPoly> = v.iter().map(|c| (c.num() * &l).div_exact(c.den()).expect("lcm divides")).collect();
    let g = nums.iter().fold(MPoly::zero(), |acc, p| gcd(&acc, p));
    let mut scale = &ParamScalar::from_poly(l) / &ParamScalar::from_poly(g);
    // make the integer content 1 and the leading sign of the first entry positive
    let head = (first * &scale).num().primitive_integer();
    let head_val = ParamScalar::from_poly(head);
    scale = &scale * &(&head_val / &(first * &scale));
    v.iter().map(|c| c * &scale).collect()
}

/// Exponent vector over a fixed derivation basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerMonomial(Vec<u32>);

impl DerMonomial {
    pub fn identity(k: usize) -> Self {
        DerMonomial(vec![0; k])
    }

    pub fn unit(j: usize, k: usize) -> Self {
        let mut v = vec![0; k];
        v[j] = 1;
        DerMonomial(v)
    }

    pub fn new(exps: Vec<u32>) -> Self {
        DerMonomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.order() == 0
    }

    pub fn times(&self, j: usize) -> DerMonomial {
        let mut v = self.0.clone();
        v[j] += 1;
        DerMonomial(v)
    }

    /// `self / ∂_j`, if `∂_j` occurs.
    pub fn without(&self, j: usize) -> Option<DerMonomial> {
        let mut v = self.0.clone();
        v[j] = v[j].checked_sub(1)?;
        Some(DerMonomial(v))
    }

    /// All monomials over `k` derivations with order in `lo..=hi`, ascending.
    pub fn all_up_to(k: usize, lo: u32, hi: u32) -> Vec<DerMonomial> {
        let mut out = Vec::new();
        for ord in lo..=hi {
            let mut level = Vec::new();
            compositions(k, ord, &mut vec![0; k], 0, &mut level);
            level.sort();
            out.extend(level);
        }
        out
    }
}

fn compositions(k: usize, rest: u32, cur: &mut Vec<u32>, pos: usize, out: &mut Vec<DerMonomial>) {
    if k == 0 {
        if rest == 0 {
            out.push(DerMonomial(Vec::new()));
        }
        return;
    }
    if pos == k - 1 {
        cur[pos] = rest;
        out.push(DerMonomial(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in 0..=rest {
        cur[pos] = e;
        compositions(k, rest - e, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

impl Ord for DerMonomial {
    /// Graded, then lexicographic with the first derivation most significant.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order().cmp(&other.order()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DerMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `Σ c_θ θ` with θ monomials over `basis` (a commuting family).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    basis: Vec<Derivation>,
    terms: BTreeMap<DerMonomial, ParamScalar>,
}

impl DiffOperator {
    pub fn zero(basis: Vec<Derivation>) -> Self {
        DiffOperator { basis, terms: BTreeMap::new() }
    }

    pub fn identity(basis: Vec<Derivation>) -> Self {
        let k = basis.len();
        Self::monomial(basis, DerMonomial::identity(k), ParamScalar::one())
    }

    pub fn monomial(basis: Vec<Derivation>, m: DerMonomial, c: ParamScalar) -> Self {
        let mut op = Self::zero(basis);
        op.add_term(m, c);
        op
    }

    /// Operator with coefficient `coeffs[i]` on `monomials[i]`.
    pub fn from_vector(basis: Vec<Derivation>, monomials: &[DerMonomial], coeffs: &[ParamScalar]) -> Self {
        let mut op = Self::zero(basis);
        for (m, c) in monomials.iter().zip(coeffs) {
            op.add_term(m.clone(), c.clone());
        }
        op
    }

    pub fn add_term(&mut self, m: DerMonomial, c: ParamScalar) {
        assert_eq!(m.exponents().len(), self.basis.len(), "monomial over a different basis");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(ParamScalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn basis(&self) -> &[Derivation] {
        &self.basis
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&DerMonomial, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &DerMonomial) -> ParamScalar {
        self.terms.get(m).cloned().unwrap_or_else(ParamScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(DerMonomial::order).max().unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<&DerMonomial> {
        self.terms.keys().next_back()
    }

    /// Coefficient vector over `monomials`.
    pub fn to_vector(&self, monomials: &[DerMonomial]) -> Vec<ParamScalar> {
        monomials.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn scale(&self, c: &ParamScalar) -> DiffOperator {
        let mut op = Self::zero(self.basis.clone());
        for (m, v) in &self.terms {
            op.add_term(m.clone(), v * c);
        }
        op
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let mut op = self.clone();
        for (m, v) in &other.terms {
            op.add_term(m.clone(), v.clone());
        }
        op
    }

    /// θ(f), applying the basis derivations in order.
    pub fn apply_monomial(&self, m: &DerMonomial, f: &RatFun) -> RatFun {
        let mut g = f.clone();
        for (j, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                if g.is_zero() {
                    return g;
                }
                g = self.basis[j].apply(&g);
            }
        }
        g
    }

    pub fn apply(&self, f: &RatFun) -> RatFun {
        self.terms.iter().fold(RatFun::zero(), |acc, (m, c)| &acc + &self.apply_monomial(m, f).scale(c))
    }

    /// The composite `basis[j] ∘ self`.
    pub fn prolong(&self, j: usize) -> DiffOperator {
        let d = &self.basis[j];
        let mut op = Self::zero(self.basis.clone());
        for (m, c) in &self.terms {
            op.add_term(m.clone(), d.apply_scalar(c));
            op.add_term(m.times(j), c.clone());
        }
        op
    }

    /// Rewrites over the coordinate derivations ∂/∂t_1..∂/∂t_m by expanding
    /// every basis element and composing.
    pub fn expand_to_coordinates(&self, m: usize) -> DiffOperator {
        let coord: Vec<Derivation> = (0..m).map(|j| Derivation::coordinate(j, m)).collect();
        let mut out = DiffOperator::zero(coord.clone());
        for (mono, c) in &self.terms {
            let mut acc = DiffOperator::identity(coord.clone());
            // θ = Π d_j^{e_j}; compose from the right
            for (j, &e) in mono.exponents().iter().enumerate().rev() {
                for _ in 0..e {
                    acc = compose_derivation(&self.basis[j], &acc);
                }
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// Coefficients cleared to coprime integer-coefficient polynomials,
    /// leading term positive.
    pub fn cleared(&self) -> DiffOperator {
        let keys: Vec<DerMonomial> = self.terms.keys().rev().cloned().collect();
        let vals: Vec<ParamScalar> = keys.iter().map(|k| self.terms[k].clone()).collect();
        let cleared = clear_denominators(&vals);
        Self::from_vector(self.basis.clone(), &keys, &cleared)
    }
}

/// `d ∘ op` for `op` over coordinate derivations.
fn compose_derivation(d: &Derivation, op: &DiffOperator) -> DiffOperator {
    let mut out = DiffOperator::zero(op.basis.clone());
    for (i, a) in d.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let p = op.prolong(i);
        out = out.add(&p.scale(a));
    }
    out
}

/// Vector-space membership for operators over the same basis.
pub fn operator_in_span(ops: &[DiffOperator], op: &DiffOperator, monomials: &[DerMonomial]) -> bool {
    let basis: Vec<_> = ops.iter().map(|o| o.to_vector(monomials)).collect();
    linalg::in_span(&basis, &op.to_vector(monomials))
}
