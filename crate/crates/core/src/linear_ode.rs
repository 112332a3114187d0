//! Rational solutions of `δ_x y + a·y = Σ c_i b_i` and the space of
//! coefficient vectors `c` for which one exists (telescoper spaces).

use num_traits::{Signed, ToPrimitive};

use crate::algebra::linalg::{row_reduce, Matrix};
use crate::algebra::upoly::coprime_base;
use crate::algebra::{ParamScalar, RatFun, UPoly};
use crate::error::{Error, Result};

/// Basis of `{c : δ_x y + a y = Σ c_i b_i solvable in K}` with one
/// certificate `y` per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescoperSpace {
    /// Reduced row-echelon basis; each vector has one entry per right-hand side.
    pub coefficient_basis: Vec<Vec<ParamScalar>>,
    pub certificates: Vec<RatFun>,
}

impl TelescoperSpace {
    pub fn dimension(&self) -> usize {
        self.coefficient_basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficient_basis.is_empty()
    }
}

/// Characteristic polynomial of multiplication by `r` on ℚ(t)[x]/(f), `f`
/// squarefree. Its roots are the values of `r` at the roots of `f`.
fn class_charpoly(r: &UPoly, f: &UPoly) -> UPoly {
    let n = f.degree().expect("nonconstant factor");
    let r = r.rem(f);
    // column k = x^k · r mod f
    let mut m = Matrix::zeros(n, n);
    let mut col = r.clone();
    for k in 0..n {
        for i in 0..n {
            m.set(i, k, col.coeff(i));
        }
        col = col.shift(1).rem(f);
    }
    // Faddeev–LeVerrier
    let mut coeffs = vec![ParamScalar::zero(); n + 1];
    coeffs[n] = ParamScalar::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        // mk ← A·mk + c_{n−k+1} I
        let mut next = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = if i == j { coeffs[n - k + 1].clone() } else { ParamScalar::zero() };
                for l in 0..n {
                    let a = m.get(i, l);
                    if !a.is_zero() {
                        s = &s + &(a * mk.get(l, j));
                    }
                }
                next.set(i, j, s);
            }
        }
        mk = next;
        let mut tr = ParamScalar::zero();
        for i in 0..n {
            for l in 0..n {
                tr = &tr + &(m.get(i, l) * mk.get(l, i));
            }
        }
        coeffs[n - k] = -(&tr / &ParamScalar::from_int(k as i64));
    }
    UPoly::from_coeffs(coeffs)
}

/// `D` with `den(y) | D` for every rational solution `y`.
///
/// Per coprime-base factor `f` with pole order `α` of `a` and largest pole
/// order `β` of the `b_i`, the admitted order is `β − 1` when `α = 0` and
/// `β − α` when `α ≥ 2`. When `α = 1` a literal positive integer residue `n`
/// of `a` along `f` also admits order `n`.
pub fn denominator_bound(a: &RatFun, b_list: &[RatFun]) -> UPoly {
    bound_factors(a, b_list).iter().fold(UPoly::one(), |d, (f, n)| &d * &f.pow(*n))
}

/// [`denominator_bound`] as pairwise coprime squarefree factors with exponents.
fn bound_factors(a: &RatFun, b_list: &[RatFun]) -> Vec<(UPoly, u32)> {
    let mut dens: Vec<UPoly> = vec![a.den().clone()];
    dens.extend(b_list.iter().filter(|b| !b.is_zero()).map(|b| b.den().clone()));
    let mut out = Vec::new();
    for f in coprime_base(&dens) {
        let alpha = if a.is_zero() { 0 } else { a.den().multiplicity_of(&f) as i64 };
        let beta = b_list.iter().filter(|b| !b.is_zero()).map(|b| b.den().multiplicity_of(&f) as i64).max().unwrap_or(0);
        let n = match alpha {
            0 => beta - 1,
            1 => {
                // y ~ (x−p)^{−n}: the order-(n+1) terms cancel iff res_p(a) = n
                let r = (&a.num().rem(&f) * &inverse_mod(&a.den().derivative(), &f)).rem(&f);
                let cp = class_charpoly(&r, &f);
                let best = cp.integer_roots().into_iter().filter(|k| k.is_positive()).max();
                let k = best.and_then(|k| k.to_i64()).unwrap_or(0);
                (beta - 1).max(k)
            }
            _ => beta - alpha,
        };
        if n > 0 {
            out.push((f, n as u32));
        }
    }
    out
}

fn inverse_mod(p: &UPoly, f: &UPoly) -> UPoly {
    let (g, s, _) = p.rem(f).ext_gcd(f);
    debug_assert!(g.is_one(), "not invertible modulo the factor");
    s
}

/// Upper bound on `deg N` for solutions `y = N / D`; `None` when only `y = 0`
/// is possible.
pub fn degree_bound(a: &RatFun, b_list: &[RatFun], d: &UPoly) -> Option<usize> {
    let nu_b = b_list.iter().filter_map(RatFun::degree_at_infinity).max();
    // bound δ on deg y at infinity
    let delta: Option<i64> = match a.degree_at_infinity() {
        Some(nu_a) if nu_a >= 0 => nu_b.map(|nb| nb - nu_a),
        Some(-1) => {
            // leading terms (δ + ρ)·c·x^{δ−1}
            let rho = a.leading_ratio();
            let special = (-rho).as_integer().and_then(|k| k.to_i64());
            match (nu_b.map(|nb| nb + 1), special) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            }
        }
        _ => Some(nu_b.map_or(0, |nb| (nb + 1).max(0))),
    };
    let bound = delta? + d.deg();
    (bound >= 0).then_some(bound as usize)
}

/// Computes the telescoper space; every certificate is checked by
/// substitution.
pub fn telescoper_space(a: &RatFun, b_list: &[RatFun]) -> Result<TelescoperSpace> {
    let nb = b_list.len();
    if nb == 0 {
        return Ok(TelescoperSpace { coefficient_basis: Vec::new(), certificates: Vec::new() });
    }
    let factors = bound_factors(a, b_list);
    let d = factors.iter().fold(UPoly::one(), |d, (f, n)| &d * &f.pow(*n));
    let deg_n = degree_bound(a, b_list, &d);
    let ny = deg_n.map_or(0, |k| k + 1);

    // With y = N/D: N' + (a − D'/D)·N = D·Σ c_i b_i. D'/D = Σ n f'/f has a
    // squarefree denominator, so clearing by L keeps the system small.
    let dlog = factors.iter().fold(RatFun::zero(), |acc, (f, n)| {
        let term = RatFun::new(f.derivative().scale(&ParamScalar::from_int(i64::from(*n))), f.clone()).expect("nonzero factor");
        &acc + &term
    });
    let shift = a - &dlog;
    let db: Vec<RatFun> = b_list.iter().map(|b| b * &RatFun::from_poly(d.clone())).collect();
    let mut l = shift.den().clone();
    for x in &db {
        l = lcm(&l, x.den());
    }
    let p = shift.num() * &l.div_exact(shift.den());

    let mut columns: Vec<UPoly> = Vec::with_capacity(ny + nb);
    for k in 0..ny {
        // L·k·x^{k−1} + P·x^k
        let mut col = p.shift(k);
        if k > 0 {
            col = &col + &l.shift(k - 1).scale(&ParamScalar::from_int(k as i64));
        }
        columns.push(col);
    }
    for x in &db {
        columns.push(-(&(x.num() * &l.div_exact(x.den()))));
    }
    let rows = columns.iter().filter_map(UPoly::degree).max().map_or(0, |k| k + 1);
    let mut m = Matrix::zeros(rows, ny + nb);
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.coeffs().iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }

    let kernel = m.nullspace();
    let projected: Vec<Vec<ParamScalar>> = kernel.iter().map(|v| v[ny..].to_vec()).collect();
    let basis = row_reduce(&projected, nb);

    let mut my = Matrix::zeros(rows, ny);
    for r in 0..rows {
        for c in 0..ny {
            my.set(r, c, m.get(r, c).clone());
        }
    }
    let mut certificates = Vec::with_capacity(basis.len());
    for cvec in &basis {
        // M_y · y = −M_c · c
        let rhs: Vec<ParamScalar> = (0..rows)
            .map(|r| {
                cvec.iter().enumerate().fold(ParamScalar::zero(), |acc, (i, ci)| &acc - &(m.get(r, ny + i) * ci))
            })
            .collect();
        let ycoeffs = if ny == 0 {
            Some(Vec::new())
        } else {
            my.solve(&rhs)
        };
        let ycoeffs = ycoeffs.ok_or_else(|| Error::InternalInconsistency("projected telescoper has no preimage".into()))?;
        let y = RatFun::new(UPoly::from_coeffs(ycoeffs), d.clone())?;
        let lhs = &y.derive_x() + &(a * &y);
        let rhs = b_list.iter().zip(cvec).fold(RatFun::zero(), |acc, (b, c)| &acc + &b.scale(c));
        if lhs != rhs {
            return Err(Error::InternalInconsistency("telescoper certificate failed substitution".into()));
        }
        certificates.push(y);
    }
    Ok(TelescoperSpace { coefficient_basis: basis, certificates })
}

fn lcm(p: &UPoly, q: &UPoly) -> UPoly {
    let g = p.gcd(q);
    (p * &q.div_exact(&g)).monic()
}

/// A rational solution of `δ_x y + a y = b`, if one exists.
pub fn first_order_rational_solution(a: &RatFun, b: &RatFun) -> Result<Option<RatFun>> {
    let space = telescoper_space(a, std::slice::from_ref(b))?;
    Ok(space.certificates.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RatFun {
        RatFun::x()
    }

    fn k(n: i64) -> RatFun {
        RatFun::from_int(n)
    }

    fn t(j: usize) -> RatFun {
        RatFun::param(j)
    }

    fn golden_u() -> RatFun {
        &(&(&(&t(0) * &t(1)) - &k(1)) - &x()) / &x()
    }

    fn s(n: i64) -> ParamScalar {
        ParamScalar::from_int(n)
    }

    #[test]
    fn denominator_bounds() {
        // non-integer residue 2(t₁t₂ − 1): no pole beyond those of the right-hand side
        let d = denominator_bound(&golden_u().scale(&s(2)), &[k(1)]);
        assert!(d.is_one());
        assert_eq!(denominator_bound(&RatFun::zero(), &[&k(1) / &x().pow(2)]), UPoly::x());
        // residue −2: solutions −x + c·x² are polynomials
        let a = &k(-2) / &x();
        let d = denominator_bound(&a, &[k(1)]);
        assert!(d.is_one());
        // residue +2 admits a double pole: y = c/x²
        let d = denominator_bound(&(&k(2) / &x()), &[RatFun::zero()]);
        assert_eq!(d, UPoly::x().pow(2));
    }

    #[test]
    fn degree_bounds() {
        assert!(degree_bound(&RatFun::zero(), &[x().pow(3)], &UPoly::one()).unwrap() >= 4);
        let a = (&t(0) / &x()).scale(&s(-2));
        assert_eq!(degree_bound(&a, &[k(1)], &UPoly::one()), Some(1));
    }

    #[test]
    fn golden_identity_does_not_telescope() {
        let u = golden_u();
        for a in [u.scale(&s(2)), u.scale(&s(-2))] {
            assert_eq!(first_order_rational_solution(&a, &k(1)).unwrap(), None);
        }
        let sp = telescoper_space(&u.scale(&s(-2)), &[k(1), RatFun::zero()]).unwrap();
        assert_eq!(sp.coefficient_basis, vec![vec![s(0), s(1)]]);
        assert_eq!(sp.certificates, vec![RatFun::zero()]);
    }

    #[test]
    fn plain_antiderivatives() {
        let sp = telescoper_space(&RatFun::zero(), &[&k(1) / &x(), &k(1) / &x().pow(2)]).unwrap();
        assert_eq!(sp.coefficient_basis, vec![vec![s(0), s(1)]]);
        assert_eq!(sp.certificates, vec![&k(-1) / &x()]);
        assert_eq!(first_order_rational_solution(&RatFun::zero(), &x().scale(&s(2))).unwrap(), Some(x().pow(2)));
    }

    #[test]
    fn parametric_residue_relation() {
        let b = [&t(1) / &x(), &t(0) / &x(), &k(1) / &x()];
        let sp = telescoper_space(&RatFun::zero(), &b).unwrap();
        assert_eq!(sp.dimension(), 2);
        let (t1, t2) = (ParamScalar::param(0), ParamScalar::param(1));
        for c in &sp.coefficient_basis {
            assert!((&(&(&c[0] * &t2) + &(&c[1] * &t1)) + &c[2]).is_zero());
        }
    }

    #[test]
    fn power_family_certificate() {
        let a = (&t(0) / &x()).scale(&s(-2));
        let y = first_order_rational_solution(&a, &k(1)).unwrap().unwrap();
        let expected = &x() / &(&k(1) - &t(0).scale(&s(2)));
        assert_eq!(y, expected);
    }

    #[test]
    fn reducible_factor_residue_class() {
        // a = 4x/(x² − 1) has residue 2 at both roots of x² − 1
        let f = &x().pow(2) - &k(1);
        let a = (&x() / &f).scale(&s(4));
        assert_eq!(denominator_bound(&a, &[RatFun::zero()]), f.num().pow(2));
        // y = 1/(x² − 1)² is a homogeneous solution, so the rhs 1/(x²−1)² telescopes via y + y₀
        let y0 = &k(1) / &f;
        let b = &y0.derive_x() + &(&a * &y0);
        let y = first_order_rational_solution(&a, &b).unwrap().unwrap();
        assert_eq!(&y.derive_x() + &(&a * &y), b);
    }

    #[test]
    fn large_integer_residue() {
        // residue 207 at x = 3 admits (x − 3)^207 in the bound
        let a = &(&(&x().pow(4).scale(&s(2)) + &x().pow(3).scale(&s(2))) - &x().scale(&s(3))) / &(&x() - &k(3));
        assert_eq!(denominator_bound(&a, &[k(1)]).degree(), Some(207));
        let y0 = &k(1) / &(&x() - &k(3)).pow(5);
        let b = &y0.derive_x() + &(&a * &y0);
        let y = first_order_rational_solution(&a, &b).unwrap().unwrap();
        assert_eq!(&y.derive_x() + &(&a * &y), b);
        assert!(first_order_rational_solution(&a, &k(-3)).unwrap().is_none());
    }
}
