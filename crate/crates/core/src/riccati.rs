//! Unimodular normalization and rational solutions of `δ_x u + u² = q`.

use num_traits::ToPrimitive;

use crate::algebra::{Matrix, ParamScalar, RatFun, UPoly};
use crate::error::{Error, Result};

/// Records `Y = Z · exp(−½∫r1)` for `Y'' + r1 Y' + r0 Y = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeNote {
    pub r1: RatFun,
    pub r0: RatFun,
    /// `r1 / 2`; a Riccati solution `u` for `q` corresponds to the
    /// log-derivative `u − r1/2` of a solution of the original equation.
    pub shift: RatFun,
}

/// `q = r1²/4 + r1'/2 − r0`, so that `Z'' = q Z`.
pub fn normalize_to_unimodular(r1: &RatFun, r0: &RatFun) -> (RatFun, GaugeNote) {
    let quarter = ParamScalar::from_ratio(1, 4);
    let half = ParamScalar::from_ratio(1, 2);
    let q = &(&r1.pow(2).scale(&quarter) + &r1.derive_x().scale(&half)) - r0;
    let note = GaugeNote { r1: r1.clone(), r0: r0.clone(), shift: r1.scale(&half) };
    (q, note)
}

pub fn verify_riccati(q: &RatFun, u: &RatFun) -> bool {
    &u.derive_x() + &u.pow(2) == *q
}

/// Local exponent data at a finite pole factor `f` (monic, squarefree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleData {
    pub factor: UPoly,
    pub order: usize,
    /// Distinct candidate exponents, `+` branch first.
    pub exponents: Vec<ParamScalar>,
}

/// Exponent data at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityData {
    /// `O(∞) = deg den(q) − deg num(q)`; `None` for `q = 0`.
    pub order: Option<i64>,
    /// `[√q]_∞` (zero unless `O(∞) ≤ 0`).
    pub sqrt_part: UPoly,
    /// `(sign, α)` pairs, `+` first.
    pub exponents: Vec<(i64, ParamScalar)>,
}

fn half_one_plus_minus(b: &ParamScalar) -> Option<Vec<ParamScalar>> {
    let disc = &ParamScalar::one() + &(&ParamScalar::from_int(4) * b);
    let r = disc.perfect_square_root()?;
    let half = ParamScalar::from_ratio(1, 2);
    let plus = &(&ParamScalar::one() + &r) * &half;
    let minus = &(&ParamScalar::one() - &r) * &half;
    Some(if plus == minus { vec![plus] } else { vec![plus, minus] })
}

fn inverse_mod(p: &UPoly, f: &UPoly) -> UPoly {
    let (_, s, _) = p.rem(f).ext_gcd(f);
    s
}

/// Finite pole data; `Ok(None)` when some pole admits no exponent in ℚ(t).
pub fn finite_pole_data(q: &RatFun) -> Result<Option<Vec<PoleData>>> {
    let den = q.den();
    if den.is_constant() {
        return Ok(Some(Vec::new()));
    }
    let (_, sqf) = den.squarefree_factor()?;
    let mut out = Vec::new();
    for (g, e) in sqf {
        if e > 2 {
            return Err(Error::UnsupportedPoleStructure(format!("finite pole of order {e}")));
        }
        for f in g.split_rational_linear() {
            let exponents = if e == 1 {
                vec![ParamScalar::one()]
            } else {
                // b = N / (E·f'²) at the roots of f, where den = f²·E
                let rest = den.div_exact(&f.pow(2));
                let fp = f.derivative();
                let class = (&q.num().rem(&f) * &inverse_mod(&(&rest * &(&fp * &fp)), &f)).rem(&f);
                if !class.is_constant() {
                    return Ok(None);
                }
                match half_one_plus_minus(&class.coeff(0)) {
                    Some(v) => v,
                    None => return Ok(None),
                }
            };
            out.push(PoleData { factor: f, order: e, exponents });
        }
    }
    Ok(Some(out))
}

/// Coefficients `c_k` of the expansion of `q` at infinity for `k ≥ −1`,
/// indexed by `k + 1`.
fn laurent_at_infinity(q: &RatFun) -> Vec<ParamScalar> {
    let (quot, _) = q.num().shift(1).divrem(q.den()).expect("nonzero");
    quot.coeffs().to_vec()
}

/// Data at infinity; `Ok(None)` when no exponent exists in ℚ(t).
pub fn infinity_data(q: &RatFun) -> Result<Option<InfinityData>> {
    let Some(nu) = q.degree_at_infinity() else {
        return Ok(Some(InfinityData {
            order: None,
            sqrt_part: UPoly::zero(),
            exponents: vec![(1, ParamScalar::zero()), (-1, ParamScalar::one())],
        }));
    };
    let order = -nu;
    if order > 2 {
        return Ok(Some(InfinityData {
            order: Some(order),
            sqrt_part: UPoly::zero(),
            exponents: vec![(1, ParamScalar::zero()), (-1, ParamScalar::one())],
        }));
    }
    if order % 2 != 0 {
        return Err(Error::UnsupportedPoleStructure(format!("odd order {order} at infinity")));
    }
    if order == 2 {
        let Some(alphas) = half_one_plus_minus(&q.leading_ratio()) else {
            return Ok(None);
        };
        let exponents = alphas.into_iter().zip([1, -1]).map(|(a, s)| (s, a)).collect();
        return Ok(Some(InfinityData { order: Some(2), sqrt_part: UPoly::zero(), exponents }));
    }
    let v = (-order / 2) as usize;
    let c = laurent_at_infinity(q);
    let coef = |k: i64| c.get((k + 1) as usize).cloned().unwrap_or_else(ParamScalar::zero);
    let Some(lead) = coef(2 * v as i64).perfect_square_root() else {
        return Ok(None);
    };
    // S = Σ s_i x^i with S² matching q on x^{2v} … x^v
    let mut s = vec![ParamScalar::zero(); v + 1];
    s[v] = lead.clone();
    let two_lead = &ParamScalar::from_int(2) * &lead;
    for k in (v..2 * v).rev() {
        let i = k - v;
        let mut acc = coef(k as i64);
        for j in (i + 1)..v {
            let l = k as i64 - j as i64;
            if l > i as i64 && (l as usize) < v {
                acc = &acc - &(&s[j] * &s[l as usize]);
            }
        }
        s[i] = &acc / &two_lead;
    }
    let sp = UPoly::from_coeffs(s);
    let sq = &sp * &sp;
    let b = if v == 0 {
        coef(-1)
    } else {
        &coef(v as i64 - 1) - &sq.coeff(v - 1)
    };
    let ratio = &b / &lead;
    let half = ParamScalar::from_ratio(1, 2);
    let vv = ParamScalar::from_int(v as i64);
    let plus = &(&ratio - &vv) * &half;
    let minus = &(&(-&ratio) - &vv) * &half;
    Ok(Some(InfinityData { order: Some(order), sqrt_part: sp, exponents: vec![(1, plus), (-1, minus)] }))
}

/// Largest polynomial degree tried for the `P` factor.
const MAX_POLY_DEGREE: i64 = 256;

/// All rational Riccati solutions produced by the case-1 branches, in a
/// fixed branch order, each verified by substitution.
pub fn riccati_rational_solutions(q: &RatFun) -> Result<Vec<RatFun>> {
    let Some(poles) = finite_pole_data(q)? else {
        return Ok(Vec::new());
    };
    let Some(inf) = infinity_data(q)? else {
        return Ok(Vec::new());
    };
    let mut solutions: Vec<RatFun> = Vec::new();
    let mut choice = vec![0usize; poles.len()];
    loop {
        for (sign, alpha_inf) in &inf.exponents {
            let mut d = alpha_inf.clone();
            let mut omega = RatFun::from_poly(inf.sqrt_part.scale(&ParamScalar::from_int(*sign)));
            for (p, &c) in poles.iter().zip(&choice) {
                let alpha = &p.exponents[c];
                let deg = ParamScalar::from_int(p.factor.deg());
                d = &d - &(alpha * &deg);
                let logd = RatFun::new(p.factor.derivative(), p.factor.clone())?;
                omega = &omega + &logd.scale(alpha);
            }
            let Some(d) = d.as_integer().and_then(|k| k.to_i64()) else {
                continue;
            };
            if !(0..=MAX_POLY_DEGREE).contains(&d) {
                continue;
            }
            if let Some(u) = solve_polynomial_factor(q, &omega, d as usize)? {
                if !verify_riccati(q, &u) {
                    return Err(Error::InternalInconsistency("Riccati candidate failed substitution".into()));
                }
                if !solutions.contains(&u) {
                    solutions.push(u);
                }
            }
        }
        // next sign assignment, first pole most significant
        let mut i = poles.len();
        loop {
            if i == 0 {
                return Ok(solutions);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < poles[i].exponents.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Monic `P` of degree `d` with `P'' + 2ωP' + (ω' + ω² − q)P = 0`, free
/// coefficients set to zero; returns `u = ω + P'/P`.
fn solve_polynomial_factor(q: &RatFun, omega: &RatFun, d: usize) -> Result<Option<RatFun>> {
    let two_omega = omega.scale(&ParamScalar::from_int(2));
    let c0 = &(&omega.derive_x() + &omega.pow(2)) - q;
    let eval = |k: usize| -> RatFun {
        let p = RatFun::from_poly(UPoly::monomial(ParamScalar::one(), k));
        let p1 = p.derive_x();
        &(&p1.derive_x() + &(&two_omega * &p1)) + &(&c0 * &p)
    };
    let terms: Vec<RatFun> = (0..=d).map(eval).collect();
    let l = terms.iter().fold(UPoly::one(), |acc, t| {
        let g = acc.gcd(t.den());
        &acc * &t.den().div_exact(&g)
    });
    let cols: Vec<UPoly> = terms.iter().map(|t| t.num() * &l.div_exact(t.den())).collect();
    let rows = cols.iter().filter_map(UPoly::degree).max().map_or(0, |k| k + 1);
    let p = if d == 0 {
        if cols[0].is_zero() {
            UPoly::one()
        } else {
            return Ok(None);
        }
    } else {
        let mut m = Matrix::zeros(rows, d);
        for (k, col) in cols[..d].iter().enumerate() {
            for (r, v) in col.coeffs().iter().enumerate() {
                m.set(r, k, v.clone());
            }
        }
        let rhs: Vec<ParamScalar> = (0..rows).map(|r| -cols[d].coeff(r)).collect();
        let Some(mut coeffs) = m.solve(&rhs) else {
            return Ok(None);
        };
        coeffs.push(ParamScalar::one());
        UPoly::from_coeffs(coeffs)
    };
    let u = omega + &RatFun::new(p.derivative(), p)?;
    Ok(Some(u))
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

    fn tt() -> RatFun {
        &RatFun::param(0) * &RatFun::param(1)
    }

    fn golden_q() -> RatFun {
        let t = tt();
        let num = &(&(&x().pow(2) + &(&(&k(2) - &t.scale(&ParamScalar::from_int(2))) * &x())) + &t.pow(2))
            - &(&t.scale(&ParamScalar::from_int(3)) - &k(2));
        &num / &x().pow(2)
    }

    fn golden_u() -> RatFun {
        &(&(&tt() - &k(1)) - &x()) / &x()
    }

    #[test]
    fn golden_riccati_solution() {
        assert!(verify_riccati(&golden_q(), &golden_u()));
        let sols = riccati_rational_solutions(&golden_q()).unwrap();
        assert!(sols.contains(&golden_u()));
    }

    #[test]
    fn free_equation() {
        let sols = riccati_rational_solutions(&RatFun::zero()).unwrap();
        assert_eq!(sols, vec![RatFun::zero(), &k(1) / &x()]);
    }

    #[test]
    fn inverse_square_potential() {
        let sols = riccati_rational_solutions(&(&k(2) / &x().pow(2))).unwrap();
        assert_eq!(sols, vec![&k(2) / &x(), &k(-1) / &x()]);
    }

    #[test]
    fn verification() {
        assert!(verify_riccati(&RatFun::zero(), &RatFun::zero()));
        assert!(!verify_riccati(&RatFun::zero(), &(&k(1) / &x().pow(2))));
    }

    #[test]
    fn normalization() {
        let (q, _) = normalize_to_unimodular(&RatFun::zero(), &(-&(&k(3) / &x())));
        assert_eq!(q, &k(3) / &x());
        let (q, _) = normalize_to_unimodular(&(&k(2) / &x()), &RatFun::zero());
        assert!(q.is_zero());
        // incomplete Gamma: r1 = −p, the Riccati solution is −p/2
        let p = &(&(&k(1) - &RatFun::param(0)) - &x()) / &x();
        let (q, note) = normalize_to_unimodular(&-&p, &RatFun::zero());
        let u = p.scale(&ParamScalar::from_ratio(-1, 2));
        assert!(verify_riccati(&q, &u));
        assert_eq!(note.shift, u);
        assert!(riccati_rational_solutions(&q).unwrap().contains(&u));
    }

    #[test]
    fn unsupported_structures() {
        assert!(matches!(
            riccati_rational_solutions(&(&k(1) / &x().pow(3))),
            Err(Error::UnsupportedPoleStructure(_))
        ));
        assert!(matches!(riccati_rational_solutions(&x()), Err(Error::UnsupportedPoleStructure(_))));
    }

    #[test]
    fn polynomial_potential() {
        // u = x: u' + u² = 1 + x²
        let q = &x().pow(2) + &k(1);
        assert!(riccati_rational_solutions(&q).unwrap().contains(&x()));
    }
}
