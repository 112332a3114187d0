//! Hermite reduction with respect to δ_x and the membership test
//! `f ∈ δ_x(K)`.

use crate::algebra::{RatFun, UPoly};

/// `f = δ_x(integrated) + remainder_poly + remainder_proper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteResult {
    pub integrated: RatFun,
    pub remainder_poly: UPoly,
    /// Proper, with squarefree denominator.
    pub remainder_proper: RatFun,
}

impl HermiteResult {
    pub fn reassemble(&self) -> RatFun {
        &(&self.integrated.derive_x() + &RatFun::from_poly(self.remainder_poly.clone())) + &self.remainder_proper
    }
}

/// Quadratic Hermite reduction over the squarefree decomposition of `den(f)`.
pub fn hermite_reduce(f: &RatFun) -> HermiteResult {
    let mut a = f.num().clone();
    let mut d = f.den().clone();
    let mut g = RatFun::zero();
    if !d.is_constant() {
        let (_, sqf) = d.squarefree_factor().expect("nonzero denominator");
        for (v, i) in sqf {
            if i < 2 {
                continue;
            }
            let vp = v.derivative();
            let u = d.div_exact(&v.pow(i as u32));
            for j in (1..i).rev() {
                // b·u·v' + c·v = −a/j with deg b < deg v
                let rhs = a.scale(&crate::algebra::ParamScalar::from_ratio(-1, j as i64));
                let (b, c) = UPoly::solve_bezout(&(&u * &vp), &v, &rhs).expect("u·v' and v are coprime");
                g = &g + &RatFun::new(b.clone(), v.pow(j as u32)).expect("nonzero");
                let jc = c.scale(&crate::algebra::ParamScalar::from_int(-(j as i64)));
                a = &jc - &(&u * &b.derivative());
            }
            d = &u * &v;
        }
    }
    let (q, r) = a.divrem(&d).expect("nonzero denominator");
    let result = HermiteResult {
        integrated: g,
        remainder_poly: q,
        remainder_proper: RatFun::new(r, d).expect("nonzero denominator"),
    };
    debug_assert_eq!(&result.reassemble(), f);
    result
}

/// Whether `f = δ_x(g)` for some `g ∈ K`; the returned `g` has zero constant
/// term in its polynomial part.
pub fn is_exact_derivative(f: &RatFun) -> (bool, Option<RatFun>) {
    let h = hermite_reduce(f);
    if !h.remainder_proper.is_zero() {
        return (false, None);
    }
    let g = &h.integrated + &RatFun::from_poly(h.remainder_poly.integral());
    (true, Some(g))
}
