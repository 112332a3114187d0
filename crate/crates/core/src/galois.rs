//! The Borel-form presentation of the Galois group: the Lie subspace of
//! parametric derivations, defining operators of the diagonal part `A`, and
//! the operators cutting out the unipotent radical `B` over a commuting basis.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::algebra::derivation::commutator;
use crate::algebra::linalg::{in_span, row_reduce, Matrix};
use crate::algebra::{DerMonomial, Derivation, DiffOperator, ParamScalar, RatFun, UPoly};
use crate::error::{Error, Result};
use crate::hermite::{hermite_reduce, is_exact_derivative};
use crate::linear_ode::telescoper_space;
use crate::riccati::{riccati_rational_solutions, verify_riccati, GaugeNote};

/// `{∂ ∈ span(base) : ∂u ∈ δ_x(K)}` with a commuting basis Π′.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSubspace {
    /// The parametric derivations the coordinates refer to.
    pub base: Vec<Derivation>,
    /// Reduced row-echelon basis in `base` coordinates.
    pub base_coordinates: Vec<Vec<ParamScalar>>,
    /// Π′: the same basis as derivations in ∂/∂t coordinates.
    pub basis: Vec<Derivation>,
    /// Reduced row-echelon basis in ∂/∂t coordinates; independent of `base`.
    pub canonical: Vec<Vec<ParamScalar>>,
    /// `h_i` with `δ_x h_i = ∂′_i(u)`.
    pub certificates: Vec<RatFun>,
    /// Π′ with coefficients in ℚ[t], content 1.
    pub cleared_basis: Vec<Derivation>,
}

impl LieSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
}

/// The coordinate derivations ∂/∂t_1, …, ∂/∂t_m.
pub fn coordinate_base(m: usize) -> Vec<Derivation> {
    (0..m).map(|j| Derivation::coordinate(j, m)).collect()
}

fn combine(base: &[Derivation], m: usize, c: &[ParamScalar]) -> Derivation {
    base.iter().zip(c).fold(Derivation::zero(m), |acc, (d, ci)| acc.add(&d.scale(ci)))
}

/// Computes the Lie subspace over the coordinate derivations.
pub fn compute_lie_subspace(u: &RatFun, m: usize) -> Result<LieSubspace> {
    compute_lie_subspace_over(u, &coordinate_base(m))
}

/// Computes the Lie subspace over `base`, which must consist of
/// ℚ-linear combinations of the coordinate derivations.
pub fn compute_lie_subspace_over(u: &RatFun, base: &[Derivation]) -> Result<LieSubspace> {
    let m = base.first().map_or(0, Derivation::len);
    if base.iter().any(|d| d.len() != m || !d.has_constant_coeffs()) {
        return Err(Error::InvalidInput("base derivations must have constant coefficients".into()));
    }
    let k = base.len();
    // Σ c_j ∂_j u ∈ δ_x(K) iff Σ c_j r_j = 0 for the Hermite remainders r_j.
    let rems: Vec<RatFun> = base.iter().map(|d| hermite_reduce(&d.apply(u)).remainder_proper).collect();
    let l = rems.iter().fold(UPoly::one(), |acc, r| {
        let g = acc.gcd(r.den());
        &acc * &r.den().div_exact(&g)
    });
    let cols: Vec<UPoly> = rems.iter().map(|r| r.num() * &l.div_exact(r.den())).collect();
    let rows = cols.iter().filter_map(UPoly::degree).max().map_or(0, |d| d + 1);
    let mut mat = Matrix::zeros(rows, k);
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.coeffs().iter().enumerate() {
            mat.set(r, c, v.clone());
        }
    }
    let base_coordinates = row_reduce(&mat.nullspace(), k);
    let basis: Vec<Derivation> = base_coordinates.iter().map(|c| combine(base, m, c)).collect();
    let std: Vec<Vec<ParamScalar>> = basis.iter().map(|d| d.coeffs().to_vec()).collect();
    let canonical = row_reduce(&std, m);
    let mut certificates = Vec::with_capacity(basis.len());
    for d in &basis {
        match is_exact_derivative(&d.apply(u)) {
            (true, Some(h)) => certificates.push(h),
            _ => return Err(Error::InternalInconsistency("Lie subspace element is not integrable".into())),
        }
    }
    let cleared_basis = basis.iter().map(Derivation::cleared).collect();
    Ok(LieSubspace { base: base.to_vec(), base_coordinates, basis, canonical, certificates, cleared_basis })
}

/// True iff all pairwise brackets vanish.
///
/// For a row-echelon basis the brackets lie in the subspace and have zero
/// pivot coordinates, so they vanish; this check guards that argument.
pub fn verify_commuting_basis(basis: &[Derivation]) -> bool {
    basis.iter().enumerate().all(|(i, a)| {
        basis[i + 1..].iter().all(|b| commutator(a, b).map(|c| c.is_zero()).unwrap_or(false))
    })
}

/// A space of operators `p` with a defining/consequence split for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpace {
    /// Reduced basis (pivots on the highest monomials).
    pub basis: Vec<DiffOperator>,
    /// Certificates from the telescoper solve, one per basis element.
    pub certificates: Vec<RatFun>,
    /// A generating set modulo composition with the basis derivations.
    pub defining: Vec<DiffOperator>,
    /// Basis elements that are neither defining nor prolongations of
    /// lower-order defining operators.
    pub consequences: Vec<DiffOperator>,
}

/// Span-closed prolongation of `ops` (compositions with basis derivations)
/// up to order `max_order`.
fn prolongations(ops: &[DiffOperator], monomials: &[DerMonomial], max_order: u32) -> Vec<Vec<ParamScalar>> {
    let mut span: Vec<Vec<ParamScalar>> = Vec::new();
    let mut frontier: Vec<DiffOperator> = ops.to_vec();
    while let Some(op) = frontier.pop() {
        if op.order() > max_order {
            continue;
        }
        let v = op.to_vector(monomials);
        if in_span(&span, &v) {
            continue;
        }
        span.push(v);
        for j in 0..op.basis().len() {
            frontier.push(op.prolong(j));
        }
    }
    span
}

fn split_defining(
    basis: &[DiffOperator],
    monomials: &[DerMonomial],
    max_order: u32,
    ops_basis: &[Derivation],
) -> (Vec<DiffOperator>, Vec<DiffOperator>) {
    let space: Vec<Vec<ParamScalar>> = basis.iter().map(|p| p.to_vector(monomials)).collect();
    let min_order = monomials.iter().map(DerMonomial::order).min().unwrap_or(0);
    let mut chosen: Vec<DiffOperator> = Vec::new();
    let mut lower_span: BTreeMap<u32, Vec<Vec<ParamScalar>>> = BTreeMap::new();
    for k in min_order..=max_order {
        let below = prolongations(&chosen, monomials, max_order);
        lower_span.insert(k, below.clone());
        let mut current = below.clone();
        for mono in monomials.iter().rev().filter(|mm| mm.order() == k) {
            let op = DiffOperator::monomial(ops_basis.to_vec(), mono.clone(), ParamScalar::one());
            let v = op.to_vector(monomials);
            if in_span(&space, &v) && !in_span(&below, &v) {
                current.push(v);
                chosen.push(op);
            }
        }
        for p in basis.iter().filter(|p| p.order() == k) {
            let v = p.to_vector(monomials);
            if !in_span(&current, &v) {
                current.push(v);
                chosen.push(p.clone());
            }
        }
    }
    let consequences = basis
        .iter()
        .filter(|p| {
            let v = p.to_vector(monomials);
            let is_chosen = chosen.iter().any(|c| in_span(&[c.to_vector(monomials)], &v));
            let below = &lower_span[&p.order().max(min_order)];
            !is_chosen && !in_span(below, &v)
        })
        .cloned()
        .collect();
    (chosen, consequences)
}

fn operator_space(
    a: &RatFun,
    ops_basis: &[Derivation],
    monomials: &[DerMonomial],
    rhs: &[RatFun],
    max_order: u32,
) -> Result<OperatorSpace> {
    // highest monomials first so that reduced rows carry their top monomial as pivot
    let rev_monos: Vec<DerMonomial> = monomials.iter().rev().cloned().collect();
    let rev_rhs: Vec<RatFun> = rhs.iter().rev().cloned().collect();
    let space = telescoper_space(a, &rev_rhs)?;
    let basis: Vec<DiffOperator> = space
        .coefficient_basis
        .iter()
        .map(|c| DiffOperator::from_vector(ops_basis.to_vec(), &rev_monos, c))
        .collect();
    let (defining, consequences) = split_defining(&basis, monomials, max_order, ops_basis);
    Ok(OperatorSpace { basis, certificates: space.certificates, defining, consequences })
}

/// Telescopers of `u` over `base` of order `1..=max_order`: the defining
/// operators of the diagonal part, acting on `∂a/a`.
pub fn reductive_operators(u: &RatFun, base: &[Derivation], max_order: u32) -> Result<OperatorSpace> {
    if max_order == 0 {
        return Err(Error::InvalidInput("reductive order bound must be positive".into()));
    }
    let monomials = DerMonomial::all_up_to(base.len(), 1, max_order);
    let probe = DiffOperator::zero(base.to_vec());
    let rhs: Vec<RatFun> = monomials.iter().map(|mm| probe.apply_monomial(mm, u)).collect();
    let space = operator_space(&RatFun::zero(), base, &monomials, &rhs, max_order)?;
    for (p, h) in space.basis.iter().zip(&space.certificates) {
        if h.derive_x() != p.apply(u) {
            return Err(Error::InternalInconsistency("reductive certificate failed".into()));
        }
    }
    Ok(space)
}

/// `v_j` with `δ_x v_j = ∂′_j(u)`, zero constant term; checks integrability.
pub fn log_derivative_integrals(u: &RatFun, lie: &LieSubspace) -> Result<Vec<RatFun>> {
    let mut v = Vec::with_capacity(lie.dimension());
    for d in &lie.basis {
        let du = d.apply(u);
        match is_exact_derivative(&du) {
            (true, Some(g)) if g.derive_x() == du => v.push(g),
            _ => return Err(Error::InternalInconsistency("∂′u has no rational antiderivative".into())),
        }
    }
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if lie.basis[i].apply(&v[j]) != lie.basis[j].apply(&v[i]) {
                return Err(Error::WellDefinednessFailure(format!("∂′_{}v_{} ≠ ∂′_{}v_{}", i + 1, j + 1, j + 1, i + 1)));
            }
        }
    }
    Ok(v)
}

/// `w_θ = η² θ(η⁻²)` for all monomials θ over Π′ up to `max_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnipotentContext {
    pub v: Vec<RatFun>,
    pub w: BTreeMap<DerMonomial, RatFun>,
}

/// Evaluates `w_{∂′_jθ} = ∂′_j(w_θ) − 2 v_j w_θ` along every factorization
/// and checks that they agree.
pub fn eta_square_coefficients(v: &[RatFun], basis: &[Derivation], max_order: u32) -> Result<UnipotentContext> {
    let k = basis.len();
    if v.len() != k {
        return Err(Error::InvalidInput("one v_j per basis derivation required".into()));
    }
    let mut w: BTreeMap<DerMonomial, RatFun> = BTreeMap::new();
    for mono in DerMonomial::all_up_to(k, 0, max_order) {
        if mono.is_identity() {
            w.insert(mono, RatFun::one());
            continue;
        }
        let mut value: Option<RatFun> = None;
        for j in 0..k {
            let Some(prev) = mono.without(j) else { continue };
            let wp = &w[&prev];
            let cand = &basis[j].apply(wp) - &(&v[j] * wp).scale(&ParamScalar::from_int(2));
            match &value {
                None => value = Some(cand),
                Some(x) if *x != cand => {
                    return Err(Error::WellDefinednessFailure(format!("w at {:?} depends on the path", mono.exponents())));
                }
                _ => {}
            }
        }
        w.insert(mono, value.expect("nonidentity monomial"));
    }
    Ok(UnipotentContext { v: v.to_vec(), w })
}

/// Operators `p = Σ c_θ θ` over Π′ with `δ_x g − 2u g = Σ c_θ w_θ` solvable.
pub fn unipotent_operators(
    u: &RatFun,
    ctx: &UnipotentContext,
    basis: &[Derivation],
    max_order: u32,
) -> Result<OperatorSpace> {
    let monomials = DerMonomial::all_up_to(basis.len(), 0, max_order);
    let rhs: Vec<RatFun> = monomials
        .iter()
        .map(|mm| ctx.w.get(mm).cloned().ok_or_else(|| Error::InvalidInput("context below order bound".into())))
        .collect::<Result<_>>()?;
    let a = u.scale(&ParamScalar::from_int(-2));
    let space = operator_space(&a, basis, &monomials, &rhs, max_order)?;
    for (p, g) in space.basis.iter().zip(&space.certificates) {
        let lhs = &g.derive_x() + &(&a * g);
        let rhs = p.terms().fold(RatFun::zero(), |acc, (mm, c)| &acc + &ctx.w[mm].scale(c));
        if lhs != rhs {
            return Err(Error::InternalInconsistency("unipotent certificate failed".into()));
        }
    }
    Ok(space)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnipotentClass {
    /// `B = {0}`: the identity telescopes.
    Trivial,
    /// `B = 𝔾_a`: no parametric derivation integrates `u`.
    FullAdditiveGroup,
    /// `B` is cut out by the nonzero operators found.
    ProperSubgroup,
    /// No operator up to the order bound; `B` may still be proper.
    CompleteUpToBound,
}

impl UnipotentClass {
    pub fn as_str(self) -> &'static str {
        match self {
            UnipotentClass::Trivial => "Trivial",
            UnipotentClass::FullAdditiveGroup => "FullAdditiveGroup",
            UnipotentClass::ProperSubgroup => "ProperSubgroup",
            UnipotentClass::CompleteUpToBound => "CompleteUpToBound",
        }
    }
}

pub fn classify_unipotent(ops: &[DiffOperator], lie: &LieSubspace) -> Result<UnipotentClass> {
    let k = lie.dimension();
    let identity = DiffOperator::identity(lie.basis.clone());
    let monomials: Vec<DerMonomial> = {
        let mut all: Vec<DerMonomial> = ops.iter().flat_map(|p| p.terms().map(|(mm, _)| mm.clone())).collect();
        all.push(DerMonomial::identity(k));
        all.sort();
        all.dedup();
        all
    };
    let vecs: Vec<Vec<ParamScalar>> = ops.iter().map(|p| p.to_vector(&monomials)).collect();
    if in_span(&vecs, &identity.to_vector(&monomials)) {
        return Ok(UnipotentClass::Trivial);
    }
    if lie.is_zero() {
        if !ops.is_empty() {
            return Err(Error::ConsistencyViolation("nonzero operator with trivial Lie subspace".into()));
        }
        return Ok(UnipotentClass::FullAdditiveGroup);
    }
    Ok(if ops.is_empty() { UnipotentClass::CompleteUpToBound } else { UnipotentClass::ProperSubgroup })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub max_order_reductive: u32,
    pub max_order_unipotent: u32,
    /// Base parametric derivations; the coordinate ones when `None`.
    pub base: Option<Vec<Derivation>>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { max_order_reductive: 2, max_order_unipotent: 2, base: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub m: usize,
    pub q: RatFun,
    pub gauge: Option<GaugeNote>,
    pub riccati_solutions: Vec<RatFun>,
    pub u: RatFun,
    pub lie: LieSubspace,
    pub reductive: OperatorSpace,
    pub context: UnipotentContext,
    pub unipotent: OperatorSpace,
    pub unipotent_class: UnipotentClass,
    /// Set when the result depends on the order bounds.
    pub complete_up_to_bound: bool,
    pub max_order_reductive: u32,
    pub max_order_unipotent: u32,
}

/// Runs the whole pipeline for `Y'' = qY` over `m` parameters.
pub fn compute_presentation(
    q: &RatFun,
    m: usize,
    supplied_u: Option<&RatFun>,
    gauge: Option<GaugeNote>,
    options: &PipelineOptions,
) -> Result<GroupPresentation> {
    let (riccati_solutions, u) = match supplied_u {
        Some(u) => {
            if !verify_riccati(q, u) {
                return Err(Error::InvalidRiccatiSolution);
            }
            (vec![u.clone()], u.clone())
        }
        None => {
            let sols = riccati_rational_solutions(q)?;
            let first = sols.first().cloned().ok_or(Error::NoRationalRiccatiSolution)?;
            (sols, first)
        }
    };
    assemble_presentation(q, m, riccati_solutions, u, gauge, options)
}

/// Runs the stages after the Riccati solution `u` is known.
pub fn assemble_presentation(
    q: &RatFun,
    m: usize,
    riccati_solutions: Vec<RatFun>,
    u: RatFun,
    gauge: Option<GaugeNote>,
    options: &PipelineOptions,
) -> Result<GroupPresentation> {
    let base = options.base.clone().unwrap_or_else(|| coordinate_base(m));
    let lie = compute_lie_subspace_over(&u, &base)?;
    if !verify_commuting_basis(&lie.basis) {
        return Err(Error::NoncommutingBasis(format!("{} basis elements", lie.dimension())));
    }
    let reductive = if base.is_empty() {
        OperatorSpace { basis: Vec::new(), certificates: Vec::new(), defining: Vec::new(), consequences: Vec::new() }
    } else {
        reductive_operators(&u, &base, options.max_order_reductive)?
    };
    let v = log_derivative_integrals(&u, &lie)?;
    let context = eta_square_coefficients(&v, &lie.basis, options.max_order_unipotent)?;
    let unipotent = unipotent_operators(&u, &context, &lie.basis, options.max_order_unipotent)?;
    let unipotent_class = classify_unipotent(&unipotent.basis, &lie)?;
    let complete_up_to_bound =
        matches!(unipotent_class, UnipotentClass::ProperSubgroup | UnipotentClass::CompleteUpToBound);
    Ok(GroupPresentation {
        m,
        q: q.clone(),
        gauge,
        riccati_solutions,
        u,
        lie,
        reductive,
        context,
        unipotent,
        unipotent_class,
        complete_up_to_bound,
        max_order_reductive: options.max_order_reductive,
        max_order_unipotent: options.max_order_unipotent,
    })
}

/// Rescales to coefficients in ℚ[t] with content 1 and positive leading
/// coefficient on the highest monomial.
pub fn cleared_coordinates(op: &DiffOperator, m: usize) -> DiffOperator {
    op.expand_to_coordinates(m).cleared()
}

fn is_positive(c: &ParamScalar) -> bool {
    c.num().leading_coeff().is_positive()
}

fn coeff_prefix(c: &ParamScalar, names: &[String]) -> String {
    if c.is_one() {
        return String::new();
    }
    let s = c.to_expr(names);
    if c.num().num_terms() > 1 || !c.den().is_one() {
        format!("({s})*")
    } else {
        format!("{s}*")
    }
}

fn equation(terms: Vec<(ParamScalar, String)>, names: &[String]) -> String {
    let side = |ts: &[(ParamScalar, String)]| {
        if ts.is_empty() {
            "0".to_string()
        } else {
            ts.iter().map(|(c, s)| format!("{}{s}", coeff_prefix(c, names))).collect::<Vec<_>>().join(" + ")
        }
    };
    let (pos, neg): (Vec<_>, Vec<_>) = terms.into_iter().partition(|(c, _)| is_positive(c));
    let neg: Vec<_> = neg.into_iter().map(|(c, s)| (-c, s)).collect();
    format!("{} = {}", side(&pos), side(&neg))
}

fn ordered_terms(op: &DiffOperator) -> Vec<(DerMonomial, ParamScalar)> {
    // highest order first; within an order the first derivation first
    let mut ts: Vec<_> = op.terms().map(|(mm, c)| (mm.clone(), c.clone())).collect();
    ts.sort_by(|(a, _), (b, _)| b.order().cmp(&a.order()).then_with(|| b.exponents().cmp(a.exponents())));
    ts
}

fn label(j: usize) -> String {
    format!("d{}", j + 1)
}

/// `p(log a) = 0` with one base derivation factored out of each monomial,
/// e.g. `t1*(d1 a)/a = t2*(d2 a)/a` or `d1((d1 a)/a) = 0`.
pub fn render_a_equation(op: &DiffOperator, m: usize, names: &[String]) -> String {
    let cleared = cleared_coordinates(op, m);
    let terms = ordered_terms(&cleared)
        .into_iter()
        .map(|(mono, c)| {
            let e = mono.exponents();
            let j = e.iter().position(|&x| x > 0).expect("order ≥ 1");
            let mut s = format!("({} a)/a", label(j));
            let rest = mono.without(j).expect("present");
            for (i, &k) in rest.exponents().iter().enumerate().rev() {
                for _ in 0..k {
                    s = format!("{}({s})", label(i));
                }
            }
            (c, s)
        })
        .collect();
    equation(terms, names)
}

fn monomial_on(mono: &DerMonomial, var: &str) -> String {
    if mono.is_identity() {
        return var.to_string();
    }
    let parts: Vec<String> = mono
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| if e == 1 { label(j) } else { format!("{}^{e}", label(j)) })
        .collect();
    format!("({} {var})", parts.join(" "))
}

/// `p(b) = 0` over ∂/∂t coordinates, e.g. `t1*(d1 b) = t2*(d2 b)`.
pub fn render_b_equation(op: &DiffOperator, m: usize, names: &[String]) -> String {
    let cleared = cleared_coordinates(op, m);
    let terms = ordered_terms(&cleared).into_iter().map(|(mono, c)| (c, monomial_on(&mono, "b"))).collect();
    equation(terms, names)
}

/// `t1*d1 - t2*d2`.
pub fn render_derivation(d: &Derivation, names: &[String]) -> String {
    let mut out = String::new();
    for (j, c) in d.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (neg, mag) = if is_positive(c) { (false, c.clone()) } else { (true, -c) };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&coeff_prefix(&mag, names));
        out.push_str(&label(j));
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// Coefficient vector helper for span comparisons of coordinate operators.
pub fn coordinate_span(ops: &[DiffOperator], m: usize, max_order: u32) -> Vec<Vec<ParamScalar>> {
    let monomials = DerMonomial::all_up_to(m, 0, max_order);
    let vecs: Vec<Vec<ParamScalar>> = ops.iter().map(|p| p.expand_to_coordinates(m).to_vector(&monomials)).collect();
    row_reduce(&vecs, monomials.len())
}
