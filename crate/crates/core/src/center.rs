//! Degree windows of the center `Z(U(g_k))` and the structural checks run on
//! them: freeness over the p-center, the complete-intersection shape of the
//! associated graded, the intersection with the reduced characteristic-zero
//! center, and the counterexample family.

use rayon::prelude::*;
use serde::Serialize;

use crate::env::{p_center_generators, reduce_element, Envelope, PbwElement};
use crate::error::{Error, Result};
use crate::lie::{compute_pmap, LieAlgebra, PMap, Structure};
use crate::monomial::{count_monomials_up_to, monomials_up_to_degree, weighted_exponents, Desc, LinComb, Monomial};
use crate::scalar::linalg::{dense_to_sparse, sparse_kernel, EchelonSpace, SparseVec};
use crate::scalar::{PrimeField, Rational, Rationals, Ring};
use crate::sym::{self, SymPoly};

/// Largest PBW span a window may have.
pub const WINDOW_BUDGET: usize = 200_000;

/// Outcome of a check that may not apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { witness: String },
    Vacuous { reason: String },
}

impl Verdict {
    pub fn fail(witness: impl Into<String>) -> Self {
        Self::Fail { witness: witness.into() }
    }

    pub fn vacuous(reason: impl Into<String>) -> Self {
        Self::Vacuous { reason: reason.into() }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Self::Fail { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Self::Pass)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail { .. } => "fail",
            Self::Vacuous { .. } => "vacuous",
        }
    }
}

/// Everything attached to one algebra at one prime.
pub struct PrimeContext {
    pub alg: LieAlgebra,
    pub field: PrimeField,
    pub pmap: PMap,
    pub env: Envelope<PrimeField>,
    /// `ξ_i = x_i^p − x_i^[p]`.
    pub p_center: Vec<PbwElement<u64>>,
}

impl PrimeContext {
    pub fn new(alg: &LieAlgebra, p: u64) -> Result<Self> {
        Self::with_pmap(alg, compute_pmap(alg, p)?)
    }

    pub fn with_pmap(alg: &LieAlgebra, pmap: PMap) -> Result<Self> {
        let field = *pmap.field();
        let env = Envelope::from_algebra(alg, &field)?;
        let p_center = p_center_generators(&env, &pmap)?;
        Ok(Self { alg: alg.clone(), field, pmap, env, p_center })
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn render(&self, u: &PbwElement<u64>) -> String {
        u.render(&self.field, self.alg.labels())
    }
}

/// Default window: `max(p + 1, 2·max deg f + 2)`.
pub fn default_window(p: u64, hc_degrees: &[u32]) -> u32 {
    let top = hc_degrees.iter().copied().max().unwrap_or(0);
    (p as u32 + 1).max(2 * top + 2)
}

/// Primes at or below the top invariant degree are treated as too small for
/// the structural statements: reductions there can collapse (in `sl_3` at 3
/// both generators reduce into the Cartan part).
pub fn prime_is_small(p: u64, hc_degrees: &[u32]) -> bool {
    hc_degrees.iter().any(|&d| u64::from(d) >= p)
}

/// Basis of `Z(U(g_k)) ∩ U_{≤D}`.
#[derive(Debug, Clone)]
pub struct CenterWindow {
    pub p: u64,
    pub degree: u32,
    /// Reduced echelon basis, monic, sorted by leading monomial.
    pub basis: Vec<PbwElement<u64>>,
    /// Monomials that survived the weight filter and entered the solve.
    pub columns: usize,
}

impl CenterWindow {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|b| b.leading_monomial().expect("nonzero").clone()).collect()
    }

    /// Echelon space of the window, keyed so pivots are leading monomials.
    pub fn space(&self, field: &PrimeField) -> EchelonSpace<PrimeField, Desc> {
        let mut s = EchelonSpace::new(*field);
        for (i, b) in self.basis.iter().enumerate() {
            s.insert(b.to_sparse(), vec![(i, 1)]);
        }
        s
    }
}

/// Joint kernel of `u ↦ [x_i, u]` on PBW monomials of degree `≤ d`.
///
/// Generators with diagonal `ad` act on each monomial by a scalar, so only
/// monomials of weight zero mod p can occur in a central element; the others
/// are dropped before the solve.
pub fn center_window(env: &Envelope<PrimeField>, d: u32) -> Result<CenterWindow> {
    let f = *env.ring();
    let dim = env.dim();
    let size = count_monomials_up_to(dim, d);
    if size > WINDOW_BUDGET {
        return Err(Error::WindowTooLarge { monomials: size, budget: WINDOW_BUDGET });
    }
    let st = env.structure();
    let mut diagonal = Vec::new();
    let mut diagonal_idx = Vec::new();
    let mut others = Vec::new();
    for i in 0..dim {
        match st.diagonal_weights(i) {
            Some(w) => {
                diagonal.push(w);
                diagonal_idx.push(i);
            }
            None => others.push(i),
        }
    }
    let others = generating_subset(st, &diagonal_idx, &others);
    let mut monos: Vec<Monomial> = monomials_up_to_degree(dim, d)
        .into_iter()
        .filter(|m| {
            diagonal.iter().all(|w| {
                let s = m.exponents().iter().zip(w).fold(0u64, |acc, (&e, &wi)| f.add(&acc, &f.mul(&(e as u64 % f.p()), &wi)));
                s == 0
            })
        })
        .collect();
    monos.reverse();
    let columns: Vec<SparseVec<(usize, Monomial), u64>> = monos
        .par_iter()
        .map(|m| {
            let single = LinComb::monomial(&f, m.clone(), 1);
            let mut col = Vec::new();
            for &i in &others {
                for (mm, c) in env.bracket_with_generator(i, &single).into_terms() {
                    col.push(((i, mm), c));
                }
            }
            col
        })
        .collect();
    let kern = sparse_kernel(&f, columns);
    let mut basis: Vec<PbwElement<u64>> = kern
        .into_iter()
        .map(|v| LinComb::from_terms(&f, v.into_iter().map(|(i, c)| (monos[i].clone(), c))))
        .collect();
    basis.reverse();
    Ok(CenterWindow { p: f.p(), degree: d, basis, columns: monos.len() })
}

/// Span of the Lie subalgebra generated by the given basis elements.
fn closure_rank(st: &Structure<PrimeField>, gens: &[usize]) -> usize {
    let f = *st.ring();
    let n = st.dim();
    let mut space = EchelonSpace::<PrimeField, usize>::new(f);
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for &g in gens {
        let mut v = vec![0; n];
        v[g] = 1;
        if space.insert(dense_to_sparse(&f, &v), Vec::new()).is_none() {
            basis.push(v);
        }
    }
    let mut k = 0;
    while k < basis.len() {
        for j in 0..=k {
            let b = st.bracket_vec(&basis[j], &basis[k]);
            if space.insert(dense_to_sparse(&f, &b), Vec::new()).is_none() {
                basis.push(b);
            }
        }
        k += 1;
    }
    space.rank()
}

/// A subset of `others` that, together with `fixed`, generates `g_k`.
/// An element is central once it commutes with a generating set.
fn generating_subset(st: &Structure<PrimeField>, fixed: &[usize], others: &[usize]) -> Vec<usize> {
    let n = st.dim();
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = fixed.to_vec();
    let mut rank = closure_rank(st, &current);
    for &c in others {
        if rank == n {
            break;
        }
        current.push(c);
        let r = closure_rank(st, &current);
        if r > rank {
            chosen.push(c);
            rank = r;
        } else {
            current.pop();
        }
    }
    if rank < n {
        return others.to_vec();
    }
    let mut k = 0;
    while k < chosen.len() {
        let mut trial: Vec<usize> = fixed.to_vec();
        trial.extend(chosen.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &c)| c));
        if closure_rank(st, &trial) == n {
            chosen.remove(k);
        } else {
            k += 1;
        }
    }
    chosen
}

/// Reduced symmetrizations of characteristic-zero invariants.
#[derive(Debug, Clone)]
pub struct HcGenerators {
    pub sources: Vec<SymPoly<Rational>>,
    pub gens: Vec<PbwElement<u64>>,
    pub degrees: Vec<u32>,
}

impl HcGenerators {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Leading forms in `Sym(g_k)`.
    pub fn leading_forms(&self) -> Vec<SymPoly<u64>> {
        self.gens.iter().map(LinComb::leading_form).collect()
    }
}

/// `g_i = symmetrize(f_i) mod p`, each checked to be central in `U(g_k)`.
pub fn hc_generators(ctx: &PrimeContext, f_list: &[SymPoly<Rational>]) -> Result<HcGenerators> {
    let env_q = Envelope::from_algebra(&ctx.alg, &Rationals)?;
    let mut gens = Vec::with_capacity(f_list.len());
    for (i, f) in f_list.iter().enumerate() {
        let g = reduce_element(&env_q.symmetrize(f), &ctx.field)?;
        if g.is_zero() || !ctx.env.is_central(&g) {
            return Err(Error::NotCentralModP(i));
        }
        gens.push(g);
    }
    let degrees = f_list.iter().map(|f| f.degree().unwrap_or(0)).collect();
    Ok(HcGenerators { sources: f_list.to_vec(), gens, degrees })
}

/// Products `Π gens[k]^{e_k}` over exponent vectors with weighted degree
/// `≤ max` and optional caps, in enumeration order.
fn central_products(
    env: &Envelope<PrimeField>,
    gens: &[&PbwElement<u64>],
    weights: &[u32],
    caps: &[Option<u32>],
    max: u32,
) -> Vec<(Vec<u32>, PbwElement<u64>)> {
    let exps = weighted_exponents(weights, caps, max);
    let mut powers: Vec<Vec<PbwElement<u64>>> = gens.iter().map(|_| vec![env.one()]).collect();
    let mut out = Vec::with_capacity(exps.len());
    for e in exps {
        let mut prod = env.one();
        for (k, &ek) in e.iter().enumerate() {
            while powers[k].len() <= ek as usize {
                let next = env.mul(powers[k].last().expect("nonempty"), gens[k]);
                powers[k].push(next);
            }
            if ek > 0 {
                prod = env.mul(&prod, &powers[k][ek as usize]);
            }
        }
        out.push((e, prod));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VeldkampVerdict {
    pub holds_in_window: bool,
    pub spanning_defect: Vec<String>,
    pub independence_ok: bool,
    /// `(center window dimension, candidate span dimension)`.
    pub dims: (usize, usize),
    pub candidates: usize,
    pub degree: u32,
    pub notes: Vec<String>,
}

impl VeldkampVerdict {
    pub fn verdict(&self) -> Verdict {
        if self.holds_in_window {
            Verdict::Pass
        } else if let Some(w) = self.spanning_defect.first() {
            Verdict::fail(w.clone())
        } else {
            Verdict::fail("candidate products are linearly dependent")
        }
    }
}

/// Freeness over the p-center in the window: the products `ξ^β g^α`,
/// `α_i < p`, must be independent and span the window center.
pub fn veldkamp_check(ctx: &PrimeContext, hc: &HcGenerators, window: &CenterWindow) -> VeldkampVerdict {
    let p = ctx.p() as u32;
    let dim = ctx.alg.dim();
    let gens: Vec<&PbwElement<u64>> = ctx.p_center.iter().chain(&hc.gens).collect();
    let mut weights = vec![p; dim];
    weights.extend(&hc.degrees);
    let mut caps = vec![None; dim];
    caps.extend(hc.degrees.iter().map(|_| Some(p)));
    let products = central_products(&ctx.env, &gens, &weights, &caps, window.degree);
    let mut space = EchelonSpace::<PrimeField, Desc>::new(ctx.field);
    let mut dependent = 0;
    for (k, (_, u)) in products.iter().enumerate() {
        if space.insert(u.to_sparse(), vec![(k, 1)]).is_some() {
            dependent += 1;
        }
    }
    let spanning_defect: Vec<String> = window
        .basis
        .iter()
        .filter(|b| !space.contains(b.to_sparse()))
        .map(|b| ctx.render(b))
        .collect();
    let mut notes = Vec::new();
    if hc.is_empty() {
        notes.push("no characteristic-zero invariants: Z_HC is the constants".into());
    }
    if dependent > 0 {
        notes.push(format!("{dependent} candidate products are dependent"));
    }
    VeldkampVerdict {
        holds_in_window: spanning_defect.is_empty() && dependent == 0,
        spanning_defect,
        independence_ok: dependent == 0,
        dims: (window.dimension(), space.rank()),
        candidates: products.len(),
        degree: window.degree,
        notes,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CiReport {
    pub verdict: Verdict,
    pub products: usize,
    pub independent: bool,
    pub leading_forms_outside: Vec<String>,
}

/// In `Sym(g_k)`: the products `m^p f̄^α` (`α_i < p`) are independent and
/// span the leading forms of the window center.
pub fn ci_presentation_check(ctx: &PrimeContext, hc: &HcGenerators, window: &CenterWindow) -> CiReport {
    let f = ctx.field;
    let dim = ctx.alg.dim();
    let p = ctx.p() as u32;
    let d = window.degree;
    let fbar = hc.leading_forms();
    let mut space = EchelonSpace::<PrimeField, Desc>::new(f);
    let mut count = 0;
    let mut dependent = 0;
    let caps: Vec<Option<u32>> = hc.degrees.iter().map(|_| Some(p)).collect();
    let alphas = weighted_exponents(&hc.degrees, &caps, d);
    for alpha in &alphas {
        let wa: u32 = alpha.iter().zip(&hc.degrees).map(|(a, b)| a * b).sum();
        let mut fa = LinComb::constant(&f, dim, 1);
        for (k, &ak) in alpha.iter().enumerate() {
            fa = sym::mul(&f, &fa, &sym::pow(&f, &fbar[k], ak, dim));
        }
        for e in 0..=(d - wa) / p {
            for m in crate::monomial::monomials_of_degree(dim, e) {
                let u = sym::mul(&f, &LinComb::monomial(&f, m.pow(p as u16), 1), &fa);
                count += 1;
                if space.insert(u.to_sparse(), Vec::new()).is_some() {
                    dependent += 1;
                }
            }
        }
    }
    let outside: Vec<String> = window
        .basis
        .iter()
        .map(LinComb::leading_form)
        .filter(|lf| !space.contains(lf.to_sparse()))
        .map(|lf| lf.render(&f, ctx.alg.labels()))
        .collect();
    let verdict = if ctx.alg.is_abelian() {
        Verdict::vacuous("abelian: every polynomial is invariant and the presentation degenerates")
    } else if !hc.is_empty() && hc.degrees.iter().sum::<u32>() > d {
        Verdict::vacuous(format!("no product with every α_i ≥ 1 fits in degree {d}"))
    } else if dependent > 0 {
        Verdict::fail(format!("{dependent} products m^p·f^α are dependent"))
    } else if let Some(w) = outside.first() {
        Verdict::fail(format!("leading form {w} outside the span"))
    } else {
        Verdict::Pass
    };
    CiReport { verdict, products: count, independent: dependent == 0, leading_forms_outside: outside }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionReport {
    pub verdict: Verdict,
    pub zp_dim: usize,
    pub hc_dim: usize,
    pub intersection: Vec<String>,
    pub expected_intersection_dim: usize,
    pub leading_forms_in_frobenius_image: bool,
    pub product_span_dim: usize,
    pub expected_product_dim: usize,
}

/// Window shadows of `Z_p ∩ Z_HC` and of the decomposition
/// `Z = Z_p ⊗_{Z_p ∩ Z_HC} Z_HC`.
///
/// Checks that the intersection has the size of `k[f^p]` in the window with
/// leading forms in `k[f̄^p]`, and that the products `ξ^β g^α` over all `α`
/// span exactly as much as the free basis with `α_i < p` predicts.
pub fn intersection_and_fiber_product_check(ctx: &PrimeContext, hc: &HcGenerators, d: u32) -> IntersectionReport {
    let f = ctx.field;
    let dim = ctx.alg.dim();
    let p = ctx.p() as u32;
    let pc: Vec<&PbwElement<u64>> = ctx.p_center.iter().collect();
    let hg: Vec<&PbwElement<u64>> = hc.gens.iter().collect();
    let zp = central_products(&ctx.env, &pc, &vec![p; dim], &vec![None; dim], d);
    let hcs = central_products(&ctx.env, &hg, &hc.degrees, &vec![None; hc.len()], d);

    let mut joint = EchelonSpace::<PrimeField, Desc>::new(f);
    let mut zp_dim = 0;
    for (k, (_, u)) in zp.iter().enumerate() {
        if joint.insert(u.to_sparse(), vec![(k, 1)]).is_none() {
            zp_dim += 1;
        }
    }
    let mut hc_space = EchelonSpace::<PrimeField, Desc>::new(f);
    let mut inter = Vec::new();
    for (k, (_, u)) in hcs.iter().enumerate() {
        hc_space.insert(u.to_sparse(), Vec::new());
        if let Some(rel) = joint.insert(u.to_sparse(), vec![(zp.len() + k, 1)]) {
            let mut elt = LinComb::zero();
            for (t, c) in rel {
                if t < zp.len() {
                    elt.add_scaled(&f, &c, &zp[t].1);
                }
            }
            if !elt.is_zero() {
                inter.push(elt);
            }
        }
    }
    let hc_dim = hc_space.rank();
    let inter_basis: Vec<PbwElement<u64>> = crate::scalar::linalg::rref(&f, inter.iter().map(LinComb::to_sparse))
        .into_iter()
        .rev()
        .map(|v| LinComb::from_sparse(&f, v))
        .collect();

    // k[f̄^p] in Sym, homogeneous pieces up to d.
    let fbar = hc.leading_forms();
    let pdeg: Vec<u32> = hc.degrees.iter().map(|x| x * p).collect();
    let mut frob = EchelonSpace::<PrimeField, Desc>::new(f);
    let gammas = weighted_exponents(&pdeg, &vec![None; hc.len()], d);
    for gamma in &gammas {
        let mut u = LinComb::constant(&f, dim, 1);
        for (k, &gk) in gamma.iter().enumerate() {
            u = sym::mul(&f, &u, &sym::pow(&f, &fbar[k], gk * p, dim));
        }
        frob.insert(u.to_sparse(), Vec::new());
    }
    let lf_ok = inter_basis.iter().all(|b| frob.contains(b.leading_form().to_sparse()));

    let mut weights = vec![p; dim];
    weights.extend(&hc.degrees);
    let gens: Vec<&PbwElement<u64>> = pc.iter().copied().chain(hg.iter().copied()).collect();
    let all = central_products(&ctx.env, &gens, &weights, &vec![None; weights.len()], d);
    let mut prod_space = EchelonSpace::<PrimeField, Desc>::new(f);
    for (_, u) in &all {
        prod_space.insert(u.to_sparse(), Vec::new());
    }
    let mut caps = vec![None; dim];
    caps.extend(hc.degrees.iter().map(|_| Some(p)));
    let expected_product_dim = weighted_exponents(&weights, &caps, d).len();

    let verdict = if inter_basis.len() != gammas.len() {
        Verdict::fail(format!(
            "intersection window has dimension {}, k[f^p] predicts {}",
            inter_basis.len(),
            gammas.len()
        ))
    } else if !lf_ok {
        Verdict::fail("an intersection leading form is outside k[f^p]")
    } else if prod_space.rank() != expected_product_dim {
        Verdict::fail(format!(
            "product span has dimension {}, the free basis predicts {}",
            prod_space.rank(),
            expected_product_dim
        ))
    } else if hc.is_empty() {
        Verdict::vacuous("no characteristic-zero invariants")
    } else if d < p * hc.degrees.iter().min().copied().unwrap_or(0) {
        Verdict::vacuous(format!("no f^p fits in degree {d}"))
    } else {
        Verdict::Pass
    };
    IntersectionReport {
        verdict,
        zp_dim,
        hc_dim,
        intersection: inter_basis.iter().map(|b| ctx.render(b)).collect(),
        expected_intersection_dim: gammas.len(),
        leading_forms_in_frobenius_image: lf_ok,
        product_span_dim: prod_space.rank(),
        expected_product_dim,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub n: u64,
    pub m: u64,
    pub p: u64,
    pub a: Option<u64>,
    pub b: Option<u64>,
    pub witness: Option<String>,
    pub degree: Option<u32>,
    pub central: bool,
    pub outside_span: bool,
    pub verdict: Verdict,
}

/// Builds `x^a y^{p−b}` in the algebra `[z,x] = nx, [z,y] = my` with the
/// smallest `a, b ≥ 1` such that `na = bm`, and certifies it is central but
/// not in the span of `Z_p · Z_HC` within its own degree.
pub fn counterexample_check(n: u32, m: u32, p: u64) -> Result<CounterexampleReport> {
    let field = PrimeField::new(p)?;
    let (n64, m64) = (u64::from(n), u64::from(m));
    if n64 % p == 0 || m64 % p == 0 {
        return Err(Error::InvalidSpec(format!("p = {p} must be coprime to n = {n} and m = {m}")));
    }
    let alg = LieAlgebra::remark_solvable(n, m)?;
    let g = num_integer::gcd(n64, m64);
    let (a, b) = (m64 / g, n64 / g);
    let mut report = CounterexampleReport {
        n: n64,
        m: m64,
        p,
        a: None,
        b: None,
        witness: None,
        degree: None,
        central: false,
        outside_span: false,
        verdict: Verdict::vacuous(format!("smallest solution a = {a}, b = {b} is not below p = {p}")),
    };
    if a >= p || b >= p {
        return Ok(report);
    }
    let ctx = PrimeContext::new(&alg, p)?;
    let exps = [a as u16, (p - b) as u16, 0];
    let w = LinComb::monomial(&field, Monomial::from_exponents(&exps), 1);
    let d = w.degree().expect("nonzero");
    let f_list = sym::invariant_generators(&alg, d)?;
    let hc = hc_generators(&ctx, &f_list)?;
    let central = ctx.env.is_central(&w);
    let gens: Vec<&PbwElement<u64>> = ctx.p_center.iter().chain(&hc.gens).collect();
    let mut weights = vec![p as u32; alg.dim()];
    weights.extend(&hc.degrees);
    let caps = vec![None; weights.len()];
    let mut space = EchelonSpace::<PrimeField, Desc>::new(field);
    for (_, u) in central_products(&ctx.env, &gens, &weights, &caps, d) {
        space.insert(u.to_sparse(), Vec::new());
    }
    let outside = !space.contains(w.to_sparse());
    report.a = Some(a);
    report.b = Some(b);
    report.witness = Some(ctx.render(&w));
    report.degree = Some(d);
    report.central = central;
    report.outside_span = outside;
    report.verdict = if central && outside {
        Verdict::Pass
    } else if !central {
        Verdict::fail(format!("{} is not central", ctx.render(&w)))
    } else {
        Verdict::fail(format!("{} lies in the Z_p·Z_HC span", ctx.render(&w)))
    };
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct KwProxy {
    pub generators: usize,
    pub index: usize,
    pub verdict: Verdict,
}

/// Number of invariant generators against the index.
pub fn kw_proxy_check(alg: &LieAlgebra, f_list: &[SymPoly<Rational>]) -> KwProxy {
    let index = alg.index();
    let verdict = if f_list.len() == index {
        Verdict::Pass
    } else {
        Verdict::fail(format!("{} generators, index {index}", f_list.len()))
    };
    KwProxy { generators: f_list.len(), index, verdict }
}

/// Re-checks every window basis element against every generator.
pub fn window_is_central(env: &Envelope<PrimeField>, window: &CenterWindow) -> bool {
    window.basis.par_iter().all(|b| env.is_central(b))
}

/// Whether the leading form of `g` is `f mod p`, up to a nonzero scalar.
pub fn leading_form_matches(field: &PrimeField, g: &PbwElement<u64>, f: &SymPoly<Rational>) -> bool {
    match f.try_map_ring(field, |c| field.from_rational(c)) {
        Ok(fp) => g.leading_form().monic(field) == fp.monic(field),
        Err(_) => false,
    }
}
