//! The symmetric algebra `Sym(g)`: commutative polynomials in the basis
//! variables, the derivations induced by `ad`, invariants, semi-invariants
//! and the Kirillov–Kostant bracket.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, Structure};
use crate::monomial::{monomials_of_degree, weighted_exponents, Desc, LinComb, Monomial};
use crate::scalar::linalg::{kernel_basis, rank, solve_in_span, sparse_kernel, EchelonSpace, Matrix, SparseVec};
use crate::scalar::{Field, Rational, Rationals, Ring};

/// Element of `Sym(g)`; the key is the exponent vector.
pub type SymPoly<E> = LinComb<E>;

/// A character `λ`, as its values on the basis.
pub type Weight = Vec<Rational>;

pub fn var<R: Ring>(ring: &R, dim: usize, i: usize) -> SymPoly<R::Elem> {
    LinComb::monomial(ring, Monomial::var(dim, i), ring.one())
}

pub fn mul<R: Ring>(ring: &R, a: &SymPoly<R::Elem>, b: &SymPoly<R::Elem>) -> SymPoly<R::Elem> {
    let mut out = LinComb::zero();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            out.add_term(ring, ma.mul(mb), ring.mul(ca, cb));
        }
    }
    out
}

pub fn pow<R: Ring>(ring: &R, a: &SymPoly<R::Elem>, e: u32, dim: usize) -> SymPoly<R::Elem> {
    let mut acc = LinComb::constant(ring, dim, ring.one());
    for _ in 0..e {
        acc = mul(ring, &acc, a);
    }
    acc
}

/// `∂f/∂x_k`.
pub fn partial<R: Ring>(ring: &R, f: &SymPoly<R::Elem>, k: usize) -> SymPoly<R::Elem> {
    let mut out = LinComb::zero();
    for (m, c) in f.terms() {
        let e = m.exp(k);
        if e > 0 {
            out.add_term(ring, m.with_dec(k), ring.mul(c, &ring.from_i64(e as i64)));
        }
    }
    out
}

pub fn evaluate<R: Ring>(ring: &R, f: &SymPoly<R::Elem>, point: &[R::Elem]) -> R::Elem {
    let mut acc = ring.zero();
    for (m, c) in f.terms() {
        let mut t = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t = ring.mul(&t, &ring.pow(&point[i], e as u64));
            }
        }
        acc = ring.add(&acc, &t);
    }
    acc
}

/// `x_i · f`: the derivation of `Sym(g)` extending `x_j ↦ [x_i, x_j]`.
pub fn ad_action<R: Ring>(st: &Structure<R>, i: usize, f: &SymPoly<R::Elem>) -> SymPoly<R::Elem> {
    let r = st.ring();
    let mut out = LinComb::zero();
    for (m, c) in f.terms() {
        for (j, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let rest = m.with_dec(j);
            let ce = r.mul(c, &r.from_i64(e as i64));
            for (k, ck) in st.bracket(i, j) {
                out.add_term(r, rest.with_inc(*k), r.mul(&ce, ck));
            }
        }
    }
    out
}

/// Action of a general element `a = Σ a_i x_i`.
pub fn ad_action_vec<R: Ring>(st: &Structure<R>, a: &[R::Elem], f: &SymPoly<R::Elem>) -> SymPoly<R::Elem> {
    let r = st.ring();
    let mut out = LinComb::zero();
    for (i, ai) in a.iter().enumerate() {
        if !r.is_zero(ai) {
            out.add_scaled(r, ai, &ad_action(st, i, f));
        }
    }
    out
}

/// Kirillov–Kostant bracket `{f, g} = Σ ∂_i f ∂_j g [x_i, x_j]`.
pub fn kk_bracket<R: Ring>(st: &Structure<R>, f: &SymPoly<R::Elem>, g: &SymPoly<R::Elem>) -> SymPoly<R::Elem> {
    let r = st.ring();
    let dim = st.dim();
    let df: Vec<_> = (0..dim).map(|i| partial(r, f, i)).collect();
    let dg: Vec<_> = (0..dim).map(|j| partial(r, g, j)).collect();
    let mut out = LinComb::zero();
    for i in 0..dim {
        if df[i].is_zero() {
            continue;
        }
        for j in 0..dim {
            if dg[j].is_zero() || st.bracket(i, j).is_empty() {
                continue;
            }
            let prod = mul(r, &df[i], &dg[j]);
            for (k, c) in st.bracket(i, j) {
                out.add_scaled(r, c, &mul(r, &prod, &var(r, dim, *k)));
            }
        }
    }
    out
}

/// Bases of homogeneous pieces, indexed by degree.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedBasis<E> {
    pub by_degree: Vec<Vec<SymPoly<E>>>,
}

impl<E> GradedBasis<E> {
    pub fn max_degree(&self) -> u32 {
        self.by_degree.len().saturating_sub(1) as u32
    }

    /// Dimensions in degrees `1..=max_degree`.
    pub fn dims(&self) -> Vec<usize> {
        self.by_degree.iter().skip(1).map(Vec::len).collect()
    }
}

/// Joint kernel of the derivations of the `actors` on degree-`d` polynomials,
/// as monic polynomials sorted by leading monomial.
fn joint_kernel<F: Field>(st: &Structure<F>, actors: &[Vec<F::Elem>], d: u32) -> Vec<SymPoly<F::Elem>> {
    let f = st.ring();
    let mut monos = monomials_of_degree(st.dim(), d);
    // Descending, so that kernel pivots are leading monomials.
    monos.reverse();
    let columns: Vec<SparseVec<(usize, Monomial), F::Elem>> = monos
        .iter()
        .map(|m| {
            let single = LinComb::monomial(f, m.clone(), f.one());
            let mut col = Vec::new();
            for (a, v) in actors.iter().enumerate() {
                for (mm, c) in ad_action_vec(st, v, &single).into_terms() {
                    col.push(((a, mm), c));
                }
            }
            col
        })
        .collect();
    let mut out: Vec<SymPoly<F::Elem>> = sparse_kernel(f, columns)
        .into_iter()
        .map(|v| LinComb::from_terms(f, v.into_iter().map(|(i, c)| (monos[i].clone(), c))))
        .collect();
    out.reverse();
    out
}

fn unit_vectors<R: Ring>(ring: &R, dim: usize) -> Vec<Vec<R::Elem>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect()
}

/// Invariants `Sym(g)^g` in degrees `0..=d_max`.
pub fn invariants_up_to_degree<F: Field>(st: &Structure<F>, d_max: u32) -> GradedBasis<F::Elem> {
    let actors = unit_vectors(st.ring(), st.dim());
    let by_degree = (0..=d_max).into_par_iter().map(|d| joint_kernel(st, &actors, d)).collect();
    GradedBasis { by_degree }
}

/// Greedy minimal generating set, degree by degree: an invariant is kept when
/// it is not in the span of products of lower-degree keepers.
pub fn polynomial_generator_extraction<F: Field>(
    field: &F,
    graded: &GradedBasis<F::Elem>,
) -> Result<Vec<SymPoly<F::Elem>>> {
    let mut keepers: Vec<SymPoly<F::Elem>> = Vec::new();
    let mut degrees: Vec<u32> = Vec::new();
    for (d, basis) in graded.by_degree.iter().enumerate().skip(1) {
        let d = d as u32;
        let mut space = EchelonSpace::<F, Desc>::new(field.clone());
        let caps = vec![None; keepers.len()];
        for e in weighted_exponents(&degrees, &caps, d) {
            let w: u32 = e.iter().zip(&degrees).map(|(a, b)| a * b).sum();
            if w != d {
                continue;
            }
            let mut prod: Option<SymPoly<F::Elem>> = None;
            for (k, &ek) in e.iter().enumerate() {
                for _ in 0..ek {
                    prod = Some(match prod {
                        None => keepers[k].clone(),
                        Some(p) => mul(field, &p, &keepers[k]),
                    });
                }
            }
            let prod = prod.expect("positive degree");
            space.insert(prod.to_sparse(), Vec::new());
        }
        for b in basis {
            if b.terms().keys().any(|m| m.degree() != d) {
                return Err(Error::GenerationUndetermined(format!(
                    "degree-{d} basis element is not homogeneous"
                )));
            }
            if space.insert(b.to_sparse(), Vec::new()).is_none() {
                keepers.push(b.clone());
                degrees.push(d);
            }
        }
    }
    Ok(keepers)
}

/// Scales a rational polynomial to coprime integer coefficients with a
/// positive leading coefficient.
pub fn primitive(f: &SymPoly<Rational>) -> SymPoly<Rational> {
    if f.is_zero() {
        return f.clone();
    }
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for c in f.terms().values() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    let mut s = Rational::new(den, num);
    if f.leading_coeff().expect("nonzero").is_negative() {
        s = -s;
    }
    f.scale(&Rationals, &s)
}

/// Invariant generators over ℚ up to degree `d_max`, scaled to primitive
/// integer form.
pub fn invariant_generators(alg: &LieAlgebra, d_max: u32) -> Result<Vec<SymPoly<Rational>>> {
    let st = alg.structure(&Rationals)?;
    let graded = invariants_up_to_degree(&st, d_max);
    Ok(polynomial_generator_extraction(&Rationals, &graded)?.iter().map(primitive).collect())
}

/// A joint eigenspace of weight `weight` in one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiInvariantSpace {
    pub degree: u32,
    pub weight: Weight,
    pub basis: Vec<SymPoly<Rational>>,
}

impl SemiInvariantSpace {
    pub fn is_nontrivial(&self) -> bool {
        self.weight.iter().any(|c| !c.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiInvariants {
    pub spaces: Vec<SemiInvariantSpace>,
    /// `(degree, dimension)` of `[g,g]`-invariants whose eigenvalues were
    /// not found among the rational candidates.
    pub unresolved: Vec<(u32, usize)>,
}

impl SemiInvariants {
    pub fn nontrivial(&self) -> impl Iterator<Item = &SemiInvariantSpace> {
        self.spaces.iter().filter(|s| s.is_nontrivial())
    }

    pub fn has_nontrivial(&self) -> bool {
        self.nontrivial().next().is_some()
    }
}

/// Characteristic polynomial coefficients `c_0..c_n` (monic), by
/// Faddeev–LeVerrier.
fn char_poly(a: &Matrix<Rational>) -> Vec<Rational> {
    let q = Rationals;
    let n = a.rows();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = Matrix::zeros(&q, n, n);
    let id = Matrix::identity(&q, n);
    for k in 1..=n {
        m = a.mul(&q, &m).add(&q, &id.scale(&q, &c[n - k + 1]));
        let am = a.mul(&q, &m);
        let tr = (0..n).fold(Rational::zero(), |acc, i| acc + am.get(i, i));
        c[n - k] = -tr / Rational::from_integer(BigInt::from(k));
    }
    c
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

/// Rational roots of a polynomial given by coefficients `c_0..c_n`, or `None`
/// if the rational root search is out of reach.
fn rational_roots(c: &[Rational]) -> Option<Vec<Rational>> {
    let mut den = BigInt::one();
    for x in c {
        den = den.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = c.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots = Vec::new();
    if ints.iter().all(Zero::is_zero) {
        return Some(roots);
    }
    if ints[0].is_zero() {
        roots.push(Rational::zero());
        while ints[0].is_zero() {
            ints.remove(0);
        }
    }
    const LIMIT: u64 = 1 << 40;
    let a0 = ints[0].abs().to_u64().filter(|&v| v < LIMIT)?;
    let an = ints.last().expect("nonzero").abs().to_u64().filter(|&v| v < LIMIT)?;
    let eval = |x: &Rational| {
        ints.iter().rev().fold(Rational::zero(), |acc, k| acc * x + Rational::from_integer(k.clone()))
    };
    let mut seen = std::collections::BTreeSet::new();
    for d in divisors(a0) {
        for e in divisors(an) {
            for s in [1i64, -1] {
                let x = Rational::new(BigInt::from(s) * BigInt::from(d), BigInt::from(e));
                if seen.insert(x.clone()) && eval(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

/// Semi-invariants up to degree `d_max` over ℚ.
///
/// In each degree the `[g,g]`-invariants are split into joint eigenspaces of
/// a complement of `[g,g]`. Candidate eigenvalues are sums of `d` rational
/// eigenvalues of the complement's adjoint action; whatever does not split
/// this way is reported as unresolved.
pub fn semi_invariants(alg: &LieAlgebra, d_max: u32) -> Result<SemiInvariants> {
    let q = Rationals;
    let st = alg.structure(&q)?;
    let dim = alg.dim();
    let derived = st.derived_subalgebra();

    // Complement of [g,g] spanned by basis vectors, chosen greedily.
    let mut span = EchelonSpace::<Rationals, usize>::new(q);
    for v in &derived {
        span.insert(crate::scalar::linalg::dense_to_sparse(&q, v), Vec::new());
    }
    let units = unit_vectors(&q, dim);
    let mut complement = Vec::new();
    for (i, u) in units.iter().enumerate() {
        if span.insert(crate::scalar::linalg::dense_to_sparse(&q, u), Vec::new()).is_none() {
            complement.push(i);
        }
    }
    // Coordinates of each basis vector over complement ∪ derived, used to
    // extend a weight from the complement to the whole basis.
    let mut mixed: Vec<Vec<Rational>> = complement.iter().map(|&i| units[i].clone()).collect();
    mixed.extend(derived.iter().cloned());
    let coords: Vec<Vec<Rational>> = units
        .iter()
        .map(|u| solve_in_span(&q, &mixed, u).expect("complement and derived span g"))
        .collect();

    // Rational eigenvalues of ad on g for each complement element.
    let mut base_eigs: Vec<Vec<Rational>> = Vec::new();
    for &t in &complement {
        let mut eigs = rational_roots(&char_poly(&st.ad_matrix(t))).unwrap_or_default();
        if !eigs.contains(&Rational::zero()) {
            eigs.push(Rational::zero());
        }
        base_eigs.push(eigs);
    }

    let mut spaces = Vec::new();
    let mut unresolved = Vec::new();
    for d in 1..=d_max {
        let v = joint_kernel(&st, &derived, d);
        if v.is_empty() {
            continue;
        }
        let n = v.len();
        let mut vspace = EchelonSpace::<Rationals, Desc>::new(q);
        for (k, b) in v.iter().enumerate() {
            vspace.insert(b.to_sparse(), vec![(k, Rational::one())]);
        }
        let actions: Vec<Matrix<Rational>> = complement
            .iter()
            .map(|&t| {
                let mut m = Matrix::zeros(&q, n, n);
                for (k, b) in v.iter().enumerate() {
                    let (res, combo) = vspace.reduce(ad_action(&st, t, b).to_sparse());
                    debug_assert!(res.is_empty(), "[g,g]-invariants are g-stable");
                    for (r, c) in combo {
                        m.set(r, k, c);
                    }
                }
                m
            })
            .collect();
        let mut current: Vec<(Vec<Rational>, Matrix<Rational>)> = vec![(Vec::new(), Matrix::identity(&q, n))];
        let mut missed = 0;
        for (ti, a) in actions.iter().enumerate() {
            let mut sums = vec![Rational::zero()];
            for _ in 0..d {
                let mut next: Vec<Rational> =
                    sums.iter().flat_map(|s| base_eigs[ti].iter().map(move |e| s + e)).collect();
                next.sort();
                next.dedup();
                sums = next;
            }
            // Generalized eigenspaces not covered by the candidates.
            let covered: usize = sums
                .iter()
                .map(|l| {
                    let shifted = a.sub(&q, &Matrix::identity(&q, n).scale(&q, l));
                    n - rank(&q, &shifted.pow(&q, n as u64))
                })
                .sum();
            missed = missed.max(n - covered);
            let mut split = Vec::new();
            for (w, basis) in &current {
                for lambda in &sums {
                    let shifted = a.sub(&q, &Matrix::identity(&q, n).scale(&q, lambda));
                    let ker = kernel_basis(&q, &shifted.mul(&q, basis));
                    if ker.is_empty() {
                        continue;
                    }
                    let kcols = Matrix::from_rows(ker).transpose();
                    let mut w2 = w.clone();
                    w2.push(lambda.clone());
                    split.push((w2, basis.mul(&q, &kcols)));
                }
            }
            current = split;
        }
        for (w, basis) in current {
            let polys: Vec<SymPoly<Rational>> = (0..basis.cols())
                .map(|c| {
                    let mut p = LinComb::zero();
                    for (r, b) in v.iter().enumerate() {
                        p.add_scaled(&q, basis.get(r, c), b);
                    }
                    p
                })
                .collect();
            let basis = crate::scalar::linalg::rref(&q, polys.iter().map(LinComb::to_sparse))
                .into_iter()
                .map(|s| primitive(&LinComb::from_sparse(&q, s)))
                .rev()
                .collect::<Vec<_>>();
            let weight: Weight = coords
                .iter()
                .map(|c| c.iter().zip(&w).fold(Rational::zero(), |acc, (a, l)| acc + a * l))
                .collect();
            spaces.push(SemiInvariantSpace { degree: d, weight, basis });
        }
        if missed > 0 {
            unresolved.push((d, missed));
        }
    }
    Ok(SemiInvariants { spaces, unresolved })
}

/// Checks `ad_action` annihilates every listed polynomial.
pub fn all_invariant<R: Ring>(st: &Structure<R>, polys: &[SymPoly<R::Elem>]) -> bool {
    polys.iter().all(|f| (0..st.dim()).all(|i| ad_action(st, i, f).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PrimeField;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn poly(dim: usize, terms: &[(&[u16], i64)]) -> SymPoly<Rational> {
        LinComb::from_terms(&Rationals, terms.iter().map(|(e, c)| {
            assert_eq!(e.len(), dim);
            (Monomial::from_exponents(e), q(*c))
        }))
    }

    fn casimir() -> SymPoly<Rational> {
        poly(3, &[(&[1, 0, 1], 4), (&[0, 2, 0], 1)])
    }

    #[test]
    fn ad_action_examples() {
        let sl2 = LieAlgebra::sl(2).unwrap().structure(&Rationals).unwrap();
        let (e, h, f) = (var(&Rationals, 3, 0), var(&Rationals, 3, 1), var(&Rationals, 3, 2));
        assert_eq!(ad_action(&sl2, 0, &f), h);
        assert_eq!(ad_action(&sl2, 0, &h), e.scale(&Rationals, &q(-2)));
        assert!(ad_action(&sl2, 0, &casimir()).is_zero());

        let heis = LieAlgebra::heisenberg().structure(&Rationals).unwrap();
        assert_eq!(ad_action(&heis, 0, &var(&Rationals, 3, 1)), var(&Rationals, 3, 2));
        assert!(ad_action(&heis, 0, &var(&Rationals, 3, 2)).is_zero());
    }

    #[test]
    fn invariants_examples() {
        let sl2 = LieAlgebra::sl(2).unwrap().structure(&Rationals).unwrap();
        let g = invariants_up_to_degree(&sl2, 2);
        assert_eq!(g.dims(), vec![0, 1]);
        assert_eq!(primitive(&g.by_degree[2][0]), casimir());

        let heis = LieAlgebra::heisenberg().structure(&Rationals).unwrap();
        let g = invariants_up_to_degree(&heis, 3);
        assert_eq!(g.dims(), vec![1, 1, 1]);
        for d in 1..=3u16 {
            assert_eq!(g.by_degree[d as usize][0], poly(3, &[(&[0, 0, d], 1)]));
        }

        let ab = LieAlgebra::abelian(2).unwrap().structure(&Rationals).unwrap();
        assert_eq!(invariants_up_to_degree(&ab, 1).dims(), vec![2]);
    }

    #[test]
    fn extraction_examples() {
        let gens = invariant_generators(&LieAlgebra::heisenberg(), 3).unwrap();
        assert_eq!(gens, vec![poly(3, &[(&[0, 0, 1], 1)])]);
        let gens = invariant_generators(&LieAlgebra::sl(2).unwrap(), 4).unwrap();
        assert_eq!(gens, vec![casimir()]);
        let gens = invariant_generators(&LieAlgebra::abelian(2).unwrap(), 2).unwrap();
        assert_eq!(gens.len(), 2);
        assert!(gens.iter().all(|g| g.degree() == Some(1)));
    }

    #[test]
    fn takiff_and_sl3_generators() {
        let sl2 = LieAlgebra::sl(2).unwrap();
        let t = LieAlgebra::takiff(&sl2, &[2]).unwrap();
        let gens = invariant_generators(&t, 4).unwrap();
        assert_eq!(gens.iter().map(|g| g.degree().unwrap()).collect::<Vec<_>>(), vec![2, 2]);
        let gens = invariant_generators(&LieAlgebra::sl(3).unwrap(), 3).unwrap();
        assert_eq!(gens.iter().map(|g| g.degree().unwrap()).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn non_homogeneous_input_is_flagged() {
        let bad = GradedBasis { by_degree: vec![vec![], vec![poly(1, &[(&[1], 1), (&[0], 1)])]] };
        assert!(matches!(
            polynomial_generator_extraction(&Rationals, &bad),
            Err(Error::GenerationUndetermined(_))
        ));
    }

    #[test]
    fn semi_invariant_examples() {
        let r = semi_invariants(&LieAlgebra::remark_solvable(1, 1).unwrap(), 1).unwrap();
        let nt: Vec<_> = r.nontrivial().collect();
        assert_eq!(nt.len(), 1);
        assert_eq!(nt[0].weight, vec![q(0), q(0), q(1)]);
        assert_eq!(nt[0].basis, vec![poly(3, &[(&[0, 1, 0], 1)]), poly(3, &[(&[1, 0, 0], 1)])]);

        let h = semi_invariants(&LieAlgebra::heisenberg(), 3).unwrap();
        assert!(!h.has_nontrivial());
        assert!(h.unresolved.is_empty());

        let s = semi_invariants(&LieAlgebra::sl(2).unwrap(), 2).unwrap();
        assert!(!s.has_nontrivial());
        assert_eq!(s.spaces.len(), 1);
        assert_eq!(s.spaces[0].basis, vec![casimir()]);
    }

    #[test]
    fn remark_weights_differ_by_family() {
        let r = semi_invariants(&LieAlgebra::remark_solvable(1, 2).unwrap(), 2).unwrap();
        let weights: Vec<_> = r.nontrivial().map(|s| (s.degree, s.weight[2].clone())).collect();
        assert!(weights.contains(&(1, q(1))));
        assert!(weights.contains(&(1, q(2))));
        assert!(weights.contains(&(2, q(3))));
    }

    #[test]
    fn kk_examples() {
        let heis = LieAlgebra::heisenberg().structure(&Rationals).unwrap();
        let (x, y, z) = (var(&Rationals, 3, 0), var(&Rationals, 3, 1), var(&Rationals, 3, 2));
        assert_eq!(kk_bracket(&heis, &x, &y), z);
        let sl2 = LieAlgebra::sl(2).unwrap().structure(&Rationals).unwrap();
        for i in 0..3 {
            assert!(kk_bracket(&sl2, &casimir(), &var(&Rationals, 3, i)).is_zero());
        }
    }

    #[test]
    fn perfect_algebra_semi_invariants_are_invariants() {
        let alg = LieAlgebra::semidirect(&LieAlgebra::sl(2).unwrap(), None).unwrap();
        let st = alg.structure(&Rationals).unwrap();
        let inv = invariants_up_to_degree(&st, 3);
        let s = semi_invariants(&alg, 3).unwrap();
        assert!(!s.has_nontrivial());
        for d in 1..=3u32 {
            let here: Vec<_> = s.spaces.iter().filter(|sp| sp.degree == d).flat_map(|sp| sp.basis.clone()).collect();
            let inv_d: Vec<_> = inv.by_degree[d as usize].iter().map(primitive).collect();
            assert_eq!(here.len(), inv_d.len());
            let span = crate::scalar::linalg::rref(&Rationals, inv_d.iter().map(LinComb::to_sparse));
            let span2 = crate::scalar::linalg::rref(&Rationals, here.iter().map(LinComb::to_sparse));
            assert_eq!(span, span2);
        }
    }

    #[test]
    fn flat_dimensions_at_large_primes() {
        let sl2 = LieAlgebra::sl(2).unwrap();
        let algs = [
            LieAlgebra::heisenberg(),
            sl2.clone(),
            LieAlgebra::takiff(&sl2, &[2]).unwrap(),
            LieAlgebra::semidirect(&sl2, None).unwrap(),
            LieAlgebra::abelian(3).unwrap(),
        ];
        for alg in &algs {
            let over_q = invariants_up_to_degree(&alg.structure(&Rationals).unwrap(), 4).dims();
            for p in [11u64, 13] {
                let f = PrimeField::new(p).unwrap();
                let over_p = invariants_up_to_degree(&alg.structure(&f).unwrap(), 4).dims();
                assert_eq!(over_q, over_p, "{} at p = {p}", alg.name());
            }
        }
    }

    fn small_poly(seed: &[i64]) -> SymPoly<Rational> {
        let monos = crate::monomial::monomials_up_to_degree(3, 2);
        LinComb::from_terms(&Rationals, seed.iter().enumerate().map(|(i, c)| (monos[i % monos.len()].clone(), q(*c))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn kk_is_a_lie_bracket(a in proptest::collection::vec(-3i64..4, 1..5),
                               b in proptest::collection::vec(-3i64..4, 1..5),
                               c in proptest::collection::vec(-3i64..4, 1..5)) {
            let st = LieAlgebra::sl(2).unwrap().structure(&Rationals).unwrap();
            let r = &Rationals;
            let (f, g, h) = (small_poly(&a), small_poly(&b), small_poly(&c));
            prop_assert!(kk_bracket(&st, &f, &f).is_zero());
            prop_assert_eq!(kk_bracket(&st, &f, &g), kk_bracket(&st, &g, &f).neg(r));
            // Leibniz in the second slot.
            let lhs = kk_bracket(&st, &f, &mul(r, &g, &h));
            let rhs = mul(r, &kk_bracket(&st, &f, &g), &h).add(r, &mul(r, &g, &kk_bracket(&st, &f, &h)));
            prop_assert_eq!(lhs, rhs);
            let jac = kk_bracket(&st, &f, &kk_bracket(&st, &g, &h))
                .add(r, &kk_bracket(&st, &g, &kk_bracket(&st, &h, &f)))
                .add(r, &kk_bracket(&st, &h, &kk_bracket(&st, &f, &g)));
            prop_assert!(jac.is_zero());
        }
    }

    #[test]
    fn returned_invariants_are_invariant() {
        let alg = LieAlgebra::takiff(&LieAlgebra::sl(2).unwrap(), &[2]).unwrap();
        let st = alg.structure(&Rationals).unwrap();
        let g = invariants_up_to_degree(&st, 4);
        for b in &g.by_degree {
            assert!(all_invariant(&st, b));
        }
    }
}
