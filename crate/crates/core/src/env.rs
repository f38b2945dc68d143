//! The enveloping algebra `U(g)` in the PBW basis of ordered monomials.
//!
//! Products are normal-ordered by straightening, `x_j x_k = x_k x_j +
//! [x_j, x_k]` for `j > k`. The two elementary operations, multiplying an
//! ordered monomial by one letter on the left or on the right, are memoized
//! per envelope; everything else is built from them.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, PMap, Structure};
use crate::monomial::{LinComb, Monomial};
use crate::scalar::{PrimeField, Rational, Rationals, Ring, ZModP2};
use crate::sym::SymPoly;

/// Element of `U(g)` in PBW normal form.
pub type PbwElement<E> = LinComb<E>;

type Terms<E> = Arc<Vec<(Monomial, E)>>;

/// `U(g)` over a coefficient ring, with its straightening memo.
pub struct Envelope<R: Ring> {
    st: Structure<R>,
    left: RwLock<HashMap<(usize, Monomial), Terms<R::Elem>>>,
    right: RwLock<HashMap<(Monomial, usize), Terms<R::Elem>>>,
}

impl<R: Ring> std::fmt::Debug for Envelope<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Envelope")
            .field("ring", self.st.ring())
            .field("dim", &self.st.dim())
            .field("memo", &self.memo_len())
            .finish()
    }
}

impl<R: Ring> Envelope<R> {
    pub fn new(st: Structure<R>) -> Self {
        Self { st, left: RwLock::new(HashMap::new()), right: RwLock::new(HashMap::new()) }
    }

    pub fn from_algebra(alg: &LieAlgebra, ring: &R) -> Result<Self> {
        Ok(Self::new(alg.structure(ring)?))
    }

    pub fn ring(&self) -> &R {
        self.st.ring()
    }

    pub fn dim(&self) -> usize {
        self.st.dim()
    }

    pub fn structure(&self) -> &Structure<R> {
        &self.st
    }

    /// Number of memoized letter products.
    pub fn memo_len(&self) -> usize {
        self.left.read().len() + self.right.read().len()
    }

    pub fn one(&self) -> PbwElement<R::Elem> {
        LinComb::constant(self.ring(), self.dim(), self.ring().one())
    }

    pub fn generator(&self, i: usize) -> PbwElement<R::Elem> {
        LinComb::monomial(self.ring(), Monomial::var(self.dim(), i), self.ring().one())
    }

    /// The degree-one element `Σ a_i x_i`.
    pub fn from_vector(&self, a: &[R::Elem]) -> PbwElement<R::Elem> {
        let r = self.ring();
        LinComb::from_terms(r, a.iter().enumerate().map(|(i, c)| (Monomial::var(self.dim(), i), c.clone())))
    }

    /// `x_j · m` in normal form.
    pub fn left_mul_var(&self, j: usize, m: &Monomial) -> Terms<R::Elem> {
        let r = self.ring();
        let k = match m.first_var() {
            Some(k) if k < j => k,
            _ => return Arc::new(vec![(m.with_inc(j), r.one())]),
        };
        let key = (j, m.clone());
        if let Some(v) = self.left.read().get(&key) {
            return v.clone();
        }
        let rest = m.with_dec(k);
        let mut acc = LinComb::zero();
        // x_j x_k rest = x_k (x_j rest) + [x_j, x_k] rest
        for (n, c) in self.left_mul_var(j, &rest).iter() {
            for (n2, c2) in self.left_mul_var(k, n).iter() {
                acc.add_term(r, n2.clone(), r.mul(c, c2));
            }
        }
        for (l, c) in self.st.bracket(j, k) {
            for (n2, c2) in self.left_mul_var(*l, &rest).iter() {
                acc.add_term(r, n2.clone(), r.mul(c, c2));
            }
        }
        let v: Terms<R::Elem> = Arc::new(acc.into_terms().into_iter().collect());
        self.left.write().entry(key).or_insert(v).clone()
    }

    /// `m · x_j` in normal form.
    pub fn right_mul_var(&self, m: &Monomial, j: usize) -> Terms<R::Elem> {
        let r = self.ring();
        let l = match m.last_var() {
            Some(l) if l > j => l,
            _ => return Arc::new(vec![(m.with_inc(j), r.one())]),
        };
        let key = (m.clone(), j);
        if let Some(v) = self.right.read().get(&key) {
            return v.clone();
        }
        let rest = m.with_dec(l);
        let mut acc = LinComb::zero();
        // rest x_l x_j = (rest x_j) x_l + rest [x_l, x_j]
        for (n, c) in self.right_mul_var(&rest, j).iter() {
            for (n2, c2) in self.right_mul_var(n, l).iter() {
                acc.add_term(r, n2.clone(), r.mul(c, c2));
            }
        }
        for (t, c) in self.st.bracket(l, j) {
            for (n2, c2) in self.right_mul_var(&rest, *t).iter() {
                acc.add_term(r, n2.clone(), r.mul(c, c2));
            }
        }
        let v: Terms<R::Elem> = Arc::new(acc.into_terms().into_iter().collect());
        self.right.write().entry(key).or_insert(v).clone()
    }

    pub fn left_mul_letter(&self, j: usize, u: &PbwElement<R::Elem>) -> PbwElement<R::Elem> {
        let r = self.ring();
        let mut out = LinComb::zero();
        for (m, c) in u.terms() {
            for (n, c2) in self.left_mul_var(j, m).iter() {
                out.add_term(r, n.clone(), r.mul(c, c2));
            }
        }
        out
    }

    pub fn right_mul_letter(&self, u: &PbwElement<R::Elem>, j: usize) -> PbwElement<R::Elem> {
        let r = self.ring();
        let mut out = LinComb::zero();
        for (m, c) in u.terms() {
            for (n, c2) in self.right_mul_var(m, j).iter() {
                out.add_term(r, n.clone(), r.mul(c, c2));
            }
        }
        out
    }

    /// Product in `U(g)`.
    pub fn mul(&self, u: &PbwElement<R::Elem>, v: &PbwElement<R::Elem>) -> PbwElement<R::Elem> {
        let r = self.ring();
        let mut out = LinComb::zero();
        for (mv, cv) in v.terms() {
            let mut cur = u.clone();
            for letter in mv.letters() {
                cur = self.right_mul_letter(&cur, letter);
            }
            out.add_scaled(r, cv, &cur);
        }
        out
    }

    pub fn pow(&self, u: &PbwElement<R::Elem>, e: u64) -> PbwElement<R::Elem> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, u);
        }
        acc
    }

    /// `[x_i, u] = x_i u − u x_i`.
    pub fn bracket_with_generator(&self, i: usize, u: &PbwElement<R::Elem>) -> PbwElement<R::Elem> {
        self.left_mul_letter(i, u).sub(self.ring(), &self.right_mul_letter(u, i))
    }

    pub fn commutator(&self, u: &PbwElement<R::Elem>, v: &PbwElement<R::Elem>) -> PbwElement<R::Elem> {
        self.mul(u, v).sub(self.ring(), &self.mul(v, u))
    }

    /// First generator that fails to commute with `u`.
    pub fn non_commuting_generator(&self, u: &PbwElement<R::Elem>) -> Option<usize> {
        (0..self.dim()).find(|&i| !self.bracket_with_generator(i, u).is_zero())
    }

    pub fn is_central(&self, u: &PbwElement<R::Elem>) -> bool {
        self.non_commuting_generator(u).is_none()
    }
}

/// Rearrangements of `letters` (sorted ascending) without repetition.
fn distinct_permutations(mut letters: Vec<usize>) -> Vec<Vec<usize>> {
    letters.sort_unstable();
    let mut out = vec![letters.clone()];
    loop {
        // next_permutation
        let n = letters.len();
        let Some(i) = (1..n).rev().find(|&i| letters[i - 1] < letters[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| letters[j] > letters[i - 1]).expect("successor exists");
        letters.swap(i - 1, j);
        letters[i..].reverse();
        out.push(letters.clone());
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::from_integer(1.into()), |acc, k| acc * Rational::from_integer(k.into()))
}

impl Envelope<Rationals> {
    /// Symmetrization `Sym(g) → U(g)`: each monomial goes to the average of
    /// all orderings of its letters.
    pub fn symmetrize(&self, f: &SymPoly<Rational>) -> PbwElement<Rational> {
        let q = Rationals;
        let mut out = LinComb::zero();
        for (m, c) in f.terms() {
            let weight = m.exponents().iter().fold(factorial(0), |acc, &e| acc * factorial(e as u32))
                / factorial(m.degree());
            let coeff = c * weight;
            for word in distinct_permutations(m.letters()) {
                let mut cur = self.one();
                for letter in word {
                    cur = self.right_mul_letter(&cur, letter);
                }
                out.add_scaled(&q, &coeff, &cur);
            }
        }
        out
    }
}

/// Coefficient-wise reduction `ℚ → F_p`.
pub fn reduce_element(u: &PbwElement<Rational>, field: &PrimeField) -> Result<PbwElement<u64>> {
    u.try_map_ring(field, |c| field.from_rational(c))
}

/// Canonical lift `F_p → Z/p²` (representatives in `[0, p)`).
pub fn lift_element(u: &PbwElement<u64>, ring: &ZModP2) -> PbwElement<u64> {
    u.try_map_ring(ring, |c| Ok::<_, Error>(ring.lift(*c))).expect("infallible")
}

/// Reduction `Z/p² → F_p`.
pub fn reduce_lifted(u: &PbwElement<u64>, ring: &ZModP2) -> PbwElement<u64> {
    u.try_map_ring(&ring.residue_field(), |c| Ok::<_, Error>(ring.reduce(*c))).expect("infallible")
}

/// The p-center generators `ξ_i = x_i^p − x_i^[p]`, checked to be central.
pub fn p_center_generators(env: &Envelope<PrimeField>, pmap: &PMap) -> Result<Vec<PbwElement<u64>>> {
    let f = env.ring();
    let p = f.p();
    let mut gens = Vec::with_capacity(env.dim());
    for (i, img) in pmap.images().iter().enumerate() {
        let power = LinComb::monomial(f, Monomial::var_pow(env.dim(), i, p as u16), 1);
        let g = power.sub(f, &env.from_vector(img));
        if !env.is_central(&g) {
            return Err(Error::NotCentral(i));
        }
        gens.push(g);
    }
    Ok(gens)
}

/// `ξ(a) = a^p − a^[p]` for `a ∈ g_k`, computed directly in `U(g_k)`.
pub fn xi(env: &Envelope<PrimeField>, pmap: &PMap, a: &[u64]) -> Result<PbwElement<u64>> {
    let f = env.ring();
    let power = env.pow(&env.from_vector(a), f.p());
    Ok(power.sub(f, &env.from_vector(&pmap.apply(a)?)))
}

/// `Σ a_i^p ξ_i`, the p-semilinear extension from the basis.
pub fn xi_semilinear(field: &PrimeField, gens: &[PbwElement<u64>], a: &[u64]) -> PbwElement<u64> {
    let mut out = LinComb::zero();
    for (ai, g) in a.iter().zip(gens) {
        out.add_scaled(field, &field.pow(ai, field.p()), g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::compute_pmap;
    use crate::monomial::monomials_up_to_degree;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn elem(terms: &[(&[u16], i64, i64)]) -> PbwElement<Rational> {
        LinComb::from_terms(&Rationals, terms.iter().map(|(e, n, d)| (Monomial::from_exponents(e), q(*n, *d))))
    }

    fn env_q(alg: &LieAlgebra) -> Envelope<Rationals> {
        Envelope::from_algebra(alg, &Rationals).unwrap()
    }

    #[test]
    fn straightening_examples() {
        let h = env_q(&LieAlgebra::heisenberg());
        let (x, y) = (h.generator(0), h.generator(1));
        assert_eq!(h.mul(&y, &x), elem(&[(&[1, 1, 0], 1, 1), (&[0, 0, 1], -1, 1)]));
        let xy = elem(&[(&[1, 1, 0], 1, 1)]);
        assert_eq!(h.mul(&x, &xy), elem(&[(&[2, 1, 0], 1, 1)]));
        assert_eq!(h.mul(&xy, &x), elem(&[(&[2, 1, 0], 1, 1), (&[1, 0, 1], -1, 1)]));

        let s = env_q(&LieAlgebra::sl(2).unwrap());
        assert_eq!(s.mul(&s.generator(2), &s.generator(0)), elem(&[(&[1, 0, 1], 1, 1), (&[0, 1, 0], -1, 1)]));
    }

    #[test]
    fn bracket_examples() {
        let h = env_q(&LieAlgebra::heisenberg());
        assert_eq!(h.bracket_with_generator(0, &h.generator(1)), h.generator(2));

        let f3 = PrimeField::new(3).unwrap();
        let hp = Envelope::from_algebra(&LieAlgebra::heisenberg(), &f3).unwrap();
        let x3 = LinComb::monomial(&f3, Monomial::var_pow(3, 0, 3), 1);
        assert!(hp.bracket_with_generator(1, &x3).is_zero());

        let s = env_q(&LieAlgebra::sl(2).unwrap());
        let c = elem(&[(&[1, 0, 1], 4, 1), (&[0, 2, 0], 1, 1), (&[0, 1, 0], -2, 1)]);
        for i in 0..3 {
            assert!(s.bracket_with_generator(i, &c).is_zero());
        }
    }

    #[test]
    fn symmetrize_examples() {
        let h = env_q(&LieAlgebra::heisenberg());
        let xy = elem(&[(&[1, 1, 0], 1, 1)]);
        assert_eq!(h.symmetrize(&xy), elem(&[(&[1, 1, 0], 1, 1), (&[0, 0, 1], -1, 2)]));

        let s = env_q(&LieAlgebra::sl(2).unwrap());
        let h2 = elem(&[(&[0, 2, 0], 1, 1)]);
        assert_eq!(s.symmetrize(&h2), h2);
        let cas = elem(&[(&[1, 0, 1], 4, 1), (&[0, 2, 0], 1, 1)]);
        assert_eq!(s.symmetrize(&cas), elem(&[(&[1, 0, 1], 4, 1), (&[0, 2, 0], 1, 1), (&[0, 1, 0], -2, 1)]));
    }

    #[test]
    fn reduction_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let u = elem(&[(&[1, 1, 0], 1, 1), (&[0, 0, 1], -1, 2)]);
        let r = reduce_element(&u, &f5).unwrap();
        assert_eq!(r, LinComb::from_terms(&f5, [(Monomial::from_exponents(&[1, 1, 0]), 1), (Monomial::var(3, 2), 2)]));
        let z2 = ZModP2::new(5).unwrap();
        assert_eq!(reduce_lifted(&lift_element(&r, &z2), &z2), r);
        let f3 = PrimeField::new(3).unwrap();
        assert!(matches!(
            reduce_element(&elem(&[(&[0, 0, 1], 1, 3)]), &f3),
            Err(Error::DenominatorDivisibleByP { .. })
        ));
    }

    fn render(env: &Envelope<PrimeField>, u: &PbwElement<u64>, labels: &[String]) -> String {
        u.render(env.ring(), labels)
    }

    #[test]
    fn p_center_examples() {
        let cases: Vec<(LieAlgebra, u64, Vec<&str>)> = vec![
            (LieAlgebra::heisenberg(), 3, vec!["x^3", "y^3", "z^3"]),
            (LieAlgebra::sl(2).unwrap(), 5, vec!["e^5", "h^5 + 4*h", "f^5"]),
            (LieAlgebra::remark_solvable(1, 1).unwrap(), 5, vec!["x^5", "y^5", "z^5 + 4*z"]),
        ];
        for (alg, p, expect) in cases {
            let f = PrimeField::new(p).unwrap();
            let env = Envelope::from_algebra(&alg, &f).unwrap();
            let pm = compute_pmap(&alg, p).unwrap();
            let gens = p_center_generators(&env, &pm).unwrap();
            let got: Vec<String> = gens.iter().map(|g| render(&env, g, alg.labels())).collect();
            assert_eq!(got, expect, "{}", alg.name());
        }
    }

    #[test]
    fn alternative_restricted_structure_is_central() {
        // x^[3] = z is another valid p-map on the Heisenberg algebra.
        let alg = LieAlgebra::heisenberg().without_rep();
        let f = PrimeField::new(3).unwrap();
        let env = Envelope::from_algebra(&alg, &f).unwrap();
        let pm = PMap::from_images(&alg, 3, vec![vec![0, 0, 1], vec![0; 3], vec![0; 3]]).unwrap();
        let gens = p_center_generators(&env, &pm).unwrap();
        assert_eq!(gens[0].render(&f, alg.labels()), "x^3 + 2*z");
    }

    #[test]
    fn frobenius_additivity() {
        let sl2 = LieAlgebra::sl(2).unwrap();
        for (alg, p) in [(sl2.clone(), 5u64), (LieAlgebra::heisenberg(), 3), (LieAlgebra::takiff(&sl2, &[2]).unwrap(), 3)] {
            let f = PrimeField::new(p).unwrap();
            let env = Envelope::from_algebra(&alg, &f).unwrap();
            let pm = compute_pmap(&alg, p).unwrap();
            let gens = p_center_generators(&env, &pm).unwrap();
            let dim = alg.dim();
            for t in 0..4u64 {
                let a: Vec<u64> = (0..dim as u64).map(|i| (3 * i + t + 1) % p).collect();
                let b: Vec<u64> = (0..dim as u64).map(|i| (i * i + 2 * t) % p).collect();
                let s: Vec<u64> = a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect();
                let lhs = xi(&env, &pm, &s).unwrap();
                let rhs = xi(&env, &pm, &a).unwrap().add(&f, &xi(&env, &pm, &b).unwrap());
                assert_eq!(lhs, rhs);
                assert_eq!(xi(&env, &pm, &a).unwrap(), xi_semilinear(&f, &gens, &a));
            }
        }
    }

    fn pick<R: Ring>(ring: &R, dim: usize, deg: u32, seed: &[i64]) -> PbwElement<R::Elem> {
        let monos = monomials_up_to_degree(dim, deg);
        LinComb::from_terms(ring, seed.iter().enumerate().map(|(i, c)| {
            (monos[(i * 7 + (*c).unsigned_abs() as usize) % monos.len()].clone(), ring.from_i64(*c))
        }))
    }

    fn assoc_holds<R: Ring>(ring: &R, alg: &LieAlgebra, a: &[i64], b: &[i64], c: &[i64]) -> bool {
        let env = Envelope::from_algebra(alg, ring).unwrap();
        let (u, v, w) = (pick(ring, alg.dim(), 2, a), pick(ring, alg.dim(), 2, b), pick(ring, alg.dim(), 2, c));
        env.mul(&env.mul(&u, &v), &w) == env.mul(&u, &env.mul(&v, &w))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn associativity(a in proptest::collection::vec(-4i64..5, 1..4),
                         b in proptest::collection::vec(-4i64..5, 1..4),
                         c in proptest::collection::vec(-4i64..5, 1..4)) {
            let algs = [LieAlgebra::sl(2).unwrap(), LieAlgebra::heisenberg(), LieAlgebra::remark_solvable(1, 2).unwrap()];
            for alg in &algs {
                prop_assert!(assoc_holds(&Rationals, alg, &a, &b, &c));
                prop_assert!(assoc_holds(&PrimeField::new(5).unwrap(), alg, &a, &b, &c));
                prop_assert!(assoc_holds(&ZModP2::new(3).unwrap(), alg, &a, &b, &c));
            }
        }

        #[test]
        fn leading_forms_multiply(a in proptest::collection::vec(-4i64..5, 1..4),
                                  b in proptest::collection::vec(-4i64..5, 1..4)) {
            let f = PrimeField::new(7).unwrap();
            let alg = LieAlgebra::sl(3).unwrap();
            let env = Envelope::from_algebra(&alg, &f).unwrap();
            let (u, v) = (pick(&f, 8, 3, &a), pick(&f, 8, 3, &b));
            prop_assume!(!u.is_zero() && !v.is_zero());
            let uv = env.mul(&u, &v);
            prop_assert_eq!(uv.degree(), Some(u.degree().unwrap() + v.degree().unwrap()));
            let lf = crate::sym::mul(&f, &u.leading_form(), &v.leading_form());
            prop_assert_eq!(uv.leading_form(), lf);
        }

        #[test]
        fn symmetrize_is_equivariant(seed in proptest::collection::vec(-4i64..5, 1..5), i in 0usize..3) {
            let alg = LieAlgebra::sl(2).unwrap();
            let env = env_q(&alg);
            let f = pick(&Rationals, 3, 4, &seed);
            let lhs = env.symmetrize(&crate::sym::ad_action(env.structure(), i, &f));
            let rhs = env.bracket_with_generator(i, &env.symmetrize(&f));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn memo_is_shared_across_threads() {
        use rayon::prelude::*;
        let f = PrimeField::new(7).unwrap();
        let env = Envelope::from_algebra(&LieAlgebra::sl(3).unwrap(), &f).unwrap();
        let monos = monomials_up_to_degree(8, 3);
        let par: Vec<_> = monos.par_iter().map(|m| env.right_mul_var(m, 0)).collect();
        let fresh = Envelope::from_algebra(&LieAlgebra::sl(3).unwrap(), &f).unwrap();
        for (m, got) in monos.iter().zip(par) {
            assert_eq!(*got, *fresh.right_mul_var(m, 0));
        }
    }
}
