//! Finite-dimensional Lie algebras given by structure constants over ℚ.

mod catalog;
mod pmap;

pub use pmap::{compute_pmap, PMap, PMapSource};

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::linalg::{kernel_basis, rank, rref, EchelonSpace, Matrix};
use crate::scalar::{Field, PrimeField, Rational, Rationals, Ring};

/// Sparse bracket value `[x_i, x_j] = Σ c_k x_k`.
pub type BracketTerms = Vec<(usize, Rational)>;

/// A Lie algebra over ℚ in a fixed ordered basis.
///
/// Only brackets `[x_i, x_j]` with `i < j` are stored. An optional faithful
/// matrix representation is carried along; restricted structures are read off
/// from it.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), BracketTerms>,
    matrix_rep: Option<Vec<Matrix<Rational>>>,
}

impl LieAlgebra {
    /// Builds and validates an algebra. `brackets` lists `(i, j, terms)` with
    /// `i != j`; a pair given as `(j, i)` is stored with the sign flipped.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: Vec<(usize, usize, BracketTerms)>,
        matrix_rep: Option<Vec<Matrix<Rational>>>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        let mut table: BTreeMap<(usize, usize), BracketTerms> = BTreeMap::new();
        for (i, j, terms) in brackets {
            if i >= dim || j >= dim {
                return Err(Error::InvalidSpec(format!("bracket index ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::InvalidSpec(format!("bracket [x_{i}, x_{i}] must not be given")));
            }
            let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
            if table.contains_key(&(a, b)) {
                return Err(Error::InvalidSpec(format!("bracket ({a}, {b}) given twice")));
            }
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, c) in terms {
                if k >= dim {
                    return Err(Error::InvalidSpec(format!("bracket term index {k} out of range")));
                }
                let c = if sign < 0 { -c } else { c };
                *acc.entry(k).or_insert_with(Rational::zero) += c;
            }
            let terms: BracketTerms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !terms.is_empty() {
                table.insert((a, b), terms);
            }
        }
        if let Some(rep) = &matrix_rep {
            if rep.len() != dim {
                return Err(Error::InvalidSpec(format!(
                    "matrix_rep has {} matrices for dimension {dim}",
                    rep.len()
                )));
            }
            let n = rep[0].rows();
            if rep.iter().any(|m| m.rows() != n || m.cols() != n) {
                return Err(Error::InvalidSpec("matrix_rep matrices must be square of equal size".into()));
            }
        }
        let alg = Self { name: name.into(), labels, brackets: table, matrix_rep };
        alg.validate()?;
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix_rep(&self) -> Option<&[Matrix<Rational>]> {
        self.matrix_rep.as_deref()
    }

    pub fn without_rep(mut self) -> Self {
        self.matrix_rep = None;
        self
    }

    /// Stored brackets with `i < j`.
    pub fn brackets(&self) -> &BTreeMap<(usize, usize), BracketTerms> {
        &self.brackets
    }

    pub fn bracket(&self, i: usize, j: usize) -> BracketTerms {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Vec::new(),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self
                .brackets
                .get(&(j, i))
                .map(|t| t.iter().map(|(k, c)| (*k, -c)).collect())
                .unwrap_or_default(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Structure constants mapped into `ring`.
    pub fn structure<R: Ring>(&self, ring: &R) -> Result<Structure<R>> {
        let dim = self.dim();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for (&(i, j), terms) in &self.brackets {
            let mut pos = Vec::with_capacity(terms.len());
            let mut neg = Vec::with_capacity(terms.len());
            for (k, c) in terms {
                let v = ring.from_rational(c)?;
                if !ring.is_zero(&v) {
                    neg.push((*k, ring.neg(&v)));
                    pos.push((*k, v));
                }
            }
            table[i][j] = pos;
            table[j][i] = neg;
        }
        Ok(Structure { ring: ring.clone(), dim, table })
    }

    /// Checks the Jacobi identity on all basis triples and, when present,
    /// compatibility of the matrix representation with the bracket.
    pub fn validate(&self) -> Result<()> {
        let q = Rationals;
        let st = self.structure(&q)?;
        let dim = self.dim();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let mut acc = vec![q.zero(); dim];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (l, c1) in st.bracket(b, c) {
                            for (m, c2) in st.bracket(a, *l) {
                                acc[*m] += c1 * c2;
                            }
                        }
                    }
                    if acc.iter().any(|c| !c.is_zero()) {
                        return Err(Error::JacobiViolation(i, j, k));
                    }
                }
            }
        }
        if let Some(rep) = &self.matrix_rep {
            let n = rep[0].rows();
            for i in 0..dim {
                for j in i + 1..dim {
                    let lhs = rep[i].commutator(&q, &rep[j]);
                    let mut rhs = Matrix::zeros(&q, n, n);
                    for (k, c) in st.bracket(i, j) {
                        rhs = rhs.add(&q, &rep[*k].scale(&q, c));
                    }
                    if lhs != rhs {
                        return Err(Error::RepIncompatible(i, j));
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis of the center `Z(g)` over ℚ.
    pub fn center_of(&self) -> Vec<Vec<Rational>> {
        let st = self.structure(&Rationals).expect("rational structure constants");
        st.center()
    }

    /// Index of `g`: `dim g` minus the generic rank of `([x_i, x_j](ξ))`.
    ///
    /// The generic rank is the maximum rank over 8 random evaluation points
    /// in `F_q`, `q = 2^31 - 1`. Seeded, so the result is deterministic.
    pub fn index(&self) -> usize {
        const Q: u64 = 2_147_483_647;
        const TRIALS: usize = 8;
        let f = PrimeField::new(Q).expect("Mersenne prime");
        let dim = self.dim();
        let st = match self.structure(&f) {
            Ok(st) => st,
            // A denominator divisible by 2^31 - 1: fall back to exact evaluation.
            Err(_) => return self.index_over(&Rationals, TRIALS),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x1de5 ^ dim as u64);
        let mut best = 0;
        for _ in 0..TRIALS {
            let xi: Vec<u64> = (0..dim).map(|_| rng.random_range(0..Q)).collect();
            best = best.max(rank(&f, &st.evaluated_bracket_matrix(&xi)));
        }
        dim - best
    }

    fn index_over(&self, q: &Rationals, trials: usize) -> usize {
        let st = self.structure(q).expect("rational structure constants");
        let dim = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x1de5 ^ dim as u64);
        let mut best = 0;
        for _ in 0..trials {
            let xi: Vec<Rational> = (0..dim).map(|_| q.from_i64(rng.random_range(-1000..1000))).collect();
            best = best.max(rank(q, &st.evaluated_bracket_matrix(&xi)));
        }
        dim - best
    }

    /// Same algebra with the basis reordered: new basis element `k` is old
    /// element `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let dim = self.dim();
        let mut inv = vec![usize::MAX; dim];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        if perm.len() != dim || inv.contains(&usize::MAX) {
            return Err(Error::InvalidSpec("not a permutation".into()));
        }
        let labels = perm.iter().map(|&o| self.labels[o].clone()).collect();
        let brackets = self
            .brackets
            .iter()
            .map(|(&(i, j), t)| (inv[i], inv[j], t.iter().map(|(k, c)| (inv[*k], c.clone())).collect()))
            .collect();
        let rep = self.matrix_rep.as_ref().map(|r| perm.iter().map(|&o| r[o].clone()).collect());
        Self::new(self.name.clone(), labels, brackets, rep)
    }
}

/// Structure constants of a Lie algebra mapped into a coefficient ring.
#[derive(Debug, Clone)]
pub struct Structure<R: Ring> {
    ring: R,
    dim: usize,
    table: Vec<Vec<Vec<(usize, R::Elem)>>>,
}

impl<R: Ring> Structure<R> {
    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `[x_i, x_j]` as sparse terms.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, R::Elem)] {
        &self.table[i][j]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket_vec(&self, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
        let r = &self.ring;
        let mut out = vec![r.zero(); self.dim];
        for i in 0..self.dim {
            if r.is_zero(&a[i]) {
                continue;
            }
            for j in 0..self.dim {
                if r.is_zero(&b[j]) {
                    continue;
                }
                let ab = r.mul(&a[i], &b[j]);
                for (k, c) in &self.table[i][j] {
                    out[*k] = r.add(&out[*k], &r.mul(&ab, c));
                }
            }
        }
        out
    }

    /// Matrix of `ad(x_i)`: column `j` holds the coordinates of `[x_i, x_j]`.
    pub fn ad_matrix(&self, i: usize) -> Matrix<R::Elem> {
        let r = &self.ring;
        let mut m = Matrix::zeros(r, self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in &self.table[i][j] {
                m.set(*k, j, c.clone());
            }
        }
        m
    }

    /// `ad(a) = Σ a_i ad(x_i)`.
    pub fn ad_of(&self, a: &[R::Elem]) -> Matrix<R::Elem> {
        let r = &self.ring;
        let mut m = Matrix::zeros(r, self.dim, self.dim);
        for (i, ai) in a.iter().enumerate() {
            if !r.is_zero(ai) {
                m = m.add(r, &self.ad_matrix(i).scale(r, ai));
            }
        }
        m
    }

    /// `M(ξ)_{ij} = Σ_k c_{ij}^k ξ_k`.
    pub fn evaluated_bracket_matrix(&self, xi: &[R::Elem]) -> Matrix<R::Elem> {
        let r = &self.ring;
        let mut m = Matrix::zeros(r, self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.table[i][j].iter().fold(r.zero(), |acc, (k, c)| r.add(&acc, &r.mul(c, &xi[*k])));
                m.set(i, j, v);
            }
        }
        m
    }

    /// Whether the given vector is a character: it vanishes on every bracket.
    /// Returns the first offending pair otherwise.
    pub fn character_violation(&self, chi: &[R::Elem]) -> Option<(usize, usize)> {
        let r = &self.ring;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.table[i][j].iter().fold(r.zero(), |acc, (k, c)| r.add(&acc, &r.mul(c, &chi[*k])));
                if !r.is_zero(&v) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl<F: Field> Structure<F> {
    /// Basis of the center: vectors `z` with `[z, x_j] = 0` for all `j`.
    pub fn center(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.ring;
        let mut m = Matrix::zeros(f, self.dim * self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in &self.table[i][j] {
                    m.set(j * self.dim + k, i, c.clone());
                }
            }
        }
        kernel_basis(f, &m)
    }

    /// Reduced echelon basis of the derived subalgebra `[g, g]`.
    pub fn derived_subalgebra(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.ring;
        let vecs = (0..self.dim).flat_map(|i| (i + 1..self.dim).map(move |j| (i, j))).map(|(i, j)| self.table[i][j].clone());
        rref(f, vecs)
            .into_iter()
            .map(|v| {
                let mut d = vec![f.zero(); self.dim];
                for (k, c) in v {
                    d[k] = c;
                }
                d
            })
            .collect()
    }

    /// Whether `ad(x_i)` is diagonal in the basis; returns the eigenvalues.
    pub fn diagonal_weights(&self, i: usize) -> Option<Vec<F::Elem>> {
        let f = &self.ring;
        let mut w = vec![f.zero(); self.dim];
        for (j, wj) in w.iter_mut().enumerate() {
            match self.table[i][j].as_slice() {
                [] => {}
                [(k, c)] if *k == j => *wj = c.clone(),
                _ => return None,
            }
        }
        Some(w)
    }

    /// Coordinates of `v` in the basis `basis` of a subspace, if it lies there.
    pub fn coordinates_in(&self, basis: &[Vec<F::Elem>], v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        crate::scalar::linalg::solve_in_span(&self.ring, basis, v)
    }
}

/// Builds an `EchelonSpace` of flattened matrices, tagged by index.
pub(crate) fn matrix_span<F: Field>(field: &F, mats: &[Matrix<F::Elem>]) -> (EchelonSpace<F, usize>, bool) {
    let mut space = EchelonSpace::new(field.clone());
    let mut independent = true;
    for (i, m) in mats.iter().enumerate() {
        let v = crate::scalar::linalg::dense_to_sparse(field, m.entries());
        if space.insert(v, vec![(i, field.one())]).is_some() {
            independent = false;
        }
    }
    (space, independent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn labels(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn validate_examples() {
        assert!(LieAlgebra::sl(2).unwrap().validate().is_ok());
        assert!(LieAlgebra::heisenberg().validate().is_ok());
        let bad = LieAlgebra::new(
            "bad",
            labels(&["e", "h", "f"]),
            vec![
                (1, 0, vec![(0, q(2))]),
                (1, 2, vec![(2, q(-2))]),
                (0, 2, vec![(1, q(1)), (0, q(1))]),
            ],
            None,
        );
        assert_eq!(bad.unwrap_err(), Error::JacobiViolation(0, 1, 2));
    }

    #[test]
    fn rep_incompatibility_is_reported() {
        let h = LieAlgebra::heisenberg();
        let mut rep = h.matrix_rep().unwrap().to_vec();
        rep.swap(0, 1);
        let err = LieAlgebra::new("h", h.labels().to_vec(), vec![(0, 1, vec![(2, q(1))])], Some(rep));
        assert!(matches!(err, Err(Error::RepIncompatible(_, _))));
    }

    #[test]
    fn index_examples() {
        assert_eq!(LieAlgebra::abelian(4).unwrap().index(), 4);
        assert_eq!(LieAlgebra::sl(2).unwrap().index(), 1);
        assert_eq!(LieAlgebra::heisenberg().index(), 1);
        assert_eq!(LieAlgebra::remark_solvable(1, 1).unwrap().index(), 1);
        assert_eq!(LieAlgebra::sl(3).unwrap().index(), 2);
    }

    #[test]
    fn index_is_permutation_invariant() {
        let t = LieAlgebra::takiff(&LieAlgebra::sl(2).unwrap(), &[2]).unwrap();
        let base = t.index();
        for perm in [[5, 4, 3, 2, 1, 0], [1, 3, 5, 0, 2, 4], [2, 0, 1, 5, 3, 4]] {
            assert_eq!(t.permuted(&perm).unwrap().index(), base);
        }
    }

    #[test]
    fn center_examples() {
        let z = LieAlgebra::heisenberg().center_of();
        assert_eq!(z, vec![vec![q(0), q(0), q(1)]]);
        assert!(LieAlgebra::sl(2).unwrap().center_of().is_empty());
        assert_eq!(LieAlgebra::abelian(2).unwrap().center_of().len(), 2);
    }
}
