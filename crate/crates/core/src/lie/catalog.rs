//! Constructors for the example families.
//!
//! Every constructor ships a faithful matrix representation, which is where
//! the restricted structure comes from.

use num_bigint::BigInt;
use num_traits::Zero;

use super::LieAlgebra;
use crate::error::{Error, Result};
use crate::scalar::linalg::{dense_to_sparse, Matrix};
use crate::scalar::{Rational, Rationals};

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn unit(n: usize, r: usize, c: usize) -> Matrix<Rational> {
    let mut m = Matrix::zeros(&Rationals, n, n);
    m.set(r, c, int(1));
    m
}

fn kron(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Matrix<Rational> {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = Matrix::zeros(&Rationals, ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out.set(i * br + k, j * bc + l, x * b.get(k, l));
                }
            }
        }
    }
    out
}

impl LieAlgebra {
    /// Lie algebra spanned by linearly independent matrices closed under the
    /// commutator. Structure constants are solved for exactly.
    pub fn from_matrix_basis(
        name: impl Into<String>,
        labels: Vec<String>,
        mats: Vec<Matrix<Rational>>,
    ) -> Result<Self> {
        let q = Rationals;
        if labels.len() != mats.len() {
            return Err(Error::InvalidSpec("one label per matrix required".into()));
        }
        let (space, independent) = super::matrix_span(&q, &mats);
        if !independent {
            return Err(Error::InvalidSpec("matrices are linearly dependent".into()));
        }
        let mut brackets = Vec::new();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                let c = mats[i].commutator(&q, &mats[j]);
                let (res, coords) = space.reduce(dense_to_sparse(&q, c.entries()));
                if !res.is_empty() {
                    return Err(Error::InvalidSpec(format!("[{}, {}] leaves the span", labels[i], labels[j])));
                }
                if !coords.is_empty() {
                    brackets.push((i, j, coords));
                }
            }
        }
        Self::new(name, labels, brackets, Some(mats))
    }

    /// The abelian algebra `k^n`, represented by commuting nilpotent matrices
    /// `E_{0,i}` (so its restricted structure is zero).
    pub fn abelian(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("abelian(0)".into()));
        }
        let labels = (1..=n).map(|i| format!("x{i}")).collect();
        let mats = (1..=n).map(|i| unit(n + 1, 0, i)).collect();
        Self::from_matrix_basis(format!("abelian({n})"), labels, mats)
    }

    /// The Heisenberg algebra `[x, y] = z` as strictly upper triangular 3×3
    /// matrices.
    pub fn heisenberg() -> Self {
        let labels = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        Self::from_matrix_basis("heisenberg", labels, vec![unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)])
            .expect("heisenberg is well formed")
    }

    /// `sl_n` in the basis: `E_ij` (i < j), then `h_i = E_ii - E_{i+1,i+1}`,
    /// then `E_ij` (i > j). For `n = 2` the labels are `e, h, f`.
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec("sl(n) needs n >= 2".into()));
        }
        let mut labels = Vec::new();
        let mut mats = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                labels.push(if n == 2 { "e".into() } else { format!("e{}{}", i + 1, j + 1) });
                mats.push(unit(n, i, j));
            }
        }
        for i in 0..n - 1 {
            labels.push(if n == 2 { "h".into() } else { format!("h{}", i + 1) });
            let mut h = unit(n, i, i);
            h.set(i + 1, i + 1, int(-1));
            mats.push(h);
        }
        for i in 0..n {
            for j in 0..i {
                labels.push(if n == 2 { "f".into() } else { format!("f{}{}", i + 1, j + 1) });
                mats.push(unit(n, i, j));
            }
        }
        Self::from_matrix_basis(format!("sl({n})"), labels, mats)
    }

    /// The 3-dimensional solvable algebra `[z, x] = n x`, `[z, y] = m y`,
    /// `[x, y] = 0`, basis order `x, y, z`.
    pub fn remark_solvable(n: u32, m: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidSpec("remark_solvable needs positive n, m".into()));
        }
        let mut z = Matrix::zeros(&Rationals, 3, 3);
        z.set(0, 0, int(n as i64));
        z.set(1, 1, int(m as i64));
        let labels = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        Self::from_matrix_basis(format!("remark_solvable({n},{m})"), labels, vec![unit(3, 0, 2), unit(3, 1, 2), z])
    }

    /// Truncated multicurrent algebra `g ⊗ k[t_1..t_r]/(t_1^{m_1}, ..., t_r^{m_r})`.
    ///
    /// Basis: `x ⊗ t^a` for `a` in graded order (`a = 0` first), base basis
    /// inner. With a base representation `ρ`, uses `ρ(x) ⊗ T^a` where `T_i`
    /// is the nilpotent shift on `k[t_i]/(t_i^{m_i})`.
    pub fn takiff(base: &LieAlgebra, truncation: &[u32]) -> Result<Self> {
        if truncation.is_empty() || truncation.contains(&0) {
            return Err(Error::InvalidSpec("takiff truncation orders must be positive".into()));
        }
        let mut exps: Vec<Vec<u32>> = vec![vec![]];
        for &m in truncation {
            exps = exps.into_iter().flat_map(|e| (0..m).map(move |a| [e.clone(), vec![a]].concat())).collect();
        }
        exps.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
        let suffix = |a: &[u32]| -> String {
            if a.iter().all(|&x| x == 0) {
                return String::new();
            }
            if a.len() == 1 {
                return if a[0] == 1 { "_t".into() } else { format!("_t{}", a[0]) };
            }
            let mut s = String::from("_");
            for (i, &x) in a.iter().enumerate() {
                for _ in 0..x {
                    s.push_str(&format!("t{}", i + 1));
                }
            }
            s
        };
        let bdim = base.dim();
        let index_of = |a: &[u32]| exps.iter().position(|e| e.as_slice() == a);
        let mut labels = Vec::new();
        for a in &exps {
            for l in base.labels() {
                labels.push(format!("{l}{}", suffix(a)));
            }
        }
        let mut brackets = Vec::new();
        for (ai, a) in exps.iter().enumerate() {
            for (bi, b) in exps.iter().enumerate() {
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let Some(ci) = (sum.iter().zip(truncation).all(|(s, m)| s < m)).then(|| index_of(&sum)).flatten() else {
                    continue;
                };
                for i in 0..bdim {
                    for j in 0..bdim {
                        let (u, v) = (ai * bdim + i, bi * bdim + j);
                        if u >= v {
                            continue;
                        }
                        let terms: Vec<_> = base.bracket(i, j).into_iter().map(|(k, c)| (ci * bdim + k, c)).collect();
                        if !terms.is_empty() {
                            brackets.push((u, v, terms));
                        }
                    }
                }
            }
        }
        let rep = base.matrix_rep().map(|rep| {
            let shifts: Vec<Matrix<Rational>> = truncation
                .iter()
                .map(|&m| {
                    let m = m as usize;
                    let mut s = Matrix::zeros(&Rationals, m, m);
                    for i in 0..m.saturating_sub(1) {
                        s.set(i + 1, i, int(1));
                    }
                    s
                })
                .collect();
            let mut mats = Vec::new();
            for a in &exps {
                let mut t = Matrix::identity(&Rationals, 1);
                for (s, &ai) in shifts.iter().zip(a) {
                    t = kron(&t, &s.pow(&Rationals, ai as u64));
                }
                for r in rep {
                    mats.push(kron(r, &t));
                }
            }
            mats
        });
        let ms: Vec<String> = truncation.iter().map(u32::to_string).collect();
        Self::new(format!("takiff({},[{}])", base.name(), ms.join(",")), labels, brackets, rep)
    }

    /// `g ⋉ V` for the module given by `module` (defaults to the base's own
    /// matrix representation). The new basis is `g` followed by `v1..vm`.
    pub fn semidirect(base: &LieAlgebra, module: Option<&[Matrix<Rational>]>) -> Result<Self> {
        let q = Rationals;
        let module = match module {
            Some(m) => m,
            None => base
                .matrix_rep()
                .ok_or_else(|| Error::InvalidSpec("semidirect needs a module or a base representation".into()))?,
        };
        if module.len() != base.dim() {
            return Err(Error::InvalidSpec("one module matrix per base element required".into()));
        }
        let m = module[0].rows();
        let n = m + 1;
        let mut mats = Vec::new();
        for rho in module {
            let mut b = Matrix::zeros(&q, n, n);
            for r in 0..m {
                for c in 0..m {
                    b.set(r, c, rho.get(r, c).clone());
                }
            }
            mats.push(b);
        }
        for j in 0..m {
            mats.push(unit(n, j, m));
        }
        let mut labels = base.labels().to_vec();
        labels.extend((1..=m).map(|j| format!("v{j}")));
        let alg = Self::from_matrix_basis(format!("semidirect({})", base.name()), labels, mats)?;
        // The module must make the bracket restricted to g agree with the base.
        for i in 0..base.dim() {
            for j in i + 1..base.dim() {
                if alg.bracket(i, j) != base.bracket(i, j) {
                    return Err(Error::InvalidSpec("module matrices do not define a representation".into()));
                }
            }
        }
        Ok(alg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remark_solvable_brackets() {
        let g = LieAlgebra::remark_solvable(1, 1).unwrap();
        assert_eq!(g.dim(), 3);
        // [z, x] = x, [z, y] = y
        assert_eq!(g.bracket(2, 0), vec![(0, int(1))]);
        assert_eq!(g.bracket(2, 1), vec![(1, int(1))]);
        assert!(g.bracket(0, 1).is_empty());
        let g = LieAlgebra::remark_solvable(2, 3).unwrap();
        assert_eq!(g.bracket(2, 1), vec![(1, int(3))]);
    }

    #[test]
    fn sl2_relations() {
        let g = LieAlgebra::sl(2).unwrap();
        assert_eq!(g.labels(), &["e", "h", "f"]);
        assert_eq!(g.bracket(1, 0), vec![(0, int(2))]);
        assert_eq!(g.bracket(1, 2), vec![(2, int(-2))]);
        assert_eq!(g.bracket(0, 2), vec![(1, int(1))]);
        assert_eq!(LieAlgebra::sl(3).unwrap().dim(), 8);
    }

    #[test]
    fn takiff_shape() {
        let sl2 = LieAlgebra::sl(2).unwrap();
        let t = LieAlgebra::takiff(&sl2, &[2]).unwrap();
        assert_eq!(t.dim(), 6);
        assert_eq!(t.labels()[3], "e_t");
        // [e⊗t, f⊗t] = 0 since t^2 = 0; [e, f⊗t] = h⊗t
        assert!(t.bracket(3, 5).is_empty());
        assert_eq!(t.bracket(0, 5), vec![(4, int(1))]);
        let t3 = LieAlgebra::takiff(&sl2, &[3]).unwrap();
        assert_eq!(t3.dim(), 9);
        let t22 = LieAlgebra::takiff(&sl2, &[2, 2]).unwrap();
        assert_eq!(t22.dim(), 12);
    }

    #[test]
    fn semidirect_shape() {
        let sl2 = LieAlgebra::sl(2).unwrap();
        let s = LieAlgebra::semidirect(&sl2, None).unwrap();
        assert_eq!(s.dim(), 5);
        assert!(s.bracket(3, 4).is_empty());
        // e·v2 = v1 in the standard representation
        assert_eq!(s.bracket(0, 4), vec![(3, int(1))]);
    }

    #[test]
    fn dependent_matrices_rejected() {
        let m = unit(2, 0, 1);
        let r = LieAlgebra::from_matrix_basis("dup", vec!["a".into(), "b".into()], vec![m.clone(), m]);
        assert!(matches!(r, Err(Error::InvalidSpec(_))));
    }
}
