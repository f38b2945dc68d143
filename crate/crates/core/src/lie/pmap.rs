//! Restricted structure `x ↦ x^[p]` on the reduction `g_k = g ⊗ F_p`.

use super::{matrix_span, LieAlgebra, Structure};
use crate::error::{Error, Result};
use crate::scalar::linalg::{dense_to_sparse, EchelonSpace, Matrix};
use crate::scalar::{PrimeField, Ring};

/// Where a p-map came from; decides how it extends to general elements.
#[derive(Debug, Clone)]
pub enum PMapSource {
    /// p-th matrix powers in a faithful representation.
    Representation(Vec<Matrix<u64>>),
    /// Unique solution of `ad(y) = ad(x)^p` (trivial center).
    AdjointSolve,
    /// Supplied image table, validated against `ad(x^[p]) = ad(x)^p`.
    Override,
}

#[derive(Debug, Clone)]
pub struct PMap {
    field: PrimeField,
    images: Vec<Vec<u64>>,
    source: PMapSource,
    structure: Structure<PrimeField>,
    rep_span: Option<EchelonSpace<PrimeField, usize>>,
}

impl PMap {
    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// `images[i]` are the coordinates of `x_i^[p]`.
    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn source(&self) -> &PMapSource {
        &self.source
    }

    pub fn structure(&self) -> &Structure<PrimeField> {
        &self.structure
    }

    /// Validated image table supplied by the caller.
    pub fn from_images(alg: &LieAlgebra, p: u64, images: Vec<Vec<u64>>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let structure = alg.structure(&field)?;
        if images.len() != alg.dim() || images.iter().any(|v| v.len() != alg.dim() || v.iter().any(|&c| c >= p)) {
            return Err(Error::InvalidSpec("p-map table must be dim × dim with entries in [0, p)".into()));
        }
        let pm = Self { field, images, source: PMapSource::Override, structure, rep_span: None };
        pm.verify()?;
        Ok(pm)
    }

    /// Checks `ad(x_i^[p]) = ad(x_i)^p` for every basis element.
    pub fn verify(&self) -> Result<()> {
        let f = &self.field;
        for (i, img) in self.images.iter().enumerate() {
            let lhs = self.structure.ad_of(img);
            let rhs = self.structure.ad_matrix(i).pow(f, f.p());
            if lhs != rhs {
                return Err(Error::InvalidPMap(i));
            }
        }
        Ok(())
    }

    /// `a^[p]` for a general element `a ∈ g_k`.
    pub fn apply(&self, a: &[u64]) -> Result<Vec<u64>> {
        let f = &self.field;
        match (&self.source, &self.rep_span) {
            (PMapSource::Representation(rep), Some(span)) => {
                let n = rep[0].rows();
                let mut m = Matrix::zeros(f, n, n);
                for (ai, r) in a.iter().zip(rep) {
                    if *ai != 0 {
                        m = m.add(f, &r.scale(f, ai));
                    }
                }
                let power = m.pow(f, f.p());
                expand(f, span, &power, a.len()).ok_or(Error::PMapNotExtendable)
            }
            (PMapSource::AdjointSolve, _) => {
                let target = self.structure.ad_of(a).pow(f, f.p());
                solve_adjoint(&self.structure, &target).ok_or(Error::PMapNotExtendable)
            }
            _ => Err(Error::PMapNotExtendable),
        }
    }

    /// Whether [`PMap::apply`] works for every element.
    pub fn is_extendable(&self) -> bool {
        !matches!(self.source, PMapSource::Override)
    }
}

fn expand(f: &PrimeField, span: &EchelonSpace<PrimeField, usize>, m: &Matrix<u64>, dim: usize) -> Option<Vec<u64>> {
    let (res, coords) = span.reduce(dense_to_sparse(f, m.entries()));
    if !res.is_empty() {
        return None;
    }
    let mut out = vec![0; dim];
    for (i, c) in coords {
        out[i] = c;
    }
    Some(out)
}

fn solve_adjoint(st: &Structure<PrimeField>, target: &Matrix<u64>) -> Option<Vec<u64>> {
    let f = st.ring();
    let ads: Vec<Matrix<u64>> = (0..st.dim()).map(|i| st.ad_matrix(i)).collect();
    let (span, _) = matrix_span(f, &ads);
    expand(f, &span, target, st.dim())
}

/// Restricted structure of `g_k`.
///
/// With a matrix representation, `x_i^[p]` is `ρ(x_i)^p` expanded in the
/// basis. Without one, `ad(y) = ad(x_i)^p` is solved, which is only allowed
/// when the center of `g_k` is trivial.
pub fn compute_pmap(alg: &LieAlgebra, p: u64) -> Result<PMap> {
    let field = PrimeField::new(p)?;
    let structure = alg.structure(&field)?;
    let dim = alg.dim();
    if let Some(rep) = alg.matrix_rep() {
        let rep: Vec<Matrix<u64>> = rep
            .iter()
            .map(|m| m.try_map(|c| field.from_rational(c)))
            .collect::<Result<_>>()?;
        let (span, independent) = matrix_span(&field, &rep);
        if !independent {
            return Err(Error::RepDegenerateModP);
        }
        let mut images = Vec::with_capacity(dim);
        for (i, r) in rep.iter().enumerate() {
            let power = r.pow(&field, p);
            images.push(expand(&field, &span, &power, dim).ok_or(Error::RepNotClosed(i))?);
        }
        let pm = PMap { field, images, source: PMapSource::Representation(rep), structure, rep_span: Some(span) };
        pm.verify()?;
        return Ok(pm);
    }
    if !structure.center().is_empty() {
        return Err(Error::AmbiguousPMap);
    }
    let mut images = Vec::with_capacity(dim);
    for i in 0..dim {
        let target = structure.ad_matrix(i).pow(&field, p);
        images.push(solve_adjoint(&structure, &target).ok_or(Error::NoPMap(i))?);
    }
    Ok(PMap { field, images, source: PMapSource::AdjointSolve, structure, rep_span: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_pmap_is_zero() {
        let pm = compute_pmap(&LieAlgebra::heisenberg(), 3).unwrap();
        assert!(pm.images().iter().all(|v| v.iter().all(|&c| c == 0)));
    }

    #[test]
    fn sl2_pmap() {
        let pm = compute_pmap(&LieAlgebra::sl(2).unwrap(), 5).unwrap();
        assert_eq!(pm.images(), &[vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]);
        // Same answer from the adjoint route.
        let bare = LieAlgebra::sl(2).unwrap().without_rep();
        let pm2 = compute_pmap(&bare, 5).unwrap();
        assert_eq!(pm2.images(), pm.images());
    }

    #[test]
    fn takiff_pmap() {
        let t = LieAlgebra::takiff(&LieAlgebra::sl(2).unwrap(), &[2]).unwrap();
        let pm = compute_pmap(&t, 5).unwrap();
        let h = vec![0, 1, 0, 0, 0, 0];
        let zero = vec![0; 6];
        assert_eq!(pm.images(), &[zero.clone(), h, zero.clone(), zero.clone(), zero.clone(), zero]);
    }

    #[test]
    fn remark_pmap() {
        let pm = compute_pmap(&LieAlgebra::remark_solvable(1, 2).unwrap(), 5).unwrap();
        assert_eq!(pm.images()[2], vec![0, 0, 1]);
        assert_eq!(pm.images()[0], vec![0, 0, 0]);
    }

    #[test]
    fn ambiguous_without_rep() {
        let h = LieAlgebra::heisenberg().without_rep();
        assert!(matches!(compute_pmap(&h, 3), Err(Error::AmbiguousPMap)));
    }

    #[test]
    fn override_is_validated() {
        let h = LieAlgebra::heisenberg().without_rep();
        assert!(PMap::from_images(&h, 5, vec![vec![0; 3]; 3]).is_ok());
        // x^[p] = x is not valid: ad(x) is nilpotent, ad(x)^p = 0 ≠ ad(x).
        let bad = vec![vec![1, 0, 0], vec![0; 3], vec![0; 3]];
        assert!(matches!(PMap::from_images(&h, 5, bad), Err(Error::InvalidPMap(0))));
    }

    #[test]
    fn pmap_matches_adjoint_powers_across_catalog() {
        let sl2 = LieAlgebra::sl(2).unwrap();
        let algs = vec![
            LieAlgebra::heisenberg(),
            sl2.clone(),
            LieAlgebra::sl(3).unwrap(),
            LieAlgebra::takiff(&sl2, &[2]).unwrap(),
            LieAlgebra::semidirect(&sl2, None).unwrap(),
            LieAlgebra::remark_solvable(1, 2).unwrap(),
            LieAlgebra::abelian(3).unwrap(),
        ];
        for alg in &algs {
            for p in [3u64, 5, 7, 11, 13] {
                let pm = compute_pmap(alg, p).unwrap();
                pm.verify().unwrap();
            }
        }
    }

    #[test]
    fn general_elements_follow_representation() {
        let sl2 = LieAlgebra::sl(2).unwrap();
        let pm = compute_pmap(&sl2, 7).unwrap();
        // (2e)^[7] = 2^7 e^[7] = 0 and (3h)^[7] = 3^7 h = 3h.
        assert_eq!(pm.apply(&[2, 0, 0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(pm.apply(&[0, 3, 0]).unwrap(), vec![0, 3, 0]);
    }
}
