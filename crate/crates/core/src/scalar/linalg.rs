//! Exact linear algebra over a [`Field`].
//!
//! Two flavours live here. [`Matrix`] with [`kernel_basis`] is the dense
//! textbook route used for small systems (structure constants, p-maps,
//! index). [`EchelonSpace`] is an incremental sparse echelon form over an
//! arbitrary ordered key type; it tracks how every stored row was combined
//! from the inserted vectors, which is what the kernel, membership and
//! coordinate computations on degree windows need.

use std::collections::BTreeMap;
use std::fmt;

use super::{Field, Ring};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for r in 0..self.rows {
            list.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        list.finish()
    }
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<E> = rows.into_iter().flatten().collect();
        Self::from_vec(r, c, data)
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::from_vec(rows, cols, vec![ring.zero(); rows * cols])
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn map<F, T: Clone>(&self, f: F) -> Matrix<T>
    where
        F: FnMut(&E) -> T,
    {
        Matrix::from_vec(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn try_map<F, T: Clone, Err>(&self, f: F) -> Result<Matrix<T>, Err>
    where
        F: FnMut(&E) -> Result<T, Err>,
    {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_vec(self.rows, self.cols, data))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible matrix product");
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let v = ring.add(out.get(i, j), &ring.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect();
        Self::from_vec(self.rows, self.cols, data)
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(a, b)).collect();
        Self::from_vec(self.rows, self.cols, data)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|a| ring.mul(a, c))
    }

    pub fn commutator<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.mul(ring, other).sub(ring, &other.mul(ring, self))
    }

    pub fn pow<R: Ring<Elem = E>>(&self, ring: &R, mut e: u64) -> Self {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(ring, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|a| ring.is_zero(a))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self::from_vec(self.cols, self.rows, data)
    }

    pub fn mul_vec<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)))
            })
            .collect()
    }
}

/// Reduced row echelon form in place; returns the pivot columns, chosen
/// left to right.
pub fn rref_in_place<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&r| !field.is_zero(m.get(r, col))) else {
            continue;
        };
        if pr != row {
            for c in 0..m.cols {
                m.data.swap(pr * m.cols + c, row * m.cols + c);
            }
        }
        let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
        for c in col..m.cols {
            let v = field.mul(m.get(row, c), &inv);
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col).clone();
            if field.is_zero(&factor) {
                continue;
            }
            for c in col..m.cols {
                let v = field.sub(m.get(r, c), &field.mul(&factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref_in_place(field, &mut work).len()
}

/// Basis of the right null space `{v : Mv = 0}`.
///
/// One vector per free column (ascending), with that free variable set to 1
/// and the other free variables to 0.
pub fn kernel_basis<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = rref_in_place(field, &mut work);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); m.cols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(work.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Solves `Σ coords_i · basis_i = target` for linearly independent basis
/// vectors; `None` if the target is outside their span.
pub fn solve_in_span<F: Field>(
    field: &F,
    basis: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let mut space = EchelonSpace::new(field.clone());
    for (i, b) in basis.iter().enumerate() {
        if space.insert(dense_to_sparse(field, b), vec![(i, field.one())]).is_some() {
            return None;
        }
    }
    let (res, combo) = space.reduce(dense_to_sparse(field, target));
    if !res.is_empty() {
        return None;
    }
    let mut out = vec![field.zero(); basis.len()];
    for (i, c) in combo {
        out[i] = c;
    }
    Some(out)
}

pub type SparseVec<K, E> = Vec<(K, E)>;

pub fn dense_to_sparse<R: Ring>(ring: &R, v: &[R::Elem]) -> SparseVec<usize, R::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

#[derive(Debug, Clone)]
struct Row<K, E> {
    vec: SparseVec<K, E>,
    tag: SparseVec<usize, E>,
}

/// Incremental echelon form of a set of sparse vectors.
///
/// Each inserted vector carries a *tag*: its coordinates in terms of some
/// original family. Stored rows keep their tags up to date, so reductions
/// report how a vector decomposes over the originals. Row pivots are the
/// smallest key of the row and are normalized to 1.
#[derive(Debug, Clone)]
pub struct EchelonSpace<F: Field, K: Ord + Clone> {
    field: F,
    rows: Vec<Row<K, F::Elem>>,
    pivots: BTreeMap<K, usize>,
}

fn axpy<K: Ord + Clone, F: Field>(
    field: &F,
    acc: &mut BTreeMap<K, F::Elem>,
    c: &F::Elem,
    v: &[(K, F::Elem)],
) {
    for (k, e) in v {
        let t = field.mul(c, e);
        match acc.get_mut(k) {
            Some(slot) => {
                let s = field.add(slot, &t);
                if field.is_zero(&s) {
                    acc.remove(k);
                } else {
                    *slot = s;
                }
            }
            None => {
                if !field.is_zero(&t) {
                    acc.insert(k.clone(), t);
                }
            }
        }
    }
}

impl<F: Field, K: Ord + Clone> EchelonSpace<F, K> {
    pub fn new(field: F) -> Self {
        Self { field, rows: Vec::new(), pivots: BTreeMap::new() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    /// Eliminates leading entries until the smallest remaining key is not a
    /// pivot. Returns the partially reduced vector and the tag combination
    /// that was subtracted.
    fn semi_reduce(
        &self,
        v: SparseVec<K, F::Elem>,
    ) -> (BTreeMap<K, F::Elem>, BTreeMap<usize, F::Elem>) {
        let field = &self.field;
        let mut work: BTreeMap<K, F::Elem> = BTreeMap::new();
        for (k, c) in v {
            if !field.is_zero(&c) {
                let e = work.entry(k).or_insert_with(|| field.zero());
                *e = field.add(e, &c);
            }
        }
        work.retain(|_, c| !field.is_zero(c));
        let mut combo = BTreeMap::new();
        while let Some((k, c)) = work.first_key_value() {
            let Some(&r) = self.pivots.get(k) else { break };
            let c = c.clone();
            let neg = field.neg(&c);
            axpy(field, &mut work, &neg, &self.rows[r].vec);
            axpy(field, &mut combo, &c, &self.rows[r].tag);
        }
        (work, combo)
    }

    /// Inserts `v` (with coordinates `tag` over the original family).
    ///
    /// Returns `None` if `v` was independent of the stored rows, otherwise
    /// the linear relation among the originals that `v` completes.
    pub fn insert(
        &mut self,
        v: SparseVec<K, F::Elem>,
        tag: SparseVec<usize, F::Elem>,
    ) -> Option<SparseVec<usize, F::Elem>> {
        let field = self.field.clone();
        let (work, combo) = self.semi_reduce(v);
        let mut new_tag: BTreeMap<usize, F::Elem> = BTreeMap::new();
        axpy(&field, &mut new_tag, &field.one(), &tag);
        let neg_one = field.neg(&field.one());
        axpy(&field, &mut new_tag, &neg_one, &combo.into_iter().collect::<Vec<_>>());
        let Some((lead, lead_c)) = work.first_key_value() else {
            return Some(new_tag.into_iter().collect());
        };
        let lead = lead.clone();
        let inv = field.inv(lead_c).expect("nonzero leading coefficient");
        let vec = work.into_iter().map(|(k, c)| (k, field.mul(&c, &inv))).collect();
        let tag = new_tag.into_iter().map(|(k, c)| (k, field.mul(&c, &inv))).collect();
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(Row { vec, tag });
        None
    }

    /// Whether `v` lies in the span of the stored rows.
    pub fn contains(&self, v: SparseVec<K, F::Elem>) -> bool {
        self.semi_reduce(v).0.is_empty()
    }

    /// Full reduction: `v = residual + Σ combo_i · original_i`, where the
    /// residual has no entry at any pivot key.
    pub fn reduce(
        &self,
        v: SparseVec<K, F::Elem>,
    ) -> (SparseVec<K, F::Elem>, SparseVec<usize, F::Elem>) {
        let field = &self.field;
        let (mut work, mut combo) = self.semi_reduce(v);
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => work.iter().find(|(k, _)| self.pivots.contains_key(*k)),
                Some(c) => work
                    .range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded))
                    .find(|(k, _)| self.pivots.contains_key(*k)),
            };
            let Some((k, c)) = next else { break };
            let (k, c) = (k.clone(), c.clone());
            let r = self.pivots[&k];
            let neg = field.neg(&c);
            axpy(field, &mut work, &neg, &self.rows[r].vec);
            axpy(field, &mut combo, &c, &self.rows[r].tag);
            cursor = Some(k);
        }
        (work.into_iter().collect(), combo.into_iter().collect())
    }

    /// Rows of the reduced echelon form, sorted by pivot ascending, each with
    /// its coordinates over the originals.
    pub fn reduced_rows(&self) -> Vec<(SparseVec<K, F::Elem>, SparseVec<usize, F::Elem>)> {
        let field = &self.field;
        let order: Vec<usize> = self.pivots.values().copied().collect();
        let mut done: Vec<(SparseVec<K, F::Elem>, SparseVec<usize, F::Elem>)> =
            Vec::with_capacity(order.len());
        let mut reduced = EchelonSpace::<F, K>::new(field.clone());
        // Back-substitution from the largest pivot down.
        for &r in order.iter().rev() {
            let row = &self.rows[r];
            let (res, combo) = reduced.reduce(row.vec.clone());
            let mut tag: BTreeMap<usize, F::Elem> = row.tag.iter().cloned().collect();
            // res = row - Σ combo_j * reduced_j, and reduced_j carries its own
            // tag in terms of the originals.
            let neg_one = field.neg(&field.one());
            for (j, c) in &combo {
                let scaled = field.mul(&neg_one, c);
                axpy(field, &mut tag, &scaled, &done[*j].1);
            }
            let tag: SparseVec<usize, F::Elem> = tag.into_iter().collect();
            let idx = done.len();
            done.push((res.clone(), tag.clone()));
            let lead = res[0].0.clone();
            reduced.pivots.insert(lead, reduced.rows.len());
            reduced.rows.push(Row { vec: res, tag: vec![(idx, field.one())] });
        }
        done.reverse();
        done
    }

    /// The reduced echelon basis without coordinates.
    pub fn basis(&self) -> Vec<SparseVec<K, F::Elem>> {
        self.reduced_rows().into_iter().map(|(v, _)| v).collect()
    }
}

/// Kernel of the linear map sending original index `c` to `columns[c]`,
/// returned as a reduced echelon basis over the column indices.
pub fn sparse_kernel<F: Field, K: Ord + Clone>(
    field: &F,
    columns: Vec<SparseVec<K, F::Elem>>,
) -> Vec<SparseVec<usize, F::Elem>> {
    let mut space = EchelonSpace::new(field.clone());
    let mut relations = EchelonSpace::<F, usize>::new(field.clone());
    for (c, col) in columns.into_iter().enumerate() {
        if let Some(rel) = space.insert(col, vec![(c, field.one())]) {
            relations.insert(rel, Vec::new());
        }
    }
    relations.basis()
}

/// Reduced echelon basis of the span of `vecs`.
pub fn rref<F: Field, K: Ord + Clone>(
    field: &F,
    vecs: impl IntoIterator<Item = SparseVec<K, F::Elem>>,
) -> Vec<SparseVec<K, F::Elem>> {
    let mut space = EchelonSpace::new(field.clone());
    for v in vecs {
        space.insert(v, Vec::new());
    }
    space.basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{PrimeField, Rationals};
    use proptest::prelude::*;

    #[test]
    fn kernel_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let m = Matrix::from_rows(vec![vec![1u64, 1]]);
        assert_eq!(kernel_basis(&f5, &m), vec![vec![4, 1]]);

        let zero = Matrix::from_rows(vec![vec![0u64, 0], vec![0, 0]]);
        assert_eq!(kernel_basis(&f5, &zero), vec![vec![1, 0], vec![0, 1]]);

        let id = Matrix::identity(&f5, 3);
        assert!(kernel_basis(&f5, &id).is_empty());
    }

    #[test]
    fn kernel_over_rationals() {
        let q = Rationals;
        let m = Matrix::from_rows(vec![
            vec![q.from_i64(1), q.from_i64(2), q.from_i64(3)],
            vec![q.from_i64(2), q.from_i64(4), q.from_i64(6)],
        ]);
        let k = kernel_basis(&q, &m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(&q, v).iter().all(|x| q.is_zero(x)));
        }
    }

    #[test]
    fn echelon_tracks_coordinates() {
        let f = PrimeField::new(7).unwrap();
        let mut s = EchelonSpace::<_, usize>::new(f);
        assert!(s.insert(vec![(0, 1), (1, 2)], vec![(0, 1)]).is_none());
        assert!(s.insert(vec![(1, 3), (2, 1)], vec![(1, 1)]).is_none());
        // 2*v0 + 5*v1 = (2, 4+15, 5) = (2, 5, 5) mod 7
        let (res, combo) = s.reduce(vec![(0, 2), (1, 5), (2, 5)]);
        assert!(res.is_empty());
        assert_eq!(combo, vec![(0, 2), (1, 5)]);
        let rel = s.insert(vec![(0, 2), (1, 5), (2, 5)], vec![(2, 1)]).unwrap();
        assert_eq!(rel, vec![(0, 5), (1, 2), (2, 1)]);
    }

    #[test]
    fn reduced_rows_are_reduced() {
        let f = PrimeField::new(11).unwrap();
        let rows = rref(&f, vec![vec![(0usize, 1u64), (1, 1), (2, 1)], vec![(1, 1), (2, 2)], vec![(2, 3)]]);
        assert_eq!(rows, vec![vec![(0, 1)], vec![(1, 1)], vec![(2, 1)]]);
    }

    fn random_matrix(p: u64, rows: usize, cols: usize, seed: &[u64]) -> Matrix<u64> {
        let data = (0..rows * cols).map(|i| seed[i % seed.len()].wrapping_mul(i as u64 + 7) % p).collect();
        Matrix::from_vec(rows, cols, data)
    }

    proptest! {
        #[test]
        fn kernel_vectors_annihilate(rows in 1usize..6, cols in 1usize..7, seed in proptest::collection::vec(0u64..13, 1..20)) {
            let f = PrimeField::new(13).unwrap();
            let m = random_matrix(13, rows, cols, &seed);
            let k = kernel_basis(&f, &m);
            prop_assert_eq!(k.len(), cols - rank(&f, &m));
            for v in &k {
                prop_assert!(m.mul_vec(&f, v).iter().all(|x| *x == 0));
            }
            prop_assert_eq!(k, kernel_basis(&f, &m.clone()));
        }

        #[test]
        fn sparse_kernel_matches_dense(rows in 1usize..6, cols in 1usize..7, seed in proptest::collection::vec(0u64..13, 1..20)) {
            let f = PrimeField::new(13).unwrap();
            let m = random_matrix(13, rows, cols, &seed);
            let columns: Vec<SparseVec<usize, u64>> = (0..cols)
                .map(|c| (0..rows).filter(|&r| *m.get(r, c) != 0).map(|r| (r, *m.get(r, c))).collect())
                .collect();
            let sk = sparse_kernel(&f, columns);
            prop_assert_eq!(sk.len(), cols - rank(&f, &m));
            for v in &sk {
                let mut dense = vec![0u64; cols];
                for (i, c) in v { dense[*i] = *c; }
                prop_assert!(m.mul_vec(&f, &dense).iter().all(|x| *x == 0));
            }
        }
    }
}
