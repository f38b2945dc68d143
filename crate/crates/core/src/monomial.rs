//! Exponent vectors and sparse linear combinations of monomials.
//!
//! The same container backs commutative polynomials (`Sym(g)`) and PBW
//! elements of `U(g)`; only multiplication differs, and that lives with the
//! respective algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::scalar::Ring;

/// An exponent vector, ordered graded-lexicographically: total degree first,
/// then the exponent of the first variable, and so on.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Self { degree: 0, exps: SmallVec::from_elem(0, dim) }
    }

    pub fn var(dim: usize, i: usize) -> Self {
        Self::var_pow(dim, i, 1)
    }

    pub fn var_pow(dim: usize, i: usize, e: u16) -> Self {
        let mut m = Self::one(dim);
        m.exps[i] = e;
        m.degree = e as u32;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Self { degree: exps.iter().map(|&e| e as u32).sum(), exps: SmallVec::from_slice(exps) }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn first_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    pub fn last_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    pub fn with_inc(&self, i: usize) -> Self {
        let mut m = self.clone();
        m.exps[i] += 1;
        m.degree += 1;
        m
    }

    pub fn with_dec(&self, i: usize) -> Self {
        let mut m = self.clone();
        debug_assert!(m.exps[i] > 0);
        m.exps[i] -= 1;
        m.degree -= 1;
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Self { degree: self.degree + other.degree, exps }
    }

    pub fn pow(&self, k: u16) -> Self {
        let exps = self.exps.iter().map(|a| a * k).collect();
        Self { degree: self.degree * k as u32, exps }
    }

    /// Letters in PBW order, with repetition: `x_0^2 x_2` gives `[0, 0, 2]`.
    pub fn letters(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree as usize);
        for (i, &e) in self.exps.iter().enumerate() {
            out.extend(std::iter::repeat_n(i, e as usize));
        }
        out
    }

    /// `x*y^4` style rendering; `"1"` for the empty monomial.
    pub fn render(&self, labels: &[String]) -> String {
        if self.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { labels[i].clone() } else { format!("{}^{}", labels[i], e) })
            .collect();
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// All monomials in `dim` variables of exactly degree `d`, ascending.
pub fn monomials_of_degree(dim: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; dim];
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left as u16;
            out.push(Monomial::from_exponents(cur));
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if dim == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort();
    out
}

/// All monomials of degree at most `d`, ascending.
pub fn monomials_up_to_degree(dim: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(dim, k)).collect()
}

/// `binomial(d + dim, dim)`, saturating.
pub fn count_monomials_up_to(dim: usize, d: u32) -> usize {
    let mut acc: u128 = 1;
    for i in 1..=dim as u128 {
        acc = acc * (d as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Exponent vectors `e` with `Σ e_i·weights[i] ≤ max_weight` and
/// `e_i < caps[i]` where a cap is given. Slots of weight 0 need a cap.
/// Ordered by total weight, then lexicographically.
pub fn weighted_exponents(weights: &[u32], caps: &[Option<u32>], max_weight: u32) -> Vec<Vec<u32>> {
    assert_eq!(weights.len(), caps.len());
    fn rec(i: usize, left: u32, w: &[u32], caps: &[Option<u32>], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            out.push(cur.clone());
            return;
        }
        let by_weight = left.checked_div(w[i]).unwrap_or(u32::MAX);
        let top = match caps[i] {
            Some(c) => by_weight.min(c.saturating_sub(1)),
            None => {
                assert!(w[i] > 0, "uncapped slot of weight 0");
                by_weight
            }
        };
        for e in 0..=top {
            if caps[i] == Some(0) {
                break;
            }
            cur.push(e);
            rec(i + 1, left - e * w[i], w, caps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, max_weight, weights, caps, &mut Vec::new(), &mut out);
    let weight = |e: &Vec<u32>| e.iter().zip(weights).map(|(a, b)| a * b).sum::<u32>();
    out.sort_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| a.cmp(b)));
    out
}

/// Sort key that reverses the monomial order, so that echelon pivots (the
/// smallest key) are leading monomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Desc(pub Monomial);

impl PartialOrd for Desc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Desc {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

/// Sparse linear combination of monomials with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E: fmt::Debug> fmt::Debug for LinComb<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<E: Clone> Default for LinComb<E> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<E: Clone> LinComb<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial<R: Ring<Elem = E>>(ring: &R, m: Monomial, c: E) -> Self {
        let mut out = Self::zero();
        out.add_term(ring, m, c);
        out
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, dim: usize, c: E) -> Self {
        Self::monomial(ring, Monomial::one(dim), c)
    }

    pub fn from_terms<R: Ring<Elem = E>>(ring: &R, terms: impl IntoIterator<Item = (Monomial, E)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(ring, m, c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, E> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, E> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, m: Monomial, c: E) {
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let s = ring.add(slot, &c);
                if ring.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled<R: Ring<Elem = E>>(&mut self, ring: &R, c: &E, other: &Self) {
        if ring.is_zero(c) {
            return;
        }
        for (m, e) in &other.terms {
            self.add_term(ring, m.clone(), ring.mul(c, e));
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(ring, &ring.one(), other);
        out
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(ring, &ring.neg(&ring.one()), other);
        out
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        self.map_coeffs(|c| ring.neg(c))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        if ring.is_zero(c) {
            return Self::zero();
        }
        Self::from_terms(ring, self.terms.iter().map(|(m, e)| (m.clone(), ring.mul(c, e))))
    }

    /// Coefficient-wise map; zero images are dropped by the caller's ring in
    /// [`LinComb::try_map_ring`], here they are kept out by construction.
    fn map_coeffs(&self, f: impl Fn(&E) -> E) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect() }
    }

    /// Moves the coefficients into another ring, dropping zeros.
    pub fn try_map_ring<S: Ring, Err>(
        &self,
        target: &S,
        mut f: impl FnMut(&E) -> Result<S::Elem, Err>,
    ) -> Result<LinComb<S::Elem>, Err> {
        let mut out = LinComb::zero();
        for (m, c) in &self.terms {
            out.add_term(target, m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&E> {
        self.terms.values().next_back()
    }

    /// Homogeneous component of top degree.
    pub fn leading_form(&self) -> Self {
        match self.degree() {
            None => Self::zero(),
            Some(d) => Self { terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect() },
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn constant_term<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        self.terms.iter().next().filter(|(m, _)| m.is_one()).map_or_else(|| ring.zero(), |(_, c)| c.clone())
    }

    pub fn without_constant(&self) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| !m.is_one()).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Divides by the leading coefficient (over a field).
    pub fn monic<F: crate::scalar::Field<Elem = E>>(&self, field: &F) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(c) => self.scale(field, &field.inv(c).expect("nonzero")),
        }
    }

    /// Sparse vector keyed so that the leading monomial sorts first.
    pub fn to_sparse(&self) -> Vec<(Desc, E)> {
        self.terms.iter().rev().map(|(m, c)| (Desc(m.clone()), c.clone())).collect()
    }

    pub fn from_sparse<R: Ring<Elem = E>>(ring: &R, v: impl IntoIterator<Item = (Desc, E)>) -> Self {
        Self::from_terms(ring, v.into_iter().map(|(Desc(m), c)| (m, c)))
    }

    pub fn render<R: Ring<Elem = E>>(&self, ring: &R, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let cs = ring.format(c);
            let ms = m.render(labels);
            parts.push(if m.is_one() {
                cs
            } else if ring.is_one(c) {
                ms
            } else {
                format!("{cs}*{ms}")
            });
        }
        parts.join(" + ")
    }
}
