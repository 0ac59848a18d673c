//! Sparse multivariate polynomials over at most four phase-space variables,
//! plus centered-Gaussian moment evaluation by recursive Wick pairing.
//!
//! Exponent vectors are packed into `[u8; 4]`; polynomials over fewer
//! variables leave the trailing entries at zero. Substitution of linear forms
//! is done with a recursive Horner scheme so that the usual multinomial
//! blow-up never materializes term by term.

use std::collections::{BTreeMap, HashMap};

use crate::mat::Mat;
use crate::scalar::Real;

pub const MAX_VARS: usize = 4;

/// Packed exponent multi-index.
pub type Exps = [u8; MAX_VARS];

pub fn total_degree(e: &Exps) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

#[derive(Clone, Debug)]
pub struct Poly<T> {
    nvars: usize,
    terms: HashMap<Exps, T>,
}

impl<T: Real> Poly<T> {
    pub fn new(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Poly { nvars, terms: HashMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::new(nvars);
        if c != T::zero() {
            p.terms.insert([0; MAX_VARS], c);
        }
        p
    }

    pub fn monomial(nvars: usize, exps: Exps, c: T) -> Self {
        let mut p = Self::new(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(total_degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &T)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Exps, c: T) {
        debug_assert!(exps[self.nvars..].iter().all(|&e| e == 0));
        if c == T::zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(T::zero);
        *entry += c;
        if *entry == T::zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        assert_eq!(self.nvars, rhs.nvars);
        for (&e, &c) in &rhs.terms {
            self.add_term(e, c);
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        if s == T::zero() {
            return Self::new(self.nvars);
        }
        let mut out = Self::new(self.nvars);
        for (&e, &c) in &self.terms {
            out.terms.insert(e, c * s);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Self::new(self.nvars);
        for (&ea, &ca) in &self.terms {
            for (&eb, &cb) in &rhs.terms {
                let mut e = [0u8; MAX_VARS];
                for k in 0..self.nvars {
                    e[k] = ea[k].checked_add(eb[k]).expect("exponent overflow");
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Multiply by the monomial r^`exps`.
    pub fn mul_monomial(&self, exps: Exps) -> Self {
        let mut out = Self::new(self.nvars);
        for (&ea, &ca) in &self.terms {
            let mut e = [0u8; MAX_VARS];
            for k in 0..self.nvars {
                e[k] = ea[k].checked_add(exps[k]).expect("exponent overflow");
            }
            out.terms.insert(e, ca);
        }
        out
    }

    pub fn eval(&self, point: &[T]) -> T {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = T::zero();
        for (&e, &c) in &self.terms {
            let mut m = c;
            for k in 0..self.nvars {
                m = m * point[k].powi(e[k] as i32);
            }
            acc += m;
        }
        acc
    }

    /// Substitute each old variable by a linear form over `new_nvars` new
    /// variables: old_k = Σ_j forms[k][j] · new_j.
    pub fn substitute(&self, forms: &[Vec<T>], new_nvars: usize) -> Self {
        assert_eq!(forms.len(), self.nvars, "one linear form per old variable");
        assert!(forms.iter().all(|f| f.len() == new_nvars));
        let term_list: Vec<(Exps, T)> = self.terms.iter().map(|(&e, &c)| (e, c)).collect();
        let form_polys: Vec<Poly<T>> = forms
            .iter()
            .map(|f| {
                let mut p = Poly::new(new_nvars);
                for (j, &cj) in f.iter().enumerate() {
                    let mut e = [0u8; MAX_VARS];
                    e[j] = 1;
                    p.add_term(e, cj);
                }
                p
            })
            .collect();
        substitute_rec(&term_list, 0, self.nvars, &form_polys, new_nvars)
    }

    /// Apply exp(½ Σ_ij C_ij ∂_i ∂_j); the series terminates because each
    /// application lowers the total degree by two.
    pub fn heat(&self, c: &Mat<T>) -> Self {
        assert_eq!(c.dim(), self.nvars);
        let mut total = self.clone();
        let mut cur = self.clone();
        let mut k = 0usize;
        loop {
            k += 1;
            cur = cur.second_derivative_contraction(c).scaled(T::of(0.5) / T::of_usize(k));
            if cur.is_zero() {
                break;
            }
            total.add_assign(&cur);
        }
        total
    }

    /// Σ_ij C_ij ∂_i ∂_j applied once.
    fn second_derivative_contraction(&self, c: &Mat<T>) -> Self {
        let mut out = Self::new(self.nvars);
        for (&e, &coef) in &self.terms {
            for i in 0..self.nvars {
                if e[i] == 0 {
                    continue;
                }
                for j in 0..self.nvars {
                    let cij = c[(i, j)];
                    if cij == T::zero() {
                        continue;
                    }
                    // d_i d_j r^e = e_j (e_i - [i==j]) r^{e - e_i - e_j}
                    let ei_eff = if i == j { e[i].saturating_sub(1) } else { e[i] };
                    if e[j] == 0 || ei_eff == 0 {
                        continue;
                    }
                    let factor = T::of_usize(e[j] as usize) * T::of_usize(ei_eff as usize);
                    let mut en = e;
                    en[j] -= 1;
                    en[i] -= 1;
                    out.add_term(en, coef * cij * factor);
                }
            }
        }
        out
    }
}

fn substitute_rec<T: Real>(
    terms: &[(Exps, T)],
    var: usize,
    nvars: usize,
    forms: &[Poly<T>],
    new_nvars: usize,
) -> Poly<T> {
    if terms.is_empty() {
        return Poly::new(new_nvars);
    }
    if var == nvars {
        let c = terms.iter().map(|&(_, c)| c).sum();
        return Poly::constant(new_nvars, c);
    }
    let mut groups: BTreeMap<u8, Vec<(Exps, T)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[var]).or_default().push((e, c));
    }
    let max_deg = *groups.keys().last().expect("nonempty groups");
    let mut acc = Poly::new(new_nvars);
    for d in (0..=max_deg).rev() {
        if !acc.is_zero() {
            acc = acc.mul(&forms[var]);
        }
        if let Some(g) = groups.get(&d) {
            acc.add_assign(&substitute_rec(g, var + 1, nvars, forms, new_nvars));
        }
    }
    acc
}

/// Moments of a centered Gaussian with covariance `sigma`, evaluated by the
/// Wick pairing recursion with memoization on the exponent multi-index.
pub struct GaussianMoments<'a, T> {
    sigma: &'a Mat<T>,
    memo: HashMap<Exps, T>,
}

impl<'a, T: Real> GaussianMoments<'a, T> {
    pub fn new(sigma: &'a Mat<T>) -> Self {
        GaussianMoments { sigma, memo: HashMap::new() }
    }

    /// E[r^e] for r ~ N(0, sigma).
    pub fn moment(&mut self, e: Exps) -> T {
        let total = total_degree(&e);
        if total == 0 {
            return T::one();
        }
        if total % 2 == 1 {
            return T::zero();
        }
        if let Some(&v) = self.memo.get(&e) {
            return v;
        }
        let n = self.sigma.dim();
        let i = (0..n).find(|&k| e[k] > 0).expect("nonzero degree");
        let mut rem = e;
        rem[i] -= 1;
        let mut acc = T::zero();
        for j in 0..n {
            if rem[j] == 0 {
                continue;
            }
            let sij = self.sigma[(i, j)];
            if sij == T::zero() {
                continue;
            }
            let mut sub = rem;
            sub[j] -= 1;
            acc += sij * T::of_usize(rem[j] as usize) * self.moment(sub);
        }
        self.memo.insert(e, acc);
        acc
    }

    /// E[P(r)].
    pub fn expect(&mut self, p: &Poly<T>) -> T {
        let mut acc = T::zero();
        for (&e, &c) in &p.terms {
            if total_degree(&e) % 2 == 1 {
                continue;
            }
            acc += c * self.moment(e);
        }
        acc
    }
}
