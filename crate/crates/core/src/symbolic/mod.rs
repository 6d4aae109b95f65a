//! Exact-arithmetic noncommutative polynomial algebra over the symbols
//! `q`, `p` with a formal power of `hbar`.
//!
//! Coefficients are complex rationals, so ordering discrepancies are
//! detected as exact nonzero values, never floating-point artifacts.
//! Normal order targets q-left/p-right via the rewrite `p q = q p - i hbar`.

mod parse;

pub use parse::{parse_c_polynomial, parse_nc_polynomial};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LabError, Result};
use crate::operator::Operator;

pub type Rat = BigRational;

/// Exact complex rational scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn zero() -> Self {
        Self { re: Rat::zero(), im: Rat::zero() }
    }

    pub fn one() -> Self {
        Self { re: Rat::one(), im: Rat::zero() }
    }

    pub fn i() -> Self {
        Self { re: Rat::zero(), im: Rat::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self { re: Rat::from_integer(BigInt::from(n)), im: Rat::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self { re: Rat::new(BigInt::from(num), BigInt::from(den)), im: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> Self {
        Self { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let d = &other.re * &other.re + &other.im * &other.im;
        if d.is_zero() {
            return Err(LabError::InvalidParameter("division by zero scalar".into()));
        }
        Ok(Self {
            re: (&self.re * &other.re + &self.im * &other.im) / d.clone(),
            im: (&self.im * &other.re - &self.re * &other.im) / d,
        })
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Q,
    P,
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Q => write!(f, "q"),
            Sym::P => write!(f, "p"),
        }
    }
}

/// A word over {q, p} together with a formal hbar power.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NcKey {
    pub word: Vec<Sym>,
    pub hbar: u32,
}

/// Noncommutative polynomial: map from (word, hbar power) to exact
/// complex rational coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NcPolynomial {
    terms: BTreeMap<NcKey, CRat>,
}

fn nc_insert(map: &mut BTreeMap<NcKey, CRat>, key: NcKey, coeff: CRat) {
    if coeff.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(existing) => {
            *existing = existing.add(&coeff);
            if existing.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, coeff);
        }
    }
}

impl NcPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(CRat::one())
    }

    pub fn constant(c: CRat) -> Self {
        let mut terms = BTreeMap::new();
        nc_insert(&mut terms, NcKey { word: vec![], hbar: 0 }, c);
        Self { terms }
    }

    pub fn symbol(s: Sym) -> Self {
        Self::from_word(vec![s], 0, CRat::one())
    }

    pub fn from_word(word: Vec<Sym>, hbar: u32, coeff: CRat) -> Self {
        let mut terms = BTreeMap::new();
        nc_insert(&mut terms, NcKey { word, hbar }, coeff);
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NcKey, &CRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &[Sym], hbar: u32) -> CRat {
        self.terms
            .get(&NcKey { word: word.to_vec(), hbar })
            .cloned()
            .unwrap_or_else(CRat::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            nc_insert(&mut terms, k.clone(), c.clone());
        }
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, s: &CRat) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            nc_insert(&mut terms, k.clone(), c.mul(s));
        }
        Self { terms }
    }

    /// Multiply every term by hbar^k.
    pub fn hbar_shift(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| (NcKey { word: key.word.clone(), hbar: key.hbar + k }, c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut word = k1.word.clone();
                word.extend_from_slice(&k2.word);
                nc_insert(&mut terms, NcKey { word, hbar: k1.hbar + k2.hbar }, c1.mul(c2));
            }
        }
        Self { terms }
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(|k| first_descent(&k.word).is_none())
    }

    /// Rewrite every word to the shape q^a p^b using `p q = q p - i hbar`.
    pub fn normal_order(&self) -> Self {
        let mut cur = self.terms.clone();
        loop {
            let mut next = BTreeMap::new();
            let mut changed = false;
            for (key, coeff) in &cur {
                match first_descent(&key.word) {
                    None => nc_insert(&mut next, key.clone(), coeff.clone()),
                    Some(i) => {
                        changed = true;
                        let mut swapped = key.word.clone();
                        swapped.swap(i, i + 1);
                        nc_insert(&mut next, NcKey { word: swapped, hbar: key.hbar }, coeff.clone());
                        let mut contracted = key.word.clone();
                        contracted.drain(i..i + 2);
                        nc_insert(
                            &mut next,
                            NcKey { word: contracted, hbar: key.hbar + 1 },
                            coeff.mul(&CRat::i().neg()),
                        );
                    }
                }
            }
            cur = next;
            if !changed {
                break;
            }
        }
        Self { terms: cur }
    }

    /// Termwise partial derivative of a normal-ordered polynomial.
    pub fn formal_derivative(&self, var: Sym) -> Result<Self> {
        if !self.is_normal_ordered() {
            return Err(LabError::NotNormalOrdered);
        }
        let mut terms = BTreeMap::new();
        for (key, coeff) in &self.terms {
            let a = key.word.iter().filter(|s| **s == Sym::Q).count() as u32;
            let b = key.word.len() as u32 - a;
            let (count, new_a, new_b) = match var {
                Sym::Q => (a, a.saturating_sub(1), b),
                Sym::P => (b, a, b.saturating_sub(1)),
            };
            if count == 0 {
                continue;
            }
            let mut word = vec![Sym::Q; new_a as usize];
            word.extend(vec![Sym::P; new_b as usize]);
            nc_insert(
                &mut terms,
                NcKey { word, hbar: key.hbar },
                coeff.mul(&CRat::from_int(count as i64)),
            );
        }
        Ok(Self { terms })
    }

    /// Substitute matrices for symbols and a numeric hbar, preserving
    /// word order.
    pub fn evaluate(&self, q: &Operator, p: &Operator, hbar: f64) -> Result<Operator> {
        q.check_same_dim(p)?;
        let dim = q.dim();
        let mut out = Operator::zeros(dim);
        for (key, coeff) in &self.terms {
            let mut m = Operator::identity(dim);
            for s in &key.word {
                m = match s {
                    Sym::Q => m.matmul(q),
                    Sym::P => m.matmul(p),
                };
            }
            let scalar = coeff.to_complex64() * Complex64::new(hbar.powi(key.hbar as i32), 0.0);
            if !(scalar.re.is_finite() && scalar.im.is_finite()) {
                return Err(LabError::InvalidParameter("non-finite coefficient".into()));
            }
            out = out.add(&m.scale(scalar));
        }
        Ok(out)
    }

    /// Normal-order, then reinterpret q^a p^b words as commutative
    /// monomials.
    pub fn to_commutative(&self) -> CPolynomial {
        let no = self.normal_order();
        let mut out = CPolynomial::zero();
        for (key, coeff) in &no.terms {
            let a = key.word.iter().filter(|s| **s == Sym::Q).count() as u32;
            let b = key.word.len() as u32 - a;
            out = out.add(&CPolynomial::monomial(a, b, key.hbar, coeff.clone()));
        }
        out
    }
}

fn first_descent(word: &[Sym]) -> Option<usize> {
    word.windows(2).position(|w| w[0] == Sym::P && w[1] == Sym::Q)
}

impl fmt::Display for NcPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}", rat_str(&coeff.re))?;
            if !coeff.im.is_zero() {
                if coeff.im.is_negative() {
                    write!(f, " - {}i", rat_str(&-coeff.im.clone()))?;
                } else {
                    write!(f, " + {}i", rat_str(&coeff.im))?;
                }
            }
            write!(f, ")")?;
            if key.hbar > 0 {
                write!(f, "*hbar^{}", key.hbar)?;
            }
            for s in &key.word {
                write!(f, "*{s}")?;
            }
        }
        Ok(())
    }
}

fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Commutative monomial key: q^a p^b hbar^h (or u^a v^b for map
/// expressions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CKey {
    pub q: u32,
    pub p: u32,
    pub hbar: u32,
}

/// Commutative polynomial with exact complex rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CPolynomial {
    terms: BTreeMap<CKey, CRat>,
}

fn c_insert(map: &mut BTreeMap<CKey, CRat>, key: CKey, coeff: CRat) {
    if coeff.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(existing) => {
            *existing = existing.add(&coeff);
            if existing.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, coeff);
        }
    }
}

impl CPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 0, CRat::one())
    }

    pub fn monomial(q: u32, p: u32, hbar: u32, coeff: CRat) -> Self {
        let mut terms = BTreeMap::new();
        c_insert(&mut terms, CKey { q, p, hbar }, coeff);
        Self { terms }
    }

    pub fn q() -> Self {
        Self::monomial(1, 0, 0, CRat::one())
    }

    pub fn p() -> Self {
        Self::monomial(0, 1, 0, CRat::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CKey, &CRat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, q: u32, p: u32, hbar: u32) -> CRat {
        self.terms.get(&CKey { q, p, hbar }).cloned().unwrap_or_else(CRat::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.q + k.p).max().unwrap_or(0)
    }

    pub fn degree_in_q(&self) -> u32 {
        self.terms.keys().map(|k| k.q).max().unwrap_or(0)
    }

    pub fn degree_in_p(&self) -> u32 {
        self.terms.keys().map(|k| k.p).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            c_insert(&mut terms, *k, c.clone());
        }
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn scale(&self, s: &CRat) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            c_insert(&mut terms, *k, c.mul(s));
        }
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                c_insert(
                    &mut terms,
                    CKey { q: k1.q + k2.q, p: k1.p + k2.p, hbar: k1.hbar + k2.hbar },
                    c1.mul(c2),
                );
            }
        }
        Self { terms }
    }

    pub fn diff_q(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            if k.q == 0 {
                continue;
            }
            c_insert(
                &mut terms,
                CKey { q: k.q - 1, p: k.p, hbar: k.hbar },
                c.mul(&CRat::from_int(k.q as i64)),
            );
        }
        Self { terms }
    }

    pub fn diff_p(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            if k.p == 0 {
                continue;
            }
            c_insert(
                &mut terms,
                CKey { q: k.q, p: k.p - 1, hbar: k.hbar },
                c.mul(&CRat::from_int(k.p as i64)),
            );
        }
        Self { terms }
    }

    /// Evaluate a polynomial in q alone on an operator argument.
    pub fn evaluate_in_q(&self, q: &Operator, hbar: f64) -> Result<Operator> {
        if self.degree_in_p() > 0 {
            return Err(LabError::InvalidParameter("polynomial depends on p".into()));
        }
        let mut out = Operator::zeros(q.dim());
        for (k, c) in &self.terms {
            let scalar = c.to_complex64() * Complex64::new(hbar.powi(k.hbar as i32), 0.0);
            out = out.add(&q.pow(k.q).scale(scalar));
        }
        Ok(out)
    }
}

impl fmt::Display for CPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}", rat_str(&coeff.re))?;
            if !coeff.im.is_zero() {
                write!(f, " + {}i", rat_str(&coeff.im))?;
            }
            write!(f, ")")?;
            if key.hbar > 0 {
                write!(f, "*hbar^{}", key.hbar)?;
            }
            if key.q > 0 {
                write!(f, "*q^{}", key.q)?;
            }
            if key.p > 0 {
                write!(f, "*p^{}", key.p)?;
            }
        }
        Ok(())
    }
}

/// normal_order(P1 P2 - P2 P1).
pub fn nc_commutator(p1: &NcPolynomial, p2: &NcPolynomial) -> NcPolynomial {
    p1.mul(p2).sub(&p2.mul(p1)).normal_order()
}

/// Classical Poisson bracket df/dq dg/dp - df/dp dg/dq, exact.
pub fn classical_poisson(f: &CPolynomial, g: &CPolynomial) -> CPolynomial {
    f.diff_q().mul(&g.diff_p()).sub(&f.diff_p().mul(&g.diff_q()))
}

/// Fully symmetrized (Weyl) ordering: each monomial q^a p^b becomes the
/// average over all distinct interleavings of a copies of q and b of p.
pub fn weyl_quantize(f: &CPolynomial) -> NcPolynomial {
    let mut out = NcPolynomial::zero();
    for (key, coeff) in f.terms() {
        let words = interleavings(key.q, key.p);
        let n = words.len() as i64;
        let per = coeff.mul(&CRat::from_ratio(1, n));
        for w in words {
            out = out.add(&NcPolynomial::from_word(w, key.hbar, per.clone()));
        }
    }
    out
}

fn interleavings(a: u32, b: u32) -> Vec<Vec<Sym>> {
    fn rec(a: u32, b: u32, prefix: &mut Vec<Sym>, out: &mut Vec<Vec<Sym>>) {
        if a == 0 && b == 0 {
            out.push(prefix.clone());
            return;
        }
        if a > 0 {
            prefix.push(Sym::Q);
            rec(a - 1, b, prefix, out);
            prefix.pop();
        }
        if b > 0 {
            prefix.push(Sym::P);
            rec(a, b - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(a, b, &mut Vec::new(), &mut out);
    out
}

/// normal_order([W(f), W(g)] - i hbar W({f, g})), exact. Nonzero values
/// witness the obstruction to a degree-preserving quantization map.
pub fn dirac_discrepancy(f: &CPolynomial, g: &CPolynomial) -> NcPolynomial {
    let comm = nc_commutator(&weyl_quantize(f), &weyl_quantize(g));
    let pb = classical_poisson(f, g);
    let wpb = weyl_quantize(&pb).hbar_shift(1).scale(&CRat::i());
    comm.sub(&wpb).normal_order()
}

/// Variables of a canonical map expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapVar {
    U,
    V,
}

/// A polynomial change of variables (u, v) -> (q, p). The component
/// expressions are `CPolynomial`s read over (u, v).
#[derive(Clone, Debug)]
pub struct CanonicalMap {
    pub q_expr: CPolynomial,
    pub p_expr: CPolynomial,
    pub label: String,
}

impl CanonicalMap {
    /// Build a map and verify its Jacobian determinant is the constant 1.
    pub fn new_canonical(
        q_expr: CPolynomial,
        p_expr: CPolynomial,
        label: impl Into<String>,
    ) -> Result<Self> {
        let map = Self { q_expr, p_expr, label: label.into() };
        if map.jacobian() != CPolynomial::one() {
            return Err(LabError::InvalidParameter(format!(
                "map '{}' has non-unit Jacobian {}",
                map.label,
                map.jacobian()
            )));
        }
        Ok(map)
    }

    /// Unvalidated constructor for maps not claimed canonical.
    pub fn new_unchecked(
        q_expr: CPolynomial,
        p_expr: CPolynomial,
        label: impl Into<String>,
    ) -> Self {
        Self { q_expr, p_expr, label: label.into() }
    }

    /// dq/du dp/dv - dq/dv dp/du; q_expr/p_expr are read over (u, v) so
    /// diff_q means d/du here.
    pub fn jacobian(&self) -> CPolynomial {
        self.q_expr
            .diff_q()
            .mul(&self.p_expr.diff_p())
            .sub(&self.q_expr.diff_p().mul(&self.p_expr.diff_q()))
    }
}

/// Lagrange bracket (x1, x2) = dq/dx1 dp/dx2 - dp/dx1 dq/dx2 evaluated
/// symbolically over the map variables.
pub fn lagrange_bracket(map: &CanonicalMap, wrt: (MapVar, MapVar)) -> CPolynomial {
    let d = |expr: &CPolynomial, var: MapVar| match var {
        MapVar::U => expr.diff_q(),
        MapVar::V => expr.diff_p(),
    };
    d(&map.q_expr, wrt.0).mul(&d(&map.p_expr, wrt.1)).sub(&d(&map.p_expr, wrt.0).mul(&d(&map.q_expr, wrt.1)))
}
