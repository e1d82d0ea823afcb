//! Sparse multivariate polynomials over two tiers of variables.
//!
//! The outer tier are the edge variables `a1..aE` (exponent vectors, dense in
//! the edge count). Each coefficient is itself a sparse polynomial in the
//! squared-distance symbols `s_ij` of the external vertices, with exact
//! rational coefficients. Monomials are ordered graded-lexicographically by
//! edge index; text output lists the largest monomial first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, to_f64, Rational};

/// The squared distance `s_ij = |x_i - x_j|^2` between two external vertices,
/// stored with `i < j` (vertex ids of the owning graph).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistanceSymbol {
    i: usize,
    j: usize,
}

impl DistanceSymbol {
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "distance symbol needs two distinct vertices");
        DistanceSymbol {
            i: a.min(b),
            j: a.max(b),
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.i, self.j)
    }
}

impl fmt::Display for DistanceSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}_{}", self.i, self.j)
    }
}

/// A variable of either tier, used in error reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variable {
    Alpha(usize),
    Distance(DistanceSymbol),
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Alpha(e) => write!(f, "a{}", e + 1),
            Variable::Distance(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("unassigned variable {0}")]
    Unassigned(Variable),
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
}

type DistanceMonomial = Vec<(DistanceSymbol, u32)>;

fn merge_distance_monomials(a: &DistanceMonomial, b: &DistanceMonomial) -> DistanceMonomial {
    let mut out: BTreeMap<DistanceSymbol, u32> = a.iter().copied().collect();
    for &(s, k) in b {
        *out.entry(s).or_insert(0) += k;
    }
    out.into_iter().collect()
}

/// Polynomial in the distance symbols with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DistancePoly {
    terms: BTreeMap<DistanceMonomial, Rational>,
}

impl DistancePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::default();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn symbol(s: DistanceSymbol) -> Self {
        let mut p = Self::default();
        p.terms.insert(vec![(s, 1)], Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this polynomial does not depend on any distance symbol.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[(DistanceSymbol, u32)], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn symbols(&self) -> impl Iterator<Item = DistanceSymbol> + '_ {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| *s))
    }

    fn add_term(&mut self, m: DistanceMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DistancePoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Substitutes a value for every symbol.
    pub fn eval_exact(&self, s: &BTreeMap<DistanceSymbol, Rational>) -> Result<Rational, PolyError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (sym, k) in m {
                let v = s.get(sym).ok_or(PolyError::Unassigned(Variable::Distance(*sym)))?;
                term *= num_traits::pow(v.clone(), *k as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, s: &BTreeMap<DistanceSymbol, f64>) -> Result<f64, PolyError> {
        let mut acc = NeumaierSum::default();
        for (m, c) in &self.terms {
            let mut term = to_f64(c);
            for (sym, k) in m {
                let v = s.get(sym).ok_or(PolyError::Unassigned(Variable::Distance(*sym)))?;
                term *= v.powi(*k as i32);
            }
            acc.add(term);
        }
        Ok(acc.total())
    }

    /// Renames symbols; used to compare polynomials of two graphs whose
    /// external vertices carry the same labels but different ids.
    pub fn map_symbols(&self, f: impl Fn(DistanceSymbol) -> DistanceSymbol) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mapped: DistanceMonomial = m.iter().map(|(s, k)| (f(*s), *k)).collect();
            let mapped = merge_distance_monomials(&mapped, &Vec::new());
            out.add_term(mapped, c.clone());
        }
        out
    }

    fn format_with(&self, names: &dyn Fn(DistanceSymbol) -> String) -> String {
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push(if negative { '-' } else { '+' });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_empty() {
                factors.push(format_rational(&mag));
            }
            for (s, e) in m {
                if *e == 1 {
                    factors.push(names(*s));
                } else {
                    factors.push(format!("{}^{}", names(*s), e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Add for &DistancePoly {
    type Output = DistancePoly;
    fn add(self, rhs: &DistancePoly) -> DistancePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Mul for &DistancePoly {
    type Output = DistancePoly;
    fn mul(self, rhs: &DistancePoly) -> DistancePoly {
        let mut out = DistancePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(merge_distance_monomials(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &DistancePoly {
    type Output = DistancePoly;
    fn neg(self) -> DistancePoly {
        DistancePoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// Exponent vector over the edge variables, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in the edge variables with [`DistancePoly`] coefficients.
///
/// Canonical: no zero coefficient is ever stored, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, DistancePoly>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), DistancePoly::constant(c))
    }

    /// The single edge variable `a_{e+1}`.
    pub fn var(nvars: usize, e: usize) -> Self {
        assert!(e < nvars, "edge variable {e} out of range");
        let mut exps = vec![0; nvars];
        exps[e] = 1;
        Self::monomial(nvars, Monomial(exps), DistancePoly::constant(Rational::one()))
    }

    pub fn monomial(nvars: usize, m: Monomial, coeff: DistancePoly) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut p = Poly::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(m, coeff);
        }
        p
    }

    /// Product of the given edge variables, each to the first power.
    pub fn product_of(nvars: usize, edges: &[usize]) -> Self {
        let mut exps = vec![0; nvars];
        for &e in edges {
            exps[e] += 1;
        }
        Self::monomial(nvars, Monomial(exps), DistancePoly::constant(Rational::one()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &DistancePoly)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&DistancePoly> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: DistancePoly) {
        assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k.scale(c));
        }
        out
    }

    pub fn scale_by(&self, c: &DistancePoly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    /// Formal derivative with respect to `a_{e+1}`.
    pub fn partial_derivative(&self, e: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[e];
            if k == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[e] -= 1;
            out.add_term(Monomial(exps), c.scale(&Rational::from_integer(k.into())));
        }
        out
    }

    fn check_nonzero(&self) -> Result<(), PolyError> {
        if self.is_zero() {
            Err(PolyError::ZeroPolynomial)
        } else {
            Ok(())
        }
    }

    fn partial_degrees<'a>(&'a self, vars: &'a [usize]) -> impl Iterator<Item = u32> + 'a {
        self.terms
            .keys()
            .map(move |m| vars.iter().map(|&v| m.0[v]).sum::<u32>())
    }

    /// Smallest number of factors from `vars` in any monomial.
    pub fn low_degree(&self, vars: &[usize]) -> Result<u32, PolyError> {
        self.check_nonzero()?;
        Ok(self.partial_degrees(vars).min().unwrap_or(0))
    }

    /// Largest number of factors from `vars` in any monomial.
    pub fn degree(&self, vars: &[usize]) -> Result<u32, PolyError> {
        self.check_nonzero()?;
        Ok(self.partial_degrees(vars).max().unwrap_or(0))
    }

    pub fn total_degree(&self) -> Result<u32, PolyError> {
        self.check_nonzero()?;
        Ok(self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0))
    }

    /// `Some(k)` if every monomial has total degree `k`, `None` otherwise.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>, PolyError> {
        self.check_nonzero()?;
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        let first = degrees.next().unwrap_or(0);
        Ok(degrees.all(|d| d == first).then_some(first))
    }

    /// True if no exponent exceeds one.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&k| k <= 1))
    }

    pub fn distance_symbols(&self) -> Vec<DistanceSymbol> {
        let mut out: Vec<DistanceSymbol> = self.terms.values().flat_map(|c| c.symbols()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Exact evaluation. `alpha[e]` is the value of `a_{e+1}`; a variable that
    /// occurs in the polynomial but lies beyond the slice is unassigned.
    pub fn eval_exact(
        &self,
        alpha: &[Rational],
        s: &BTreeMap<DistanceSymbol, Rational>,
    ) -> Result<Rational, PolyError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.eval_exact(s)?;
            for (e, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = alpha.get(e).ok_or(PolyError::Unassigned(Variable::Alpha(e)))?;
                term *= num_traits::pow(v.clone(), k as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluation with compensated summation over monomials.
    pub fn eval_f64(&self, alpha: &[f64], s: &BTreeMap<DistanceSymbol, f64>) -> Result<f64, PolyError> {
        let mut acc = NeumaierSum::default();
        for (m, c) in &self.terms {
            let mut term = c.eval_f64(s)?;
            for (e, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = alpha.get(e).ok_or(PolyError::Unassigned(Variable::Alpha(e)))?;
                term *= v.powi(k as i32);
            }
            acc.add(term);
        }
        Ok(acc.total())
    }

    /// Replaces every distance symbol by a rational value.
    pub fn specialize(&self, s: &BTreeMap<DistanceSymbol, Rational>) -> Result<Poly, PolyError> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), DistancePoly::constant(c.eval_exact(s)?));
        }
        Ok(out)
    }

    pub fn map_distance_symbols(&self, f: impl Fn(DistanceSymbol) -> DistanceSymbol) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.map_symbols(&f));
        }
        out
    }

    /// Applies `f` to every exponent vector; `f` must be injective on the support.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. The divisor's leading coefficient must be a rational constant.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lead_m, lead_c) = divisor.terms.iter().next_back()?;
        let lead_c = lead_c.as_constant()?;
        let inv = lead_c.recip();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.terms.iter().next_back() {
            if !lead_m.divides(m) {
                return None;
            }
            let exps: Vec<u32> = m.0.iter().zip(&lead_m.0).map(|(a, b)| a - b).collect();
            let q = Poly::monomial(self.nvars, Monomial(exps), c.scale(&inv));
            rem = &rem - &(&q * divisor);
            quot = &quot + &q;
        }
        Some(quot)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Canonical text with the given names for edge variables and distance symbols.
    pub fn format_with(
        &self,
        alpha_name: &dyn Fn(usize) -> String,
        distance_name: &dyn Fn(DistanceSymbol) -> String,
    ) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let alpha: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            alpha_name(i)
                        } else {
                            format!("{}^{}", alpha_name(i), e)
                        }
                    })
                    .collect();
            let (negative, coeff_text) = match c.as_constant() {
                Some(r) => {
                    let neg = r.is_negative();
                    let mag = r.abs();
                    let text = if mag.is_one() && !alpha.is_empty() {
                        String::new()
                    } else {
                        format_rational(&mag)
                    };
                    (neg, text)
                }
                None if c.terms.len() == 1 => {
                    let text = c.format_with(distance_name);
                    match text.strip_prefix('-') {
                        Some(rest) => (true, rest.to_string()),
                        None => (false, text),
                    }
                }
                None => (false, format!("({})", c.format_with(distance_name))),
            };
            if negative {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            let mut factors = Vec::new();
            if !coeff_text.is_empty() {
                factors.push(coeff_text);
            }
            factors.extend(alpha);
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.format_with(&|e| format!("a{}", e + 1), &|s| s.to_string());
        f.write_str(&text)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let exps = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(exps), ca * cb);
            }
        }
        out
    }
}

/// Neumaier's improved Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// A polynomial with the distance symbols substituted by floats, flattened
/// for fast repeated evaluation at many edge-variable points.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    coefficients: Vec<f64>,
    offsets: Vec<u32>,
    // one entry per factor; a variable with exponent k appears k times
    factors: Vec<u16>,
    nonnegative: bool,
}

impl CompiledPoly {
    pub fn new(p: &Poly, s: &BTreeMap<DistanceSymbol, f64>) -> Result<Self, PolyError> {
        let mut coefficients = Vec::with_capacity(p.len());
        let mut offsets = vec![0u32];
        let mut factors = Vec::new();
        for (m, c) in p.terms() {
            coefficients.push(c.eval_f64(s)?);
            for (e, &k) in m.exponents().iter().enumerate() {
                for _ in 0..k {
                    factors.push(e as u16);
                }
            }
            offsets.push(factors.len() as u32);
        }
        let nonnegative = coefficients.iter().all(|&c| c >= 0.0);
        Ok(CompiledPoly {
            coefficients,
            offsets,
            factors,
            nonnegative,
        })
    }

    #[inline]
    pub fn eval(&self, alpha: &[f64]) -> f64 {
        let mut acc = NeumaierSum::default();
        let mut plain = 0.0;
        for (t, &c) in self.coefficients.iter().enumerate() {
            let lo = self.offsets[t] as usize;
            let hi = self.offsets[t + 1] as usize;
            let mut term = c;
            for &e in &self.factors[lo..hi] {
                term *= alpha[e as usize];
            }
            if self.nonnegative {
                plain += term;
            } else {
                acc.add(term);
            }
        }
        if self.nonnegative {
            plain
        } else {
            acc.total()
        }
    }
}
