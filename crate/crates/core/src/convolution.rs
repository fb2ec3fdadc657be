//! The convolution *-algebra of a finite groupoid, its I-norm, left regular
//! representations and reduced-norm estimation.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, ArrowSet, FiniteGroupoid};
use crate::rational::{self, Rational};
use crate::unitspace::Word;

/// Exact Gaussian-rational scalar.
pub type Scalar = Complex<Rational>;

pub fn real(value: Rational) -> Scalar {
    Complex::new(value, Rational::zero())
}

fn modulus(z: &Scalar) -> f64 {
    rational::to_f64(&z.re).hypot(rational::to_f64(&z.im))
}

/// A finitely supported function on the arrows of one groupoid. Zero values
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidFunction {
    arrow_count: usize,
    values: BTreeMap<ArrowId, Scalar>,
}

impl GroupoidFunction {
    pub fn zero(g: &FiniteGroupoid) -> Self {
        GroupoidFunction {
            arrow_count: g.arrow_count(),
            values: BTreeMap::new(),
        }
    }

    pub fn from_values(g: &FiniteGroupoid, values: impl IntoIterator<Item = (ArrowId, Scalar)>) -> Result<Self> {
        let mut f = Self::zero(g);
        for (a, v) in values {
            if a.index() >= f.arrow_count {
                return Err(Error::Validation(format!("arrow {} does not exist", a.0)));
            }
            f.add(a, v);
        }
        Ok(f)
    }

    /// `δ_γ`
    pub fn delta(g: &FiniteGroupoid, a: ArrowId) -> Self {
        Self::indicator(g, &ArrowSet::from_ids(g.arrow_count(), [a]))
    }

    /// `1_S`
    pub fn indicator(g: &FiniteGroupoid, set: &ArrowSet) -> Self {
        GroupoidFunction {
            arrow_count: g.arrow_count(),
            values: set.iter().map(|a| (a, real(rational::one()))).collect(),
        }
    }

    pub fn units(g: &FiniteGroupoid) -> Self {
        Self::indicator(g, &g.unit_set())
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_count
    }

    pub fn get(&self, a: ArrowId) -> Scalar {
        self.values.get(&a).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (ArrowId, &Scalar)> {
        self.values.iter().map(|(&a, v)| (a, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn add(&mut self, a: ArrowId, v: Scalar) {
        if v.is_zero() {
            return;
        }
        let entry = self.values.entry(a).or_insert_with(Scalar::zero);
        *entry += v;
        if entry.is_zero() {
            self.values.remove(&a);
        }
    }

    pub fn plus(&self, other: &GroupoidFunction) -> GroupoidFunction {
        let mut out = self.clone();
        for (a, v) in other.support() {
            out.add(a, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> GroupoidFunction {
        let mut out = GroupoidFunction {
            arrow_count: self.arrow_count,
            values: BTreeMap::new(),
        };
        for (a, v) in self.support() {
            out.add(a, v * c);
        }
        out
    }

    pub fn to_doc(&self) -> FunctionDoc {
        FunctionDoc {
            arrow_count: self.arrow_count,
            values: self
                .values
                .iter()
                .map(|(a, v)| (a.0, (rational::format(&v.re), rational::format(&v.im))))
                .collect(),
        }
    }

    pub fn from_doc(g: &FiniteGroupoid, doc: &FunctionDoc) -> Result<Self> {
        if doc.arrow_count != g.arrow_count() {
            return Err(Error::Validation(format!(
                "function has {} arrows, groupoid has {}",
                doc.arrow_count,
                g.arrow_count()
            )));
        }
        let values = doc
            .values
            .iter()
            .map(|(&a, (re, im))| Ok((ArrowId(a), Complex::new(rational::parse(re)?, rational::parse(im)?))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(g, values)
    }
}

/// Serialized form: arrow id → `(re, im)` as rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    pub arrow_count: usize,
    pub values: BTreeMap<u32, (String, String)>,
}

fn same_groupoid(g: &FiniteGroupoid, f: &GroupoidFunction) {
    assert_eq!(f.arrow_count, g.arrow_count(), "function belongs to a different groupoid");
}

/// `(f*h)(γ) = Σ_{μ ∈ G_{s(γ)}} f(γμ^-1) h(μ)`
pub fn convolve(g: &FiniteGroupoid, f: &GroupoidFunction, h: &GroupoidFunction) -> GroupoidFunction {
    same_groupoid(g, f);
    same_groupoid(g, h);
    let mut out = GroupoidFunction::zero(g);
    for gamma in g.arrows() {
        let mut sum = Scalar::zero();
        for &mu in g.source_fiber(g.source(gamma)) {
            let Some(hv) = h.values.get(&mu) else { continue };
            let Some(fv) = f.values.get(&g.compose(gamma, g.inverse(mu)).expect("composable")) else {
                continue;
            };
            sum += fv * hv;
        }
        out.add(gamma, sum);
    }
    out
}

/// `f^*(γ) = conj(f(γ^-1))`
pub fn involution(g: &FiniteGroupoid, f: &GroupoidFunction) -> GroupoidFunction {
    same_groupoid(g, f);
    let mut out = GroupoidFunction::zero(g);
    for (a, v) in f.support() {
        out.add(g.inverse(a), v.conj());
    }
    out
}

fn fiber_sums<T: Clone + PartialOrd>(
    g: &FiniteGroupoid,
    f: &GroupoidFunction,
    zero: T,
    abs: impl Fn(&Scalar) -> T,
    add: impl Fn(T, T) -> T,
) -> T {
    let n = g.space().len();
    let mut by_source = vec![zero.clone(); n];
    let mut by_range = vec![zero.clone(); n];
    for (a, v) in f.support() {
        let m = abs(v);
        let (s, r) = (g.source(a).index(), g.range(a).index());
        by_source[s] = add(by_source[s].clone(), m.clone());
        by_range[r] = add(by_range[r].clone(), m);
    }
    by_source
        .into_iter()
        .chain(by_range)
        .fold(zero, |best, x| if x > best { x } else { best })
}

/// Exact I-norm for real-valued functions; `None` if some value has a
/// nonzero imaginary part.
pub fn i_norm_exact(g: &FiniteGroupoid, f: &GroupoidFunction) -> Option<Rational> {
    same_groupoid(g, f);
    if f.support().any(|(_, v)| !v.im.is_zero()) {
        return None;
    }
    Some(fiber_sums(g, f, Rational::zero(), |v| v.re.abs(), |a, b| a + b))
}

/// `max{ sup_x Σ_{G_x} |f|, sup_x Σ_{G^x} |f| }`
pub fn i_norm(g: &FiniteGroupoid, f: &GroupoidFunction) -> f64 {
    same_groupoid(g, f);
    match i_norm_exact(g, f) {
        Some(exact) => rational::to_f64(&exact),
        None => fiber_sums(g, f, 0.0, modulus, |a, b| a + b),
    }
}

/// `λ_x(f)` as a matrix indexed by `G_x`: entry `(γ, μ) = f(γμ^-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularMatrix {
    pub basis: Vec<ArrowId>,
    pub entries: Vec<Vec<Scalar>>,
}

impl RegularMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul(&self, other: &RegularMatrix) -> RegularMatrix {
        assert_eq!(self.basis, other.basis);
        let n = self.dim();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut sum = Scalar::zero();
                        for k in 0..n {
                            if !self.entries[i][k].is_zero() && !other.entries[k][j].is_zero() {
                                sum += &self.entries[i][k] * &other.entries[k][j];
                            }
                        }
                        sum
                    })
                    .collect()
            })
            .collect();
        RegularMatrix {
            basis: self.basis.clone(),
            entries,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> RegularMatrix {
        let n = self.dim();
        RegularMatrix {
            basis: self.basis.clone(),
            entries: (0..n).map(|i| (0..n).map(|j| self.entries[j][i].conj()).collect()).collect(),
        }
    }

    fn to_f64(&self) -> Vec<Vec<Complex<f64>>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|z| Complex::new(rational::to_f64(&z.re), rational::to_f64(&z.im)))
                    .collect()
            })
            .collect()
    }
}

pub fn regular_representation(g: &FiniteGroupoid, x: Word, f: &GroupoidFunction) -> RegularMatrix {
    same_groupoid(g, f);
    let basis: Vec<ArrowId> = g.source_fiber(x).to_vec();
    let entries = basis
        .iter()
        .map(|&gamma| {
            basis
                .iter()
                .map(|&mu| f.get(g.compose(gamma, g.inverse(mu)).expect("composable")))
                .collect()
        })
        .collect();
    RegularMatrix { basis, entries }
}

/// Result of [`reduced_norm`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub norm: f64,
    /// Unit at which the maximum is attained.
    pub argmax: Word,
    pub per_unit: Vec<f64>,
    pub iterations: usize,
}

pub const POWER_ITERATION_CAP: usize = 200_000;

fn apply(a: &[Vec<Complex<f64>>], v: &[Complex<f64>]) -> Vec<Complex<f64>> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn apply_adjoint(a: &[Vec<Complex<f64>>], v: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let n = v.len();
    (0..n).map(|j| (0..n).map(|i| a[i][j].conj() * v[i]).sum()).collect()
}

fn norm2(v: &[Complex<f64>]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest eigenvalue of `A^†A` by power iteration from `seed`; returns
/// `(σ_max, iterations)`.
fn power_iteration(a: &[Vec<Complex<f64>>], seed: Vec<Complex<f64>>, tolerance: f64) -> Result<(f64, usize)> {
    let mut v = seed;
    let n0 = norm2(&v);
    if n0 == 0.0 {
        return Ok((0.0, 0));
    }
    v.iter_mut().for_each(|z| *z /= n0);
    let mut previous = f64::NAN;
    for it in 1..=POWER_ITERATION_CAP {
        let w = apply_adjoint(a, &apply(a, &v));
        let lambda: f64 = v.iter().zip(&w).map(|(x, y)| (x.conj() * y).re).sum();
        let nw = norm2(&w);
        if nw == 0.0 {
            return Ok((0.0, it));
        }
        if (lambda - previous).abs() <= tolerance * lambda.abs().max(f64::MIN_POSITIVE) {
            return Ok((lambda.max(0.0).sqrt(), it));
        }
        previous = lambda;
        v = w.into_iter().map(|z| z / nw).collect();
    }
    Err(Error::Numeric(format!(
        "power iteration did not settle within {POWER_ITERATION_CAP} steps (last estimate {})",
        previous.max(0.0).sqrt()
    )))
}

fn seeds(n: usize) -> [Vec<Complex<f64>>; 2] {
    let ones = vec![Complex::new(1.0, 0.0); n];
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mixed = (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            Complex::new((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5, 0.25)
        })
        .collect();
    [ones, mixed]
}

/// Operator norm of `λ_x(f)` estimated by power iteration on `λ_x(f)^†λ_x(f)`.
pub fn representation_norm(g: &FiniteGroupoid, x: Word, f: &GroupoidFunction, tolerance: f64) -> Result<(f64, usize)> {
    let a = regular_representation(g, x, f).to_f64();
    let mut best = (0.0f64, 0usize);
    for seed in seeds(a.len()) {
        let (s, it) = power_iteration(&a, seed, tolerance)?;
        best = (best.0.max(s), best.1 + it);
    }
    Ok(best)
}

/// `sup_x ‖λ_x(f)‖`, each per-unit norm estimated to relative `tolerance`.
pub fn reduced_norm(g: &FiniteGroupoid, f: &GroupoidFunction, tolerance: f64) -> Result<NormEstimate> {
    same_groupoid(g, f);
    if !(tolerance > 0.0) {
        return Err(Error::Usage("tolerance must be positive".into()));
    }
    let points: Vec<Word> = g.space().points().collect();
    let results = points
        .par_iter()
        .map(|&x| representation_norm(g, x, f, tolerance))
        .collect::<Result<Vec<_>>>()?;
    let mut argmax = points[0];
    let mut norm = f64::NEG_INFINITY;
    for (&x, &(s, _)) in points.iter().zip(&results) {
        if s > norm {
            norm = s;
            argmax = x;
        }
    }
    Ok(NormEstimate {
        norm,
        argmax,
        per_unit: results.iter().map(|r| r.0).collect(),
        iterations: results.iter().map(|r| r.1).sum(),
    })
}
