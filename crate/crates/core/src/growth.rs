//! Word-length balls, growth functions, doubling scales, Følner indices and
//! orbital graphs.
//!
//! `B(n)x` is the set of arrows with source `x` and word length at most `n`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{ArrowSet, FiniteGroupoid};
use crate::rational::{self, Rational};
use crate::unitspace::{ClopenSet, Word};

/// `B(n)x = {γ : s(γ) = x, ℓ_K(γ) ≤ n}`.
pub fn ball_source(g: &FiniteGroupoid, x: Word, n: u32) -> ArrowSet {
    let lengths = g.word_lengths();
    ArrowSet::from_ids(
        g.arrow_count(),
        g.source_fiber(x).iter().copied().filter(|a| lengths[a.index()].is_some_and(|l| l <= n)),
    )
}

/// `{γ : r(γ) = x, ℓ_K(γ) ≤ n}`, the inverse image of `B(n)x`.
pub fn ball_range(g: &FiniteGroupoid, x: Word, n: u32) -> ArrowSet {
    let lengths = g.word_lengths();
    ArrowSet::from_ids(
        g.arrow_count(),
        g.range_fiber(x).iter().copied().filter(|a| lengths[a.index()].is_some_and(|l| l <= n)),
    )
}

/// `B(n) = {γ : ℓ_K(γ) ≤ n}` over all base points.
pub fn ball(g: &FiniteGroupoid, n: u32) -> ArrowSet {
    let lengths = g.word_lengths();
    ArrowSet::from_ids(g.arrow_count(), g.arrows().filter(|a| lengths[a.index()].is_some_and(|l| l <= n)))
}

/// `K·S = {kγ : k ∈ K, γ ∈ S, s(k) = r(γ)}`.
pub fn left_multiply(g: &FiniteGroupoid, k: &ArrowSet, set: &ArrowSet) -> ArrowSet {
    g.product(k, set)
}

fn fiber_counts(g: &FiniteGroupoid, x: Word, n_max: usize) -> Vec<usize> {
    let lengths = g.word_lengths();
    let mut hist = vec![0usize; n_max + 1];
    for a in g.source_fiber(x) {
        if let Some(l) = lengths[a.index()] {
            if (l as usize) <= n_max {
                hist[l as usize] += 1;
            }
        }
    }
    for i in 1..hist.len() {
        hist[i] += hist[i - 1];
    }
    hist
}

/// The table `n ↦ γ(n) = sup_x |B(n)x|` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub table: Vec<usize>,
    /// First `n` from which the table is constant through `n_max`, if that
    /// plateau spans at least three entries.
    pub saturation_n: Option<usize>,
}

impl GrowthProfile {
    pub fn from_table(table: Vec<usize>) -> Self {
        let saturation_n = saturation(&table);
        GrowthProfile { table, saturation_n }
    }

    pub fn n_max(&self) -> usize {
        self.table.len() - 1
    }
}

fn saturation(table: &[usize]) -> Option<usize> {
    let last = *table.last()?;
    let start = table.iter().rposition(|&v| v != last).map_or(0, |i| i + 1);
    (table.len() - start >= 3).then_some(start)
}

pub fn growth_function(g: &FiniteGroupoid, n_max: usize) -> Result<GrowthProfile> {
    if n_max < 1 {
        return Err(Error::Usage("n_max must be at least 1".into()));
    }
    let points: Vec<Word> = g.space().points().collect();
    let table = points
        .par_iter()
        .map(|&x| fiber_counts(g, x, n_max))
        .reduce(
            || vec![0; n_max + 1],
            |a, b| a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect(),
        );
    Ok(GrowthProfile::from_table(table))
}

/// Heuristic growth-order estimate: least-squares slope of `log γ(n)` against
/// `log(n + c)`, with the offset `c ∈ [0, 1]` chosen to minimise the residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdEstimate {
    pub slope: f64,
    pub offset: f64,
    pub residual: f64,
    pub window: (usize, usize),
    pub heuristic: bool,
}

impl OrdEstimate {
    /// The slope rounded to three decimals, as an exact rational.
    pub fn as_rational(&self) -> Rational {
        let milli = (self.slope * 1000.0).round() as i64;
        rational::rat(milli, 1000)
    }
}

fn fit(points: &[(f64, f64)], offset: f64) -> (f64, f64) {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 + offset).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum::<f64>()
        .sqrt();
    (slope, residual)
}

/// Estimates the order of growth over `window` (default `[1, n_max]`), clipped
/// below the saturation point. A constant table has order exactly 0.
pub fn estimate_ord(profile: &GrowthProfile, window: Option<(usize, usize)>) -> Result<OrdEstimate> {
    let (lo, hi) = window.unwrap_or((1, profile.n_max()));
    if lo > hi || hi > profile.n_max() {
        return Err(Error::Estimation(format!("window [{lo}, {hi}] is empty or outside the table")));
    }
    if profile.table.iter().all(|&v| v == profile.table[0]) {
        return Ok(OrdEstimate {
            slope: 0.0,
            offset: 0.0,
            residual: 0.0,
            window: (lo, hi),
            heuristic: true,
        });
    }
    let hi = match profile.saturation_n {
        Some(s) if s <= hi => s.saturating_sub(1),
        _ => hi,
    };
    let lo = lo.max(1);
    let points: Vec<(f64, f64)> = (lo..=hi).map(|n| (n as f64, profile.table[n] as f64)).collect();
    if points.len() < 2 {
        return Err(Error::Estimation(format!(
            "fewer than two unsaturated points in the window (saturation at {:?})",
            profile.saturation_n
        )));
    }
    const STEPS: usize = 200;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=STEPS {
        let c = i as f64 / STEPS as f64;
        let (slope, residual) = fit(&points, c);
        // prefer offsets nearer 1/2 on ties
        let better = residual < best.0 - 1e-12
            || ((residual - best.0).abs() <= 1e-12 && (c - 0.5).abs() < (best.2 - 0.5f64).abs());
        if better {
            best = (residual, slope, c);
        }
    }
    Ok(OrdEstimate {
        slope: best.1,
        offset: best.2,
        residual: best.0,
        window: (lo, hi),
        heuristic: true,
    })
}

/// `⌈ord⌉` for a nonnegative rational order.
pub fn ceil_ord(ord: &Rational) -> u32 {
    if ord.is_negative() {
        return 0;
    }
    ord.ceil().to_integer().to_u32().expect("order fits in u32")
}

/// Whether `γ(2M) ≤ (2^ord + 1)·γ(M)`, exactly.
pub fn doubling_holds(profile: &GrowthProfile, m: usize, ord: &Rational) -> bool {
    let (big, small) = (profile.table[2 * m], profile.table[m]);
    let ratio = Rational::new(BigInt::from(big), BigInt::from(small)) - rational::one();
    rational::le_pow2(&ratio, ord)
}

/// The smallest `M ≥ N` with `2M ≤ n_max` and `γ(2M) ≤ (2^ord + 1)·γ(M)`.
pub fn find_doubling_scale(profile: &GrowthProfile, n: usize, ord: &Rational) -> Result<usize> {
    let mut m = n;
    while 2 * m <= profile.n_max() {
        if doubling_holds(profile, m, ord) {
            return Ok(m);
        }
        m += 1;
    }
    Err(Error::SearchExhausted(format!(
        "no doubling scale M >= {n} with 2M <= {} at order {}",
        profile.n_max(),
        rational::format(ord)
    )))
}

/// `(M, m)` with `M` the doubling scale at order `⌈ord⌉` and
/// `m = (2^⌈ord⌉ + 1)·γ(M)`.
pub fn m_parameter(profile: &GrowthProfile, n: usize, ord: &Rational) -> Result<(usize, u64)> {
    let ord = ceil_ord(ord);
    let big_m = find_doubling_scale(profile, n, &rational::int(ord as i64))?;
    let m = ((1u64 << ord) + 1) * profile.table[big_m] as u64;
    Ok((big_m, m))
}

/// Følner index: the first `n` with `sup_x |K·B(n)x| / |B(n)x| < 1 + ε`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerReport {
    pub n: u32,
    #[serde(with = "crate::rational::serde_rational")]
    pub ratio: Rational,
}

/// `sup_x |K·B(n)x| / |B(n)x|`, exactly.
pub fn folner_ratio(g: &FiniteGroupoid, n: u32) -> Rational {
    let points: Vec<Word> = g.space().points().collect();
    points
        .par_iter()
        .map(|&x| {
            let b = ball_source(g, x, n);
            let kb = left_multiply(g, g.generators(), &b);
            Rational::new(BigInt::from(kb.len()), BigInt::from(b.len()))
        })
        .reduce(Rational::zero, |a, b| a.max(b))
}

pub fn folner_index(g: &FiniteGroupoid, epsilon: &Rational, n_max: u32) -> Result<FolnerReport> {
    if !epsilon.is_positive() {
        return Err(Error::Usage("epsilon must be positive".into()));
    }
    let bound = rational::one() + epsilon;
    for n in 0..=n_max {
        let ratio = folner_ratio(g, n);
        if ratio < bound {
            return Ok(FolnerReport { n, ratio });
        }
    }
    Err(Error::SearchExhausted(format!(
        "no Følner index below {n_max} for epsilon {}",
        rational::format(epsilon)
    )))
}

/// The orbital graph: vertices are points, edges `{r(k), s(k)}` for `k ∈ K`
/// with `s(k) ≠ r(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalGraph {
    adjacency: Vec<Vec<Word>>,
}

impl OrbitalGraph {
    pub fn new(g: &FiniteGroupoid) -> Self {
        let mut adjacency = vec![Vec::new(); g.space().len()];
        for k in g.generators().iter() {
            let (s, r) = (g.source(k), g.range(k));
            if s != r {
                adjacency[s.index()].push(r);
                adjacency[r.index()].push(s);
            }
        }
        for list in &mut adjacency {
            list.sort();
            list.dedup();
        }
        OrbitalGraph { adjacency }
    }

    /// Undirected edges `(x, y)` with `x < y`, sorted.
    pub fn edges(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for (x, list) in self.adjacency.iter().enumerate() {
            for &y in list {
                if (x as u32) < y.0 {
                    out.push((Word(x as u32), y));
                }
            }
        }
        out
    }

    pub fn neighbours(&self, x: Word) -> &[Word] {
        &self.adjacency[x.index()]
    }

    /// Graph-metric ball of radius `n` about `x`, as a sorted list.
    pub fn ball(&self, x: Word, n: u32) -> Vec<Word> {
        let mut dist = vec![u32::MAX; self.adjacency.len()];
        dist[x.index()] = 0;
        let mut queue = VecDeque::from([x]);
        let mut out = vec![x];
        while let Some(y) = queue.pop_front() {
            let d = dist[y.index()];
            if d == n {
                continue;
            }
            for &z in &self.adjacency[y.index()] {
                if dist[z.index()] == u32::MAX {
                    dist[z.index()] = d + 1;
                    out.push(z);
                    queue.push_back(z);
                }
            }
        }
        out.sort();
        out
    }
}

pub fn orbital_ball(g: &FiniteGroupoid, x: Word, n: u32) -> Result<ClopenSet> {
    ClopenSet::from_words(g.space(), OrbitalGraph::new(g).ball(x, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectionReport {
    pub cayley_ball: usize,
    pub orbital_ball: usize,
    pub surjective: bool,
}

/// Checks that `s` maps `{γ : r(γ) = x, ℓ ≤ n}` onto the orbital ball of
/// radius `n` about `x`, and the resulting cardinality bound.
pub fn check_source_surjection(g: &FiniteGroupoid, graph: &OrbitalGraph, x: Word, n: u32) -> Result<SurjectionReport> {
    let cay = ball_range(g, x, n);
    let mut image: Vec<Word> = cay.iter().map(|a| g.source(a)).collect();
    image.sort();
    image.dedup();
    let orb = graph.ball(x, n);
    let report = SurjectionReport {
        cayley_ball: cay.len(),
        orbital_ball: orb.len(),
        surjective: image == orb,
    };
    if !report.surjective || report.orbital_ball > report.cayley_ball {
        return Err(Error::InvariantViolation(format!(
            "source map is not onto the orbital ball at {} radius {n}: {report:?}",
            g.space().format(x)
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthComparison {
    /// `M_L = max_{k ∈ L} ℓ(k)`.
    pub m_l: u64,
    /// `ℓ(γ) ≤ M_L·ℓ_L(γ)` for every arrow.
    pub pointwise: bool,
    /// `B_{ℓ_L}(r) ⊆ B_ℓ(M_L·r)` for every `r ≤ r_max`.
    pub inclusion: bool,
}

/// Validates the length-function axioms for `ell`.
pub fn validate_length_function(g: &FiniteGroupoid, ell: &[u64]) -> Result<()> {
    if ell.len() != g.arrow_count() {
        return Err(Error::Usage("length table has the wrong size".into()));
    }
    for x in g.space().points() {
        if ell[g.unit(x).index()] != 0 {
            return Err(Error::Validation(format!(
                "length function: not zero on the unit at {}",
                g.space().format(x)
            )));
        }
    }
    for a in g.arrows() {
        if ell[a.index()] != ell[g.inverse(a).index()] {
            return Err(Error::Validation(format!("length function: not symmetric at arrow {}", a.0)));
        }
        for &b in g.range_fiber(g.source(a)) {
            let ab = g.compose(a, b).expect("composable");
            if ell[ab.index()] > ell[a.index()] + ell[b.index()] {
                return Err(Error::Validation(format!(
                    "length function: not subadditive at ({}, {})",
                    a.0, b.0
                )));
            }
        }
    }
    Ok(())
}

pub fn compare_length_functions(g: &FiniteGroupoid, ell: &[u64], l: &ArrowSet, r_max: u32) -> Result<LengthComparison> {
    validate_length_function(g, ell)?;
    if *l != g.inverse_set(l) {
        return Err(Error::Validation("L is not symmetric".into()));
    }
    let ell_l = g.word_lengths_for(l);
    if let Some(i) = ell_l.iter().position(Option::is_none) {
        return Err(Error::Generation(format!("arrow {i} is not a product of elements of L")));
    }
    let ell_l: Vec<u64> = ell_l.into_iter().map(|v| v.unwrap() as u64).collect();
    let m_l = l.iter().map(|k| ell[k.index()]).max().unwrap_or(0);
    let pointwise = g.arrows().all(|a| ell[a.index()] <= m_l * ell_l[a.index()]);
    let inclusion = (0..=r_max as u64).all(|r| {
        g.arrows()
            .filter(|a| ell_l[a.index()] <= r)
            .all(|a| ell[a.index()] <= m_l * r)
    });
    Ok(LengthComparison {
        m_l,
        pointwise,
        inclusion,
    })
}

/// The arrows of `K ∪ K²`, minus units; a convenient second generating set.
pub fn k_plus_k_squared(g: &FiniteGroupoid) -> ArrowSet {
    let k = g.generators();
    let mut out = g.product(k, k);
    out.union_with(k);
    ArrowSet::from_ids(g.arrow_count(), out.iter().filter(|&a| !g.is_unit(a)))
}

/// Word lengths as plain integers; errors if some arrow is not generated.
pub fn word_length_table(g: &FiniteGroupoid) -> Result<Vec<u64>> {
    g.check_generation()?;
    Ok(g.word_lengths().iter().map(|l| l.unwrap() as u64).collect())
}
