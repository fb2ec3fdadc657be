//! Point measures on the unit space, invariance, Banach densities, empirical
//! measures and approximate invariant density certificates.
//!
//! All arithmetic here is exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{decompose_into_bisections, ArrowId, ArrowSet, Bisection, FiniteGroupoid};
use crate::growth::{ball_source, left_multiply};
use crate::rational::{self, Rational};
use crate::unitspace::{ClopenSet, UnitSpace, Word};

fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nonnegative rational weights on the points of a unit space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMeasure {
    space: Arc<UnitSpace>,
    weights: Vec<Rational>,
}

/// Serialized form: word to rational string, zero weights omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureDoc {
    pub alphabet: u32,
    pub depth: u32,
    pub weights: BTreeMap<String, String>,
}

impl PointMeasure {
    pub fn new(space: &Arc<UnitSpace>, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::Validation("weight vector has the wrong length".into()));
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::Validation(format!("negative weight at {}", space.format(Word(i as u32)))));
        }
        Ok(PointMeasure {
            space: space.clone(),
            weights,
        })
    }

    pub fn uniform(space: &Arc<UnitSpace>) -> Self {
        let w = ratio(1, space.len());
        PointMeasure {
            space: space.clone(),
            weights: vec![w; space.len()],
        }
    }

    pub fn point_mass(space: &Arc<UnitSpace>, x: Word) -> Self {
        let mut weights = vec![Rational::zero(); space.len()];
        weights[x.index()] = Rational::one();
        PointMeasure {
            space: space.clone(),
            weights,
        }
    }

    pub fn space(&self) -> &Arc<UnitSpace> {
        &self.space
    }

    pub fn weight(&self, x: Word) -> &Rational {
        &self.weights[x.index()]
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn is_probability(&self) -> bool {
        self.total().is_one()
    }

    /// `μ(A)`.
    pub fn of(&self, set: &ClopenSet) -> Rational {
        set.iter().map(|x| &self.weights[x.index()]).sum()
    }

    pub fn to_doc(&self) -> MeasureDoc {
        MeasureDoc {
            alphabet: self.space.alphabet(),
            depth: self.space.depth(),
            weights: self
                .space
                .points()
                .filter(|x| !self.weights[x.index()].is_zero())
                .map(|x| (self.space.format(x), rational::format(&self.weights[x.index()])))
                .collect(),
        }
    }

    pub fn from_doc(space: &Arc<UnitSpace>, doc: &MeasureDoc) -> Result<Self> {
        if doc.alphabet != space.alphabet() || doc.depth != space.depth() {
            return Err(Error::Usage("measure document is over a different unit space".into()));
        }
        let mut weights = vec![Rational::zero(); space.len()];
        for (word, value) in &doc.weights {
            weights[space.parse_word(word)?.index()] = rational::parse(value)?;
        }
        Self::new(space, weights)
    }
}

/// `max_{W ⊆ V} |μ(s(W)) − μ(r(W))|` over sub-bisections of one bisection.
fn sub_bisection_defect(v: &Bisection, g: &FiniteGroupoid, mu: &PointMeasure) -> Rational {
    let (mut pos, mut neg) = (Rational::zero(), Rational::zero());
    for k in v.arrows() {
        let d = mu.weight(g.source(k)) - mu.weight(g.range(k));
        if d.is_positive() {
            pos += d;
        } else {
            neg -= d;
        }
    }
    pos.max(neg)
}

fn defect_over_generators(g: &FiniteGroupoid, mu: &PointMeasure) -> Rational {
    decompose_into_bisections(g, g.generators())
        .iter()
        .map(|v| sub_bisection_defect(v, g, mu))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Largest `|μ(s(W)) − μ(r(W))|` over sub-bisections `W` of the canonical
/// bisection decomposition of `K`. Zero iff `μ` is invariant.
pub fn invariance_defect(g: &FiniteGroupoid, mu: &PointMeasure) -> Result<Rational> {
    if !mu.is_probability() {
        return Err(Error::Validation(format!(
            "not a probability measure: total mass {}",
            rational::format(&mu.total())
        )));
    }
    Ok(defect_over_generators(g, mu))
}

/// Vertices of the invariant probability polytope, found by exact Gaussian
/// elimination of `μ(s(k)) = μ(r(k))`, `k ∈ K`. For a finite model these are
/// the normalized indicators of the orbits.
pub fn invariant_measures(g: &FiniteGroupoid) -> Result<Vec<PointMeasure>> {
    let n = g.space().len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for k in g.generators().iter() {
        let (s, r) = (g.source(k).index(), g.range(k).index());
        if s != r {
            let mut row = vec![Rational::zero(); n];
            row[s] = Rational::one();
            row[r] = -Rational::one();
            rows.push(row);
        }
    }
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let lead = rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v /= &lead;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot_row = rows[rank].clone();
                for (v, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -rows[i][free].clone();
        }
        basis.push(v);
    }
    // the basis must consist of nonnegative vectors with disjoint supports
    let mut covered = vec![false; n];
    let mut vertices = Vec::new();
    for v in basis {
        for (i, w) in v.iter().enumerate() {
            if w.is_negative() || (!w.is_zero() && std::mem::replace(&mut covered[i], true)) {
                return Err(Error::InvariantViolation(
                    "invariance system has a kernel basis that is not a family of orbit indicators".into(),
                ));
            }
        }
        let total: Rational = v.iter().sum();
        let weights = v.into_iter().map(|w| w / &total).collect();
        let mu = PointMeasure::new(g.space(), weights)?;
        if !defect_over_generators(g, &mu).is_zero() {
            return Err(Error::InvariantViolation("solved measure is not invariant".into()));
        }
        vertices.push(mu);
    }
    Ok(vertices)
}

/// `(inf, sup)` of `μ(A)` over the invariant polytope with the given vertices.
pub fn measure_range(vertices: &[PointMeasure], set: &ClopenSet) -> Option<(Rational, Rational)> {
    let values: Vec<Rational> = vertices.iter().map(|mu| mu.of(set)).collect();
    Some((values.iter().min()?.clone(), values.iter().max()?.clone()))
}

/// `ν = |B(n)x|^-1 Σ_{γ ∈ B(n)x} δ_{r(γ)}`.
pub fn empirical_measure(g: &FiniteGroupoid, x: Word, n: u32) -> PointMeasure {
    let b = ball_source(g, x, n);
    let mut weights = vec![Rational::zero(); g.space().len()];
    let unit = ratio(1, b.len());
    for a in b.iter() {
        weights[g.range(a).index()] += &unit;
    }
    PointMeasure {
        space: g.space().clone(),
        weights,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalBound {
    /// Largest `|ν(r(U)) − ν(s(U))|` over generator sub-bisections `U`.
    #[serde(with = "crate::rational::serde_rational")]
    pub defect: Rational,
    /// Largest `|V·B(n)x Δ B(n)x| / |B(n)x|` over the bisections `V` of `K`.
    #[serde(with = "crate::rational::serde_rational")]
    pub bound: Rational,
}

pub fn empirical_invariance_bound(g: &FiniteGroupoid, x: Word, n: u32) -> Result<EmpiricalBound> {
    let nu = empirical_measure(g, x, n);
    let b = ball_source(g, x, n);
    let mut defect = Rational::zero();
    let mut bound = Rational::zero();
    for v in decompose_into_bisections(g, g.generators()) {
        defect = defect.max(sub_bisection_defect(&v, g, &nu));
        let vb = left_multiply(g, &v.to_arrow_set(g.arrow_count()), &b);
        bound = bound.max(ratio(vb.symmetric_difference_len(&b), b.len()));
    }
    if defect > bound {
        return Err(Error::InvariantViolation(format!(
            "empirical defect {} exceeds the symmetric-difference bound {}",
            rational::format(&defect),
            rational::format(&bound)
        )));
    }
    Ok(EmpiricalBound { defect, bound })
}

/// `ρ(n) = sup_x |K·B(n)x Δ B(n)x| / |B(n)x|`.
pub fn rho(g: &FiniteGroupoid, n: u32) -> Rational {
    g.space()
        .points()
        .map(|x| {
            let b = ball_source(g, x, n);
            let kb = left_multiply(g, g.generators(), &b);
            ratio(kb.symmetric_difference_len(&b), b.len())
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

fn ball_fraction(g: &FiniteGroupoid, set: &ClopenSet, x: Word, n: u32) -> Rational {
    let b = ball_source(g, x, n);
    let hits = b.iter().filter(|&a| set.contains(g.range(a))).count();
    ratio(hits, b.len())
}

/// `sup_x |{γ ∈ B(n)x : r(γ) ∈ A}| / |B(n)x|`.
pub fn banach_upper_density(g: &FiniteGroupoid, set: &ClopenSet, n: u32) -> Rational {
    g.space().points().map(|x| ball_fraction(g, set, x, n)).max().unwrap_or_else(Rational::zero)
}

/// `inf_x |{γ ∈ B(n)x : r(γ) ∈ A}| / |B(n)x|`.
pub fn banach_lower_density(g: &FiniteGroupoid, set: &ClopenSet, n: u32) -> Rational {
    g.space().points().map(|x| ball_fraction(g, set, x, n)).min().unwrap_or_else(Rational::zero)
}

/// Arrow-indexed nonnegative rational functions `g_0, g_1, ...`.
pub type DensitySequence = Vec<Vec<Rational>>;

/// `g_n(γ) = [ℓ(γ) ≤ n] / |{γ' ∈ G^{r(γ)} : ℓ(γ') ≤ n}|`.
pub fn fiber_normalized_ball(g: &FiniteGroupoid, n: u32) -> Vec<Rational> {
    let lengths = g.word_lengths();
    let inside = |a: ArrowId| lengths[a.index()].is_some_and(|l| l <= n);
    let mut out = vec![Rational::zero(); g.arrow_count()];
    for y in g.space().points() {
        let fiber: Vec<ArrowId> = g.range_fiber(y).iter().copied().filter(|&a| inside(a)).collect();
        let w = ratio(1, fiber.len());
        for a in fiber {
            out[a.index()] = w.clone();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: usize,
    /// Every range-fiber sum is at most 1.
    pub fiber_sums_ok: bool,
    /// `max_x (1 − Σ_{γ ∈ G^x} g_n(γ))`.
    #[serde(with = "crate::rational::serde_rational")]
    pub deficit: Rational,
    /// `sup_{μ ∈ K_test} Σ_{γ ∈ G^{r(μ)}} |g_n(μ^-1 γ) − g_n(γ)|`.
    #[serde(with = "crate::rational::serde_rational")]
    pub displacement: Rational,
    pub passes: bool,
}

fn fiber_sum(g: &FiniteGroupoid, f: &[Rational], x: Word) -> Rational {
    g.range_fiber(x).iter().map(|a| &f[a.index()]).sum()
}

fn displacement_at(g: &FiniteGroupoid, f: &[Rational], mu: ArrowId) -> Rational {
    let inv = g.inverse(mu);
    g.range_fiber(g.range(mu))
        .iter()
        .map(|&gamma| {
            let moved = g.compose(inv, gamma).expect("composable");
            (&f[moved.index()] - &f[gamma.index()]).abs()
        })
        .sum()
}

/// Checks the last element of `seq` against the three density conditions.
pub fn verify_density_certificate(
    g: &FiniteGroupoid,
    seq: &DensitySequence,
    k_test: &ArrowSet,
    epsilon: &Rational,
) -> Result<DensityReport> {
    let (n, f) = match seq.last() {
        Some(f) => (seq.len() - 1, f),
        None => return Err(Error::Validation("empty density sequence".into())),
    };
    if f.len() != g.arrow_count() {
        return Err(Error::Validation("density has the wrong number of arrows".into()));
    }
    if let Some(i) = f.iter().position(|v| v.is_negative()) {
        return Err(Error::Validation(format!("density is negative at arrow {i}")));
    }
    let mut fiber_sums_ok = true;
    let mut deficit = Rational::zero();
    for x in g.space().points() {
        let s = fiber_sum(g, f, x);
        fiber_sums_ok &= s <= Rational::one();
        deficit = deficit.max(Rational::one() - s);
    }
    let displacement = k_test
        .iter()
        .map(|mu| displacement_at(g, f, mu))
        .max()
        .unwrap_or_else(Rational::zero);
    let passes = fiber_sums_ok && &deficit < epsilon && &displacement < epsilon;
    Ok(DensityReport {
        n,
        fiber_sums_ok,
        deficit,
        displacement,
        passes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    /// The extended function, indexed by arrows of `G`.
    pub values: Vec<Rational>,
    /// Number of range fibers and arrows at which the sums were compared.
    pub fibers_checked: usize,
    pub displacements_checked: usize,
}

/// Extends `f` (sparse, indexed by arrows of `G`, supported on the open
/// subgroupoid `H` embedded by `embedding`) by zero, and checks that fiber sums
/// and displacement sums agree when computed in `G` and in `H`.
pub fn extend_density_by_zero(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    embedding: &[ArrowId],
    f: &[(ArrowId, Rational)],
) -> Result<Extension> {
    let mut local = vec![None; g.arrow_count()];
    for (i, a) in embedding.iter().enumerate() {
        local[a.index()] = Some(i);
    }
    let mut on_h = vec![Rational::zero(); h.arrow_count()];
    let mut values = vec![Rational::zero(); g.arrow_count()];
    for (a, v) in f {
        if v.is_negative() {
            return Err(Error::Validation(format!("density is negative at arrow {}", a.0)));
        }
        match local.get(a.index()).copied().flatten() {
            Some(i) => on_h[i] = v.clone(),
            None if v.is_zero() => {}
            None => return Err(Error::Validation(format!("support escapes H at arrow {}", a.0))),
        }
        values[a.index()] = v.clone();
    }
    for x in h.space().points() {
        if fiber_sum(g, &values, x) != fiber_sum(h, &on_h, x) {
            return Err(Error::InvariantViolation(format!(
                "fiber sums over {} differ between G and H",
                g.space().format(x)
            )));
        }
    }
    for (i, &mu) in embedding.iter().enumerate() {
        if displacement_at(g, &values, mu) != displacement_at(h, &on_h, ArrowId(i as u32)) {
            return Err(Error::InvariantViolation(format!(
                "displacement sums at arrow {} differ between G and H",
                mu.0
            )));
        }
    }
    Ok(Extension {
        values,
        fibers_checked: h.space().len(),
        displacements_checked: embedding.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{build_from_spec, odometer_spec, units_only, GroupoidSpec, Limits, Mode};
    use crate::rational::{int, rat};

    fn odometer(depth: u32) -> FiniteGroupoid {
        build_from_spec(&GroupoidSpec::Transformation(odometer_spec(depth, Mode::Full)), &Limits::default()).unwrap()
    }

    #[test]
    fn invariance_examples() {
        let g = odometer(3);
        let s = g.space();
        assert_eq!(invariance_defect(&g, &PointMeasure::uniform(s)).unwrap(), int(0));
        assert_eq!(invariance_defect(&g, &PointMeasure::point_mass(s, Word(3))).unwrap(), int(1));
        let units = units_only(s).unwrap();
        assert_eq!(invariance_defect(&units, &PointMeasure::point_mass(s, Word(3))).unwrap(), int(0));
        let half = PointMeasure::new(s, vec![rat(1, 16); 8]).unwrap();
        assert!(matches!(invariance_defect(&g, &half), Err(Error::Validation(_))));
    }

    #[test]
    fn invariant_polytope() {
        let g = odometer(3);
        let v = invariant_measures(&g).unwrap();
        assert_eq!(v, vec![PointMeasure::uniform(g.space())]);
        let units = units_only(g.space()).unwrap();
        assert_eq!(invariant_measures(&units).unwrap().len(), 8);
    }

    #[test]
    fn empirical_examples() {
        let g = odometer(3);
        let x = Word(2);
        assert_eq!(empirical_measure(&g, x, 0), PointMeasure::point_mass(g.space(), x));
        assert_eq!(empirical_measure(&g, x, 4), PointMeasure::uniform(g.space()));
        let nu = empirical_measure(&g, x, 1);
        for y in [1, 2, 3] {
            assert_eq!(nu.weight(Word(y)), &rat(1, 3));
        }
        let b4 = empirical_invariance_bound(&g, x, 4).unwrap();
        assert_eq!((b4.defect, b4.bound), (int(0), int(0)));
        let b1 = empirical_invariance_bound(&g, x, 1).unwrap();
        assert_eq!(b1.bound, rat(2, 3));
        assert!(b1.defect <= rat(2, 3));
    }

    #[test]
    fn banach_densities() {
        let g = odometer(3);
        let s = g.space();
        let a = ClopenSet::parse_expr(s, "[0]").unwrap();
        assert_eq!(banach_upper_density(&g, &a, 4), rat(1, 2));
        assert_eq!(banach_lower_density(&g, &a, 4), rat(1, 2));
        assert_eq!(banach_upper_density(&g, &a, 1), int(1));
        assert_eq!(banach_upper_density(&g, &ClopenSet::full(s), 2), int(1));
        assert_eq!(rho(&g, 4), int(0));
        for n in 0..5 {
            assert_eq!(
                banach_lower_density(&g, &a, n),
                int(1) - banach_upper_density(&g, &a.complement(), n)
            );
        }
    }

    #[test]
    fn density_certificates() {
        let g = odometer(3);
        let seq: DensitySequence = (0..=3).map(|n| fiber_normalized_ball(&g, n)).collect();
        let r = verify_density_certificate(&g, &seq, g.generators(), &rat(1, 2)).unwrap();
        assert_eq!(r.deficit, int(0));
        assert_eq!(r.displacement, rat(2, 7));
        assert!(r.passes);
        let zero = vec![vec![Rational::zero(); g.arrow_count()]];
        let r = verify_density_certificate(&g, &zero, g.generators(), &rat(1, 2)).unwrap();
        assert_eq!(r.deficit, int(1));
        assert!(!r.passes);
        let mut neg = zero.clone();
        neg[0][0] = int(-1);
        assert!(matches!(
            verify_density_certificate(&g, &neg, g.generators(), &rat(1, 2)),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn extension_by_zero_on_units() {
        let g = odometer(3);
        let (h, emb) = g.generated_subgroupoid(&g.empty_set()).unwrap();
        assert_eq!(h.arrow_count(), 8);
        let f: Vec<(ArrowId, Rational)> = emb.iter().map(|&a| (a, int(1))).collect();
        let ext = extend_density_by_zero(&g, &h, &emb, &f).unwrap();
        for x in g.space().points() {
            assert_eq!(fiber_sum(&g, &ext.values, x), int(1));
        }
        let escape = vec![(g.inverse(g.generators().iter().next().unwrap()), int(1))];
        assert!(matches!(extend_density_by_zero(&g, &h, &emb, &escape), Err(Error::Validation(_))));
    }

    #[test]
    fn measure_doc_round_trip() {
        let g = odometer(2);
        let mu = PointMeasure::new(g.space(), vec![rat(1, 2), int(0), rat(1, 4), rat(1, 4)]).unwrap();
        let doc = mu.to_doc();
        assert_eq!(doc.weights.len(), 3);
        assert_eq!(PointMeasure::from_doc(g.space(), &doc).unwrap(), mu);
    }
}
