//! Subequivalence witnesses, their verifier, the m-comparison algorithm and the
//! exhaustion algorithm that upgrades weak m-comparison to comparison.
//!
//! `A ≾_m B` is witnessed by families `𝒰_0, …, 𝒰_m` of bisections such that the
//! source images cover `A` and, within each family, the range images are
//! pairwise disjoint subsets of `B`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{decompose_into_bisections, ArrowId, ArrowSet, Bisection, FiniteGroupoid};
use crate::growth::{ball, estimate_ord, growth_function, m_parameter};
use crate::measure::{invariant_measures, measure_range, PointMeasure};
use crate::rational::{self, Rational};
use crate::unitspace::{ClopenSet, DyadicRadius, Word};

fn check_space(g: &FiniteGroupoid, set: &ClopenSet, what: &str) -> Result<()> {
    let (s, t) = (g.space(), set.space());
    if Arc::ptr_eq(s, t) || (s.alphabet() == t.alphabet() && s.depth() == t.depth() && s.len() == t.len()) {
        Ok(())
    } else {
        Err(Error::Usage(format!("{what} lives on a different unit space than the groupoid")))
    }
}

/// One step of a comparison run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// Index of the bisection in the decomposition of `D` (or in the cover).
    pub v_index: usize,
    /// Family the piece was added to.
    pub family: usize,
    /// Exponent `j` of the radius `2^-j` chosen at this step (-1 for a radius
    /// above the diameter); absent for exhaustion-loop steps.
    pub epsilon_exponent: Option<i64>,
    pub u_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubequivalenceWitness {
    pub families: Vec<Vec<Bisection>>,
    pub provenance: Vec<StepRecord>,
    /// The `m` of the hypothesis that produced the witness, if any.
    pub hypothesis_m: Option<u64>,
}

impl SubequivalenceWitness {
    pub fn piece_count(&self) -> usize {
        self.families.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub passes: bool,
    pub families: usize,
    pub pieces: usize,
    pub failure: Option<String>,
}

/// Independently re-checks a witness from the raw arrow table: coverage of
/// `A` by source images, ranges inside `B`, and disjoint ranges per family.
pub fn verify_witness(
    g: &FiniteGroupoid,
    a: &ClopenSet,
    b: &ClopenSet,
    w: &SubequivalenceWitness,
) -> Result<WitnessReport> {
    check_space(g, a, "A")?;
    check_space(g, b, "B")?;
    let n = g.space().len();
    let mut covered = vec![false; n];
    let mut failure = None;
    'families: for (fi, family) in w.families.iter().enumerate() {
        // owner[y] = (piece index, arrow) already using range y in this family
        let mut owner: Vec<Option<(usize, ArrowId)>> = vec![None; n];
        for (pi, piece) in family.iter().enumerate() {
            let ids = piece.arrow_ids();
            let mut sources = BTreeSet::new();
            let mut ranges = BTreeSet::new();
            for &id in &ids {
                if id.index() >= g.arrow_count() {
                    return Err(Error::Validation(format!("arrow {} does not exist", id.0)));
                }
                if !sources.insert(g.source(id)) || !ranges.insert(g.range(id)) {
                    return Err(Error::Validation(format!("family {fi} piece {pi} is not a bisection")));
                }
            }
            for &id in &ids {
                let (s, r) = (g.source(id), g.range(id));
                covered[s.index()] = true;
                if !b.contains(r) {
                    failure = Some(format!(
                        "family {fi} piece {pi}: range {} of arrow {} is outside B",
                        g.space().format(r),
                        id.0
                    ));
                    break 'families;
                }
                if let Some((other, other_id)) = owner[r.index()] {
                    failure = Some(format!(
                        "family {fi}: pieces {other} and {pi} overlap at {} (arrows {} and {})",
                        g.space().format(r),
                        other_id.0,
                        id.0
                    ));
                    break 'families;
                }
                owner[r.index()] = Some((pi, id));
            }
        }
    }
    if failure.is_none() {
        if let Some(x) = a.iter().find(|x| !covered[x.index()]) {
            failure = Some(format!("point {} of A is not covered", g.space().format(x)));
        }
    }
    Ok(WitnessReport {
        passes: failure.is_none(),
        families: w.families.len(),
        pieces: w.piece_count(),
        failure,
    })
}

/// Per-source arrow lists of `D` and `D^-1 D`.
struct DFibers {
    d: Vec<Vec<ArrowId>>,
    dd: Vec<Vec<ArrowId>>,
}

impl DFibers {
    fn new(g: &FiniteGroupoid, d: &ArrowSet) -> Self {
        let n = g.space().len();
        let mut by_source = vec![Vec::new(); n];
        let mut dd = vec![Vec::new(); n];
        for beta in d.iter() {
            by_source[g.source(beta).index()].push(beta);
        }
        for x in g.space().points() {
            let mut set = BTreeSet::new();
            for &beta in &by_source[x.index()] {
                for &alpha in g.range_fiber(g.range(beta)) {
                    if d.contains(alpha) {
                        set.insert(g.compose(g.inverse(alpha), beta).expect("composable"));
                    }
                }
            }
            dd[x.index()] = set.into_iter().collect();
        }
        DFibers { d: by_source, dd }
    }

    fn lhs(&self, g: &FiniteGroupoid, x: Word, target: &ClopenSet) -> usize {
        self.dd[x.index()].iter().filter(|&&a| target.contains(g.range(a))).count()
    }

    fn rhs(&self, g: &FiniteGroupoid, x: Word, target: &ClopenSet) -> usize {
        self.d[x.index()].iter().filter(|&&a| target.contains(g.range(a))).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub passes: bool,
    /// `min_x (m·|{γ ∈ Dx : r(γ) ∈ B^-ε}| − |{γ ∈ D^-1Dx : r(γ) ∈ A^ε}|)`.
    pub min_margin: i128,
    pub worst: Word,
    pub worst_lhs: usize,
    pub worst_rhs: usize,
}

fn hypothesis_with(
    g: &FiniteGroupoid,
    fibers: &DFibers,
    a: &ClopenSet,
    b: &ClopenSet,
    m: u64,
    eps: DyadicRadius,
) -> HypothesisReport {
    let (a_eps, b_eps) = (a.fatten(eps), b.shrink(eps));
    let mut worst = (i128::MAX, Word(0), 0, 0);
    for x in g.space().points() {
        let lhs = fibers.lhs(g, x, &a_eps);
        let rhs = fibers.rhs(g, x, &b_eps);
        let margin = m as i128 * rhs as i128 - lhs as i128;
        if margin < worst.0 {
            worst = (margin, x, lhs, rhs);
        }
    }
    HypothesisReport {
        passes: worst.0 > 0,
        min_margin: worst.0,
        worst: worst.1,
        worst_lhs: worst.2,
        worst_rhs: worst.3,
    }
}

/// Evaluates `|{γ ∈ D^-1Dx : r(γ) ∈ A^ε}| < m·|{γ ∈ Dx : r(γ) ∈ B^-ε}|` at every unit.
pub fn check_hypothesis(
    g: &FiniteGroupoid,
    a: &ClopenSet,
    b: &ClopenSet,
    d: &ArrowSet,
    m: u64,
    eps: DyadicRadius,
) -> Result<HypothesisReport> {
    check_space(g, a, "A")?;
    check_space(g, b, "B")?;
    Ok(hypothesis_with(g, &DFibers::new(g, d), a, b, m, eps))
}

fn next_exponent(eps: DyadicRadius) -> u32 {
    match eps {
        DyadicRadius::OnePlus => 0,
        DyadicRadius::Pow(j) => j + 1,
        DyadicRadius::Zero => unreachable!("radius must be positive"),
    }
}

fn containments_hold(v: &Bisection, a_n: &ClopenSet, b_nk: &ClopenSet, eps_n: DyadicRadius, e: DyadicRadius) -> bool {
    let theta_a = v.image(a_n);
    let c1 = v
        .preimage(&theta_a.fatten(e.scaled_up(3)))
        .is_subset(&a_n.fatten(eps_n))
        .unwrap();
    let outside = b_nk.complement();
    let c2 = v
        .image(&v.preimage(&outside).fatten(e.scaled_up(2)))
        .is_subset(&outside.fatten(eps_n))
        .unwrap();
    c1 && c2
}

fn domain_guard_holds(v: &Bisection, a_n: &ClopenSet, e: DyadicRadius) -> bool {
    let near = v.image(a_n).fatten(e.scaled_up(3));
    near.is_subset(v.range_set()).unwrap() && v.preimage(&near).fatten(e).is_subset(v.source_set()).unwrap()
}

/// The largest dyadic `ε' < ε_n` with
/// `θ_V^-1((θ_V(A_n))^{3ε'}) ⊆ A_n^{ε_n}` and
/// `θ_V((θ_V^-1(X \ B))^{2ε'}) ⊆ (X \ B)^{ε_n}`,
/// where `3ε'` and `2ε'` are rounded up to the next dyadic radius.
pub fn choose_epsilon(v: &Bisection, a_n: &ClopenSet, b_nk: &ClopenSet, eps_n: DyadicRadius) -> Result<DyadicRadius> {
    search_epsilon(v, a_n, b_nk, eps_n, false)
}

/// As [`choose_epsilon`], and additionally `(θ_V(A_n))^{3ε'} ⊆ r(V)` and
/// `(θ_V^-1((θ_V(A_n))^{3ε'}))^{ε'} ⊆ s(V)`, which keep every point the step
/// argument touches inside the domain of `θ_V`.
pub fn choose_epsilon_guarded(
    v: &Bisection,
    a_n: &ClopenSet,
    b_nk: &ClopenSet,
    eps_n: DyadicRadius,
) -> Result<DyadicRadius> {
    search_epsilon(v, a_n, b_nk, eps_n, true)
}

fn search_epsilon(v: &Bisection, a_n: &ClopenSet, b_nk: &ClopenSet, eps_n: DyadicRadius, guarded: bool) -> Result<DyadicRadius> {
    if !eps_n.is_positive() {
        return Err(Error::Usage("epsilon must be positive".into()));
    }
    let floor = a_n.space().depth() + 1;
    let mut j = next_exponent(eps_n);
    loop {
        let e = DyadicRadius::Pow(j);
        if containments_hold(v, a_n, b_nk, eps_n, e) && (!guarded || domain_guard_holds(v, a_n, e)) {
            return Ok(e);
        }
        if j >= floor {
            return Err(Error::InvariantViolation(format!(
                "no admissible radius at or above the resolution floor 2^-{floor}"
            )));
        }
        j += 1;
    }
}

/// Result of [`run_m_comparison`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MComparison {
    pub witness: SubequivalenceWitness,
    /// Number of bisections `M_D` in the decomposition of `D`.
    pub m_d: usize,
    pub steps: usize,
    /// Number of fiber injections constructed and checked.
    pub injections_checked: usize,
}

fn state_dump(step: usize, a: &ClopenSet, bs: &[ClopenSet], eps: DyadicRadius) -> String {
    let bs: Vec<String> = bs.iter().map(|b| b.to_string()).collect();
    format!("step {step}, ε = {eps}, A = {a}, B = [{}]", bs.join(", "))
}

/// Runs the m-comparison algorithm for `A, B, D, m, ε`, producing families
/// `𝒰_1..𝒰_m` that witness `A ≾_{m−1} B`.
///
/// Refuses with a precondition error if the hypothesis fails. Executes exactly
/// `m·M_D` steps, enumerating (bisection, family) pairs with the bisection
/// index outer. After every step it checks the step invariant at every unit
/// and constructs the fiber injection `μ ↦ γ_V^-1 μ` explicitly.
pub fn run_m_comparison(
    g: &FiniteGroupoid,
    a: &ClopenSet,
    b: &ClopenSet,
    d: &ArrowSet,
    m: u64,
    eps: DyadicRadius,
) -> Result<MComparison> {
    check_space(g, a, "A")?;
    check_space(g, b, "B")?;
    if !eps.is_positive() {
        return Err(Error::Usage("epsilon must be positive".into()));
    }
    let fibers = DFibers::new(g, d);
    let hyp = hypothesis_with(g, &fibers, a, b, m, eps);
    if !hyp.passes {
        return Err(Error::Precondition(format!(
            "hypothesis fails at {}: {} arrows of D^-1Dx reach A^ε against m = {m} times {} arrows of Dx reaching B^-ε",
            g.space().format(hyp.worst),
            hyp.worst_lhs,
            hyp.worst_rhs
        )));
    }
    let m_us = m as usize;
    let vs = decompose_into_bisections(g, d);
    let mut a_n = a.clone();
    let mut bs = vec![b.clone(); m_us];
    let mut eps_n = eps;
    let mut families: Vec<Vec<Bisection>> = vec![Vec::new(); m_us];
    let mut provenance = Vec::new();
    let mut injections_checked = 0;
    let space = g.space().clone();

    for (vi, v) in vs.iter().enumerate() {
        for k0 in 0..m_us {
            let step = vi * m_us + k0 + 1;
            let eps_next = choose_epsilon_guarded(v, &a_n, &bs[k0], eps_n)?;
            let u_n = v.preimage(&bs[k0].intersection(&v.image(&a_n).fatten(eps_next))?);
            let piece = v.restrict_source(&u_n);
            let b_next = bs[k0].difference(piece.range_set())?;
            let a_next = a_n.difference(&u_n)?;

            // μ ↦ γ_V^-1 μ
            let b_before = bs[k0].shrink(eps_n);
            let b_after = b_next.shrink(eps_next);
            let a_before = a_n.fatten(eps_n);
            let a_after = a_next.fatten(eps_next);
            for x in space.points() {
                let mut images = BTreeSet::new();
                for &mu in &fibers.d[x.index()] {
                    let r = g.range(mu);
                    if !(b_before.contains(r) && !b_after.contains(r)) {
                        continue;
                    }
                    let fail = |why: &str| {
                        Error::InvariantViolation(format!(
                            "fiber injection fails for arrow {} at {}: {why}; {}",
                            mu.0,
                            space.format(x),
                            state_dump(step, &a_n, &bs, eps_n)
                        ))
                    };
                    let gamma_v = v.arrow_to(r).ok_or_else(|| fail("range outside r(V)"))?;
                    let image = g.compose(g.inverse(gamma_v), mu).expect("composable");
                    if fibers.dd[x.index()].binary_search(&image).is_err() {
                        return Err(fail("image outside D^-1Dx"));
                    }
                    let ri = g.range(image);
                    if !a_before.contains(ri) || a_after.contains(ri) {
                        return Err(fail("image range outside A_n^ε_n minus A_{n+1}^ε_{n+1}"));
                    }
                    if !images.insert(image) {
                        return Err(fail("not injective"));
                    }
                    injections_checked += 1;
                }
            }

            provenance.push(StepRecord {
                step,
                v_index: vi,
                family: k0,
                epsilon_exponent: eps_next.exponent(),
                u_size: u_n.len(),
            });
            if !piece.is_empty() {
                families[k0].push(piece);
            }
            bs[k0] = b_next;
            a_n = a_next;
            eps_n = eps_next;

            // step invariant
            let a_eps = a_n.fatten(eps_n);
            let b_eps: Vec<ClopenSet> = bs.iter().map(|b| b.shrink(eps_n)).collect();
            for x in space.points() {
                let lhs = fibers.lhs(g, x, &a_eps);
                let rhs: usize = b_eps.iter().map(|b| fibers.rhs(g, x, b)).sum();
                if lhs >= rhs {
                    return Err(Error::InvariantViolation(format!(
                        "step invariant fails at {} ({lhs} >= {rhs}) after {}",
                        space.format(x),
                        state_dump(step, &a_n, &bs, eps_n)
                    )));
                }
            }
        }
    }
    if !a_n.is_empty() {
        return Err(Error::InvariantViolation(format!(
            "A is not exhausted after {} steps: {a_n} remains",
            m_us * vs.len()
        )));
    }
    Ok(MComparison {
        witness: SubequivalenceWitness {
            families,
            provenance,
            hypothesis_m: Some(m),
        },
        m_d: vs.len(),
        steps: m_us * vs.len(),
        injections_checked,
    })
}

/// Result of [`run_exhaustion_comparison`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exhaustion {
    /// Single-family witness of `A ≾ B`.
    pub witness: SubequivalenceWitness,
    /// The base point and the reserved arrows `g_i` (one per `S_i`).
    pub base_point: Word,
    pub reserved: Vec<ArrowId>,
    pub loop_steps: usize,
    pub cycles: usize,
    /// Number of exact gap identities checked (steps × invariant measures).
    pub gap_checks: usize,
    pub fallback: Option<MComparison>,
}

/// Runs the exhaustion algorithm over `cover`, falling back to
/// [`run_m_comparison`] with `fallback_d` for whatever the loop leaves behind.
///
/// The number of reserved arrows is the largest `r ≤ m + 1` that keeps
/// `μ(B) − r·μ(U) > μ(A)` for every invariant `μ`.
pub fn run_exhaustion_comparison(
    g: &FiniteGroupoid,
    a: &ClopenSet,
    b: &ClopenSet,
    cover: &[Bisection],
    m: u64,
    fallback_d: &ArrowSet,
    eps: DyadicRadius,
) -> Result<Exhaustion> {
    check_space(g, a, "A")?;
    check_space(g, b, "B")?;
    if !g.is_minimal() {
        return Err(Error::Precondition("the groupoid is not minimal".into()));
    }
    let vertices = invariant_measures(g)?;
    let (_, sup_a) = measure_range(&vertices, a).expect("nonempty polytope");
    let (inf_b, _) = measure_range(&vertices, b).expect("nonempty polytope");
    if sup_a >= inf_b {
        return Err(Error::Precondition(format!(
            "no measure gap: sup μ(A) = {} is not below inf μ(B) = {}",
            rational::format(&sup_a),
            rational::format(&inf_b)
        )));
    }
    let x = g.space().points().next().expect("nonempty unit space");
    if a.is_empty() {
        return Ok(Exhaustion {
            witness: SubequivalenceWitness {
                families: vec![Vec::new()],
                ..Default::default()
            },
            base_point: x,
            reserved: Vec::new(),
            loop_steps: 0,
            cycles: 0,
            gap_checks: 0,
            fallback: None,
        });
    }

    // reserve S_i = {g_i} with s(g_i) = x and distinct ranges in B
    let u = ClopenSet::from_words(g.space(), [x])?;
    let gap_after = |r: usize| {
        vertices.iter().all(|mu| {
            mu.of(b) - Rational::from_integer(r.into()) * mu.of(&u) > mu.of(a)
        })
    };
    let lengths = g.word_lengths();
    let mut candidates: Vec<ArrowId> =
        g.source_fiber(x).iter().copied().filter(|&h| b.contains(g.range(h))).collect();
    candidates.sort_by_key(|&h| (a.contains(g.range(h)), lengths[h.index()].unwrap_or(u32::MAX), h));
    let mut reserved: Vec<ArrowId> = Vec::new();
    for h in candidates {
        if reserved.len() as u64 > m || !gap_after(reserved.len() + 1) {
            break;
        }
        reserved.push(h);
    }
    if reserved.is_empty() {
        return Err(Error::Precondition("cannot reserve any range in B without closing the measure gap".into()));
    }
    let s_pieces: Vec<Bisection> = reserved.iter().map(|&h| Bisection::new(g, [h])).collect::<Result<_>>()?;

    let mut b_n = b.clone();
    for s in &s_pieces {
        b_n = b_n.difference(s.range_set())?;
    }
    let mut a_n = a.clone();
    let gap = |a_set: &ClopenSet, b_set: &ClopenSet| -> Vec<Rational> {
        vertices.iter().map(|mu: &PointMeasure| mu.of(b_set) - mu.of(a_set)).collect()
    };
    let mut current_gap = gap(&a_n, &b_n);
    if current_gap.iter().any(|d| !d.is_positive()) {
        return Err(Error::InvariantViolation("reserving ranges closed the measure gap".into()));
    }

    let mut family = Vec::new();
    let mut provenance = Vec::new();
    let (mut loop_steps, mut cycles, mut gap_checks) = (0, 0, 0);
    while !a_n.is_empty() && !cover.is_empty() {
        cycles += 1;
        let mut changed = false;
        for (vi, v) in cover.iter().enumerate() {
            if a_n.is_empty() {
                break;
            }
            loop_steps += 1;
            let u_n = v.preimage(&b_n.intersection(&v.image(&a_n))?);
            let piece = v.restrict_source(&u_n);
            b_n = b_n.difference(piece.range_set())?;
            a_n = a_n.difference(&u_n)?;
            let next_gap = gap(&a_n, &b_n);
            if next_gap != current_gap {
                return Err(Error::InvariantViolation(format!(
                    "measure gap changed at exhaustion step {loop_steps}"
                )));
            }
            gap_checks += vertices.len();
            current_gap = next_gap;
            provenance.push(StepRecord {
                step: loop_steps,
                v_index: vi,
                family: 0,
                epsilon_exponent: None,
                u_size: u_n.len(),
            });
            if !piece.is_empty() {
                changed = true;
                family.push(piece);
            }
        }
        if !changed {
            break;
        }
    }

    let mut fallback = None;
    if !a_n.is_empty() {
        let (_, sup_rest) = measure_range(&vertices, &a_n).unwrap();
        let (inf_u, _) = measure_range(&vertices, &u).unwrap();
        if sup_rest > inf_u {
            return Err(Error::Precondition(format!(
                "exhaustion stalled with sup μ(A_k) = {} above inf μ(U) = {}",
                rational::format(&sup_rest),
                rational::format(&inf_u)
            )));
        }
        let run = run_m_comparison(g, &a_n, &u, fallback_d, reserved.len() as u64, eps)?;
        for (i, fam) in run.witness.families.iter().enumerate() {
            for w in fam {
                family.push(s_pieces[i].compose(g, w));
            }
        }
        fallback = Some(run);
    }
    Ok(Exhaustion {
        witness: SubequivalenceWitness {
            families: vec![family],
            provenance,
            hypothesis_m: None,
        },
        base_point: x,
        reserved,
        loop_steps,
        cycles,
        gap_checks,
        fallback,
    })
}

/// Options for [`auto_compare`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoOptions {
    pub n_start: usize,
    /// Growth table length; defaults to a few steps past the longest word.
    pub n_max: Option<usize>,
    /// Overrides the estimated order of growth.
    pub ord: Option<Rational>,
}

impl Default for AutoOptions {
    fn default() -> Self {
        AutoOptions {
            n_start: 1,
            n_max: None,
            ord: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoComparison {
    pub n: usize,
    pub big_m: usize,
    pub m: u64,
    pub ord: Rational,
    pub epsilon: DyadicRadius,
    pub hypothesis: HypothesisReport,
    pub run: MComparison,
}

/// Escalates `N`, takes `(M, m)` from the growth profile, `D = B(M)` and `ε`
/// at the resolution floor, and runs [`run_m_comparison`] once the hypothesis
/// holds. Requires `A ⊆ r(GB)`.
pub fn auto_compare(g: &FiniteGroupoid, a: &ClopenSet, b: &ClopenSet, opts: &AutoOptions) -> Result<AutoComparison> {
    check_space(g, a, "A")?;
    check_space(g, b, "B")?;
    g.check_generation()?;
    let mut saturation = ClopenSet::empty(g.space());
    for y in b.iter() {
        for &h in g.source_fiber(y) {
            saturation.insert(g.range(h));
        }
    }
    if !a.is_subset(&saturation)? {
        return Err(Error::Precondition("A is not contained in r(GB)".into()));
    }
    let n_max = opts.n_max.unwrap_or(2 * g.max_word_length() as usize + 4).max(2);
    let profile = growth_function(g, n_max)?;
    let ord = match &opts.ord {
        Some(o) => o.clone(),
        None => estimate_ord(&profile, None)?.as_rational(),
    };
    let eps = g.space().floor_radius();
    let mut n = opts.n_start.max(1);
    while 2 * n <= n_max {
        let (big_m, m) = m_parameter(&profile, n, &ord)?;
        let d = ball(g, big_m as u32);
        let hypothesis = check_hypothesis(g, a, b, &d, m, eps)?;
        if hypothesis.passes {
            let run = run_m_comparison(g, a, b, &d, m, eps)?;
            return Ok(AutoComparison {
                n,
                big_m,
                m,
                ord,
                epsilon: eps,
                hypothesis,
                run,
            });
        }
        n = big_m + 1;
    }
    Err(Error::SearchExhausted(format!("hypothesis never held for N up to {}", n_max / 2)))
}

/// Serialized witness: sets as word lists, bisections as arrow id lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub alphabet: u32,
    pub depth: u32,
    pub arrow_count: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub hypothesis_m: Option<u64>,
    pub families: Vec<Vec<Vec<u32>>>,
    pub provenance: Vec<StepRecord>,
}

impl WitnessDoc {
    pub fn new(g: &FiniteGroupoid, a: &ClopenSet, b: &ClopenSet, w: &SubequivalenceWitness) -> Self {
        WitnessDoc {
            alphabet: g.space().alphabet(),
            depth: g.space().depth(),
            arrow_count: g.arrow_count(),
            a: a.to_doc().words,
            b: b.to_doc().words,
            hypothesis_m: w.hypothesis_m,
            families: w
                .families
                .iter()
                .map(|f| f.iter().map(|p| p.arrow_ids().into_iter().map(|a| a.0).collect()).collect())
                .collect(),
            provenance: w.provenance.clone(),
        }
    }

    /// Rebuilds `(A, B, W)` against `g`; malformed bisections are validation errors.
    pub fn load(&self, g: &FiniteGroupoid) -> Result<(ClopenSet, ClopenSet, SubequivalenceWitness)> {
        let s = g.space();
        if self.alphabet != s.alphabet() || self.depth != s.depth() || self.arrow_count != g.arrow_count() {
            return Err(Error::Validation("witness was produced for a different groupoid".into()));
        }
        let words = |list: &[String]| -> Result<ClopenSet> {
            ClopenSet::from_words(s, list.iter().map(|w| s.parse_word(w)).collect::<Result<Vec<_>>>()?)
        };
        let families = self
            .families
            .iter()
            .map(|f| {
                f.iter()
                    .map(|ids| {
                        if let Some(bad) = ids.iter().find(|&&i| i as usize >= g.arrow_count()) {
                            return Err(Error::Validation(format!("arrow {bad} does not exist")));
                        }
                        Bisection::new(g, ids.iter().map(|&i| ArrowId(i)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((
            words(&self.a)?,
            words(&self.b)?,
            SubequivalenceWitness {
                families,
                provenance: self.provenance.clone(),
                hypothesis_m: self.hypothesis_m,
            },
        ))
    }
}
